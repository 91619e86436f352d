#pragma once

// Analytic bounds on z_{a,b}(m,n): the pigeonhole arguments on line sums,
// Culik's exact corollary, Roman's packing bound with its exactness
// condition, and the packing function T_{a,b}(m).

#include "kyoto/core.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace kyoto {

using Rational = boost::multiprecision::cpp_rational;

// Arithmetic ---------------------------------------------------------------------

inline BigInt binomial(long long n, long long k) {
  if (n < 0 || k < 0)
    throw InputError("binomial arguments must be non-negative");
  if (k > n)
    return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

namespace detail {

/// C(n, k) in 64 bits; zero for n < 0 or k > n. Throws on overflow.
inline std::int64_t binom64(long long n, long long k) {
  if (n < 0 || k < 0 || k > n)
    return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (long long i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r > static_cast<unsigned __int128>(INT64_MAX))
      throw InputError("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::int64_t>(r);
}

inline std::int64_t to_i64(const BigInt& v) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw InputError("value overflows 64 bits");
  return v.convert_to<std::int64_t>();
}

inline std::int64_t floor_of(const Rational& r) {
  BigInt q = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
  if (r < 0 && q * boost::multiprecision::denominator(r) != boost::multiprecision::numerator(r))
    q -= 1;
  return to_i64(q);
}

inline long long floor_div(long long num, long long den) {
  long long q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0)))
    --q;
  return q;
}

}  // namespace detail

// Line-sum arguments ---------------------------------------------------------------

/// Pigeonhole on a-subsets: sum_i C(c_i, a) <= (b-1) C(m, a).
inline bool arg_a_check(std::span<const int> col_sums, const ProblemParams& p) {
  if (static_cast<int>(col_sums.size()) > p.n)
    throw InputError("more column sums than columns");
  std::int64_t total = 0;
  for (int c : col_sums) {
    if (c < 0 || c > p.m)
      throw InputError("column sum " + std::to_string(c) + " outside [0, m]");
    total += detail::binom64(c, p.a);
  }
  return total <= (p.b - 1) * detail::binom64(p.m, p.a);
}

/// Per-row incidence bound: the r columns holding one row's ones satisfy
/// sum_i C(c_i - 1, a - 1) <= (b-1) C(m-1, a-1).
inline bool arg_d_check(std::span<const int> incident_col_sums, const ProblemParams& p) {
  if (static_cast<int>(incident_col_sums.size()) > p.n)
    throw InputError("more incident columns than columns");
  std::int64_t total = 0;
  for (int c : incident_col_sums) {
    if (c < 0 || c > p.m)
      throw InputError("column sum " + std::to_string(c) + " outside [0, m]");
    total += detail::binom64(c - 1, p.a - 1);
  }
  return total <= (p.b - 1) * detail::binom64(p.m - 1, p.a - 1);
}

// Culik and Roman ---------------------------------------------------------------------

/// z = (a-1) n + (b-1) C(m,a) whenever n >= (b-1) C(m,a).
inline std::optional<std::int64_t> culik_exact(const ProblemParams& p) {
  const std::int64_t threshold = (p.b - 1) * detail::binom64(p.m, p.a);
  if (p.n < threshold)
    return std::nullopt;
  return static_cast<std::int64_t>(p.a - 1) * p.n + threshold;
}

/// floor( (b-1)/C(q,a-1) * C(m,a) + (q+1)(a-1)/a * n ), evaluated exactly.
inline std::int64_t roman_bound(const ProblemParams& p, int q) {
  if (q < p.a - 1)
    throw InputError("Roman parameter must be at least a-1");
  const Rational first = Rational(BigInt(p.b - 1) * binomial(p.m, p.a), binomial(q, p.a - 1));
  const Rational second = Rational(BigInt(q + 1) * (p.a - 1) * p.n, p.a);
  return detail::floor_of(first + second);
}

struct RomanBest {
  std::int64_t bound = 0;
  int q = 0;
  bool transposed = false;
};

/// Minimum of roman_bound over q in [a-1, a-1+mn] and both orientations.
inline RomanBest roman_best(const ProblemParams& p) {
  RomanBest best{INT64_MAX, 0, false};
  for (bool tr : {false, true}) {
    const ProblemParams o = tr ? p.transposed() : p;
    for (int q = o.a - 1; q <= o.a - 1 + o.m * o.n; ++q) {
      const auto v = roman_bound(o, q);
      if (v < best.bound)
        best = {v, q, tr};
    }
  }
  return best;
}

// Packing function T_{a,b}(m) --------------------------------------------------------------

inline std::optional<std::int64_t> t_closed_form(int a, int b, int m) {
  using detail::binom64;
  using detail::floor_div;
  if (m < 0)
    return std::nullopt;
  auto t22 = [](long long mm) {
    return floor_div(mm * floor_div(mm - 1, 2), 3) - (mm % 6 == 5 ? 1 : 0);
  };
  if (a == 2 && b == 2)
    return m <= 2 ? 0 : t22(m);
  if (a == 2 && b > 2) {
    // Packing number of triples with every pair used at most lambda = b-1
    // times: floor(m/3 floor(lambda(m-1)/2)), one less when lambda(m-1) is
    // even and lambda C(m,2) = 1 mod 3.
    if (m <= 2)
      return 0;
    const long long lambda = b - 1;
    long long v = floor_div(m * floor_div(lambda * (m - 1), 2), 3);
    if ((lambda * (m - 1)) % 2 == 0 && (lambda * binom64(m, 2)) % 3 == 1)
      --v;
    return v;
  }
  if (a == 3 && b == 2) {
    if (m <= 3)
      return 0;
    const long long inner = floor_div((m - 1) * floor_div(m - 2, 2), 3) - (m % 6 == 0 ? 1 : 0);
    return floor_div(m * inner, 4);
  }
  return std::nullopt;
}

/// T_{a,b}(m) <= floor( m/(a+1) * floor( (b-1)/a * C(m-1,a-1) ) ).
inline std::int64_t t_upper_bound(int a, int b, int m) {
  if (m <= a)
    throw InputError("T upper bound needs m > a");
  const std::int64_t per_point = detail::floor_div((b - 1) * detail::binom64(m - 1, a - 1), a);
  return detail::floor_div(static_cast<long long>(m) * per_point, a + 1);
}

namespace detail {

struct TFixture {
  int a, b, m;
  std::int64_t value;
};

// Optimal coverings found by integer programming (see data/coverings.txt).
inline constexpr TFixture t_fixtures[] = {
    {3, 3, 5, 5},    {3, 3, 6, 9},    {3, 3, 7, 15},   {3, 3, 9, 40},   {3, 3, 11, 80},
    {3, 3, 12, 108}, {3, 3, 13, 143}, {3, 3, 15, 225}, {3, 3, 17, 340}, {3, 3, 18, 405},
    {4, 4, 6, 7},    {4, 4, 7, 21},   {4, 4, 8, 36},   {4, 4, 9, 69},
};

}  // namespace detail

/// Exact T_{a,b}(m) when known, empty otherwise.
inline std::optional<std::int64_t> t_value(int a, int b, int m) {
  if (m <= a)
    return 0;
  if (auto v = t_closed_form(a, b, m))
    return v;
  for (const auto& f : detail::t_fixtures)
    if (f.a == a && f.b == b && f.m == m)
      return f.value;
  // A Steiner quadruple system exists for these m; doubling it is a perfect
  // multiplicity-2 packing.
  if (a == 3 && b == 3 && (m % 6 == 2 || m % 6 == 4))
    return 2 * *t_closed_form(3, 2, m);
  return std::nullopt;
}

/// Largest n below which Roman's bound is not known to be exact:
/// (b-1) C(m,a) - a T_{a,b}(m), optionally lowered by a-1 when the packing
/// is not perfect. Empty when T is unknown.
inline std::optional<std::int64_t> roman_exact_threshold(const ProblemParams& p, bool reduced = false) {
  const auto t = t_value(p.a, p.b, p.m);
  if (!t)
    return std::nullopt;
  const BigInt total = BigInt(p.b - 1) * binomial(p.m, p.a);
  std::int64_t threshold = detail::to_i64(total - BigInt(p.a) * *t);
  if (reduced && BigInt(*t) * (p.a + 1) < total)
    threshold -= p.a - 1;
  return threshold;
}

/// Exact value from Roman's equality case, in the given orientation only.
inline std::optional<std::int64_t> roman_exact(const ProblemParams& p, bool reduced = false) {
  const auto threshold = roman_exact_threshold(p, reduced);
  if (!threshold || *threshold > p.n)
    return std::nullopt;
  return std::min(roman_bound(p, p.a), roman_bound(p, p.a - 1));
}

// Exact-value cache -------------------------------------------------------------------------

/// Thread-safe store of proven z values, keyed in both orientations.
class ExactCache {
public:
  void insert(const ProblemParams& p, std::int64_t z) {
    std::unique_lock lock(mutex_);
    values_[p] = z;
    values_[p.transposed()] = z;
  }

  [[nodiscard]] std::optional<std::int64_t> lookup(const ProblemParams& p) const {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(p); it != values_.end())
      return it->second;
    return std::nullopt;
  }

  [[nodiscard]] std::vector<std::pair<ProblemParams, std::int64_t>> snapshot() const {
    std::shared_lock lock(mutex_);
    return {values_.begin(), values_.end()};
  }

  [[nodiscard]] std::size_t size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
  }

private:
  mutable std::shared_mutex mutex_;
  std::map<ProblemParams, std::int64_t> values_;
};

// Aggregated report -------------------------------------------------------------------------

enum class BoundSource { culik, roman, inclusion, table_fixture };

struct BoundEvidence {
  BoundSource source;
  std::int64_t value;
  int q = 0;             // Roman parameter, 0 otherwise
  bool transposed = false;
  bool exact = false;
};

inline std::string to_string(const BoundEvidence& e) {
  std::string s;
  switch (e.source) {
  case BoundSource::culik: s = "culik"; break;
  case BoundSource::roman: s = "roman(" + std::to_string(e.q) + ")"; break;
  case BoundSource::inclusion: s = "inclusion"; break;
  case BoundSource::table_fixture: s = "table-fixture"; break;
  }
  if (e.transposed)
    s += "^T";
  return s;
}

struct BoundReport {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  bool exact = false;
  std::vector<BoundEvidence> provenance;
};

/// Weight of the construction with a-1 full rows and b-1 full columns.
inline std::int64_t trivial_lower_bound(const ProblemParams& p) {
  return static_cast<std::int64_t>(p.a - 1) * p.n + static_cast<std::int64_t>(p.b - 1) * (p.m - p.a + 1);
}

/// Best upper bound from the analytic arguments and the cache.
inline BoundReport z_upper(const ProblemParams& p, const ExactCache* cache = nullptr) {
  p.validate();
  BoundReport r;
  r.lower = trivial_lower_bound(p);
  const auto rb = roman_best(p);
  r.upper = rb.bound;
  r.provenance.push_back({BoundSource::roman, rb.bound, rb.q, rb.transposed, false});

  auto exact = [&](BoundEvidence e) {
    r.provenance.push_back(e);
    r.upper = std::min(r.upper, e.value);
    r.lower = std::max(r.lower, e.value);
    r.exact = true;
  };

  if (auto v = culik_exact(p))
    exact({BoundSource::culik, *v, 0, false, true});
  if (auto v = culik_exact(p.transposed()))
    exact({BoundSource::culik, *v, 0, true, true});
  if (auto v = roman_exact(p))
    exact({BoundSource::roman, *v, p.a, false, true});
  if (auto v = roman_exact(p.transposed()))
    exact({BoundSource::roman, *v, p.b, true, true});

  if (cache) {
    if (auto v = cache->lookup(p))
      exact({BoundSource::table_fixture, *v, 0, false, true});
    for (const auto& [key, z] : cache->snapshot()) {
      if (key.a != p.a || key.b != p.b || key == p)
        continue;
      if (key.m <= p.m && key.n <= p.n) {
        // Every m' x n' minor has at most z ones; averaging over all of them.
        const std::int64_t ub = z * p.m * p.n / (static_cast<std::int64_t>(key.m) * key.n);
        r.lower = std::max(r.lower, z);
        if (ub < r.upper) {
          r.upper = ub;
          r.provenance.push_back({BoundSource::inclusion, ub});
        }
      } else if (key.m >= p.m && key.n >= p.n && z < r.upper) {
        r.upper = z;
        r.provenance.push_back({BoundSource::inclusion, z});
      }
    }
  }
  if (r.exact)
    r.lower = r.upper;
  r.lower = std::min(r.lower, r.upper);
  return r;
}

}  // namespace kyoto
