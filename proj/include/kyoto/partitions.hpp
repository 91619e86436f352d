#pragma once

// Admissible line-sum partitions. Column partitions split the weight w into n
// non-increasing parts in [0, m]; row partitions swap the roles. A branch is
// cut as soon as a prefix violates the a-subset pigeonhole bound or exceeds
// the best known z for the minor it spans.

#include "kyoto/bounds.hpp"

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace kyoto {

enum class Orientation { rows, cols };

struct Partition {
  std::vector<int> parts;  // non-increasing, padded with zeros to full length
  int bound = 0;           // largest allowed part
  int weight = 0;

  bool operator==(const Partition&) const = default;
  auto operator<=>(const Partition& o) const { return parts <=> o.parts; }
};

struct PartitionPair {
  Partition rows;  // length m, parts in [0, n]
  Partition cols;  // length n, parts in [0, m]
  bool operator==(const PartitionPair&) const = default;
};

/// Sound upper bound on z_{a,b}(rows, cols) for the problem's a and b.
using ZUpperFn = std::function<std::int64_t(int rows, int cols)>;

inline std::string format_parts(const std::vector<int>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i)
      s += ',';
    s += std::to_string(parts[i]);
  }
  return s;
}

inline std::vector<int> parse_parts(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  for (std::string tok; std::getline(in, tok, ',');) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw InputError("bad partition part '" + tok + "'");
    }
    if (used != tok.size() || v < 0)
      throw InputError("bad partition part '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

inline std::string format_pair(const PartitionPair& pp) {
  return format_parts(pp.rows.parts) + " | " + format_parts(pp.cols.parts);
}

/// z_{a,b}(r, c) is r * c whenever the minor does not fit.
inline ZUpperFn analytic_z_upper(const ProblemParams& p, const ExactCache* cache = nullptr) {
  return [p, cache](int r, int c) -> std::int64_t {
    if (r < p.a || c < p.b)
      return static_cast<std::int64_t>(r) * c;
    return z_upper({p.a, p.b, r, c}, cache).upper;
  };
}

namespace detail {

class PartitionGenerator {
public:
  PartitionGenerator(const ProblemParams& p, Orientation o, const ZUpperFn& z_ub,
                     const std::function<void(const Partition&)>& emit)
      : orient_(o), z_ub_(z_ub), emit_(emit) {
    // Oriented view: length parts, each at most cap; a-subsets of cap lines.
    const ProblemParams q = o == Orientation::cols ? p : p.transposed();
    cap_ = q.m;
    length_ = q.n;
    minor_ = q.a;
    limit_a_ = (q.b - 1) * binom64(q.m, q.a);
    prefix_.reserve(length_);
  }

  void run(int w) {
    if (w < 0 || w > cap_ * length_)
      return;
    z_cache_.assign(length_ + 1, -1);
    rec(cap_, length_, w);
  }

private:
  std::int64_t prefix_z(int len) {
    if (z_cache_[len] < 0)
      z_cache_[len] = orient_ == Orientation::cols ? z_ub_(cap_, len) : z_ub_(len, cap_);
    return z_cache_[len];
  }

  bool push(int t) {
    prefix_.push_back(t);
    a_sum_.push_back((a_sum_.empty() ? 0 : a_sum_.back()) + binom64(t, minor_));
    sum_.push_back((sum_.empty() ? 0 : sum_.back()) + t);
    return a_sum_.back() <= limit_a_ && sum_.back() <= prefix_z(static_cast<int>(prefix_.size()));
  }

  void pop(int count = 1) {
    for (int k = 0; k < count; ++k) {
      prefix_.pop_back();
      a_sum_.pop_back();
      sum_.pop_back();
    }
  }

  void output() {
    int pushed = 0;
    bool ok = true;
    while (static_cast<int>(prefix_.size()) < length_) {
      ++pushed;
      if (!push(0)) {
        ok = false;
        break;
      }
    }
    if (ok)
      emit_(Partition{prefix_, cap_, sum_.empty() ? 0 : static_cast<int>(sum_.back())});
    pop(pushed);
  }

  void rec(int cap, int remaining, int w) {
    if (w == 0) {
      output();
      return;
    }
    if (remaining == 0 || w > cap * remaining)
      return;
    if (w > (cap - 1) * remaining) {
      // Pigeonhole: the next d parts must all equal cap.
      const int d = w - (cap - 1) * remaining;
      int pushed = 0;
      bool ok = true;
      while (pushed < d) {
        ++pushed;
        if (!push(cap)) {
          ok = false;
          break;
        }
      }
      if (ok)
        rec(cap, remaining - d, w - d * cap);
      pop(pushed);
      return;
    }
    const int lo = (w + remaining - 1) / remaining;
    const int hi = std::min(w, cap);
    for (int t = lo; t <= hi; ++t) {
      if (push(t))
        rec(t, remaining - 1, w - t);
      pop();
    }
  }

  Orientation orient_;
  const ZUpperFn& z_ub_;
  const std::function<void(const Partition&)>& emit_;
  int cap_ = 0;
  int length_ = 0;
  int minor_ = 0;
  std::int64_t limit_a_ = 0;
  std::vector<int> prefix_;
  std::vector<std::int64_t> a_sum_;
  std::vector<std::int64_t> sum_;
  std::vector<std::int64_t> z_cache_;
};

}  // namespace detail

/// Calls emit for every admissible partition of w, in lexicographic order.
inline void for_each_partition(const ProblemParams& p, int w, Orientation o, const ZUpperFn& z_ub,
                               const std::function<void(const Partition&)>& emit) {
  detail::PartitionGenerator gen(p, o, z_ub, emit);
  gen.run(w);
}

inline std::vector<Partition> generate_partitions(const ProblemParams& p, int w, Orientation o,
                                                  const ZUpperFn& z_ub) {
  std::vector<Partition> out;
  for_each_partition(p, w, o, z_ub, [&](const Partition& part) { out.push_back(part); });
  return out;
}

namespace detail {

inline void check_partition_shape(const Partition& part, int length, int bound, const char* what) {
  if (static_cast<int>(part.parts.size()) != length)
    throw InputError(std::string(what) + " partition has wrong length");
  int sum = 0;
  for (std::size_t i = 0; i < part.parts.size(); ++i) {
    const int v = part.parts[i];
    if (v < 0 || v > bound)
      throw InputError(std::string(what) + " part out of range");
    if (i && v > part.parts[i - 1])
      throw InputError(std::string(what) + " partition is not non-increasing");
    sum += v;
  }
  if (sum != part.weight)
    throw InputError(std::string(what) + " partition weight is inconsistent");
}

}  // namespace detail

/// The per-row incidence test for one pair, pessimal in both orientations: the
/// fullest row against the emptiest columns, and vice versa.
inline bool pair_survives(const PartitionPair& pp, const ProblemParams& p) {
  const auto& r = pp.rows.parts;
  const auto& c = pp.cols.parts;
  const int rmax = r.empty() ? 0 : r.front();
  const int cmax = c.empty() ? 0 : c.front();
  if (rmax > static_cast<int>(c.size()) || cmax > static_cast<int>(r.size()))
    return false;
  const std::span<const int> least_cols(c.data() + c.size() - rmax, rmax);
  const std::span<const int> least_rows(r.data() + r.size() - cmax, cmax);
  return arg_d_check(least_cols, p) && arg_d_check(least_rows, p.transposed());
}

/// All row/column partition combinations surviving pair_survives.
inline std::vector<PartitionPair> pair_partitions(const std::vector<Partition>& rows,
                                                  const std::vector<Partition>& cols,
                                                  const ProblemParams& p) {
  std::vector<PartitionPair> out;
  const int w = !rows.empty() ? rows.front().weight : (!cols.empty() ? cols.front().weight : 0);
  for (const auto& r : rows) {
    detail::check_partition_shape(r, p.m, p.n, "row");
    if (r.weight != w)
      throw InputError("row partitions have mixed weights");
  }
  for (const auto& c : cols) {
    detail::check_partition_shape(c, p.n, p.m, "column");
    if (c.weight != w)
      throw InputError("column partitions have mixed weights");
  }
  for (const auto& r : rows)
    for (const auto& c : cols) {
      PartitionPair pp{r, c};
      if (pair_survives(pp, p))
        out.push_back(std::move(pp));
    }
  return out;
}

/// Row and column generation followed by pairing, for one weight.
inline std::vector<PartitionPair> admissible_pairs(const ProblemParams& p, int w, const ZUpperFn& z_ub) {
  return pair_partitions(generate_partitions(p, w, Orientation::rows, z_ub),
                         generate_partitions(p, w, Orientation::cols, z_ub), p);
}

}  // namespace kyoto
