#pragma once

// Computes z_{a,b}(m,n): analytic bounds first, then one SAT instance per
// admissible partition pair, weights tried downwards from the upper bound.

#include "kyoto/codec.hpp"
#include "kyoto/external.hpp"
#include "kyoto/oracle.hpp"
#include "kyoto/partitions.hpp"
#include "kyoto/solver.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>
#include <variant>

namespace kyoto {

struct SearchOptions {
  std::uint64_t conflict_budget = 0;  // per instance; 0 = unlimited
  int workers = 1;
  ExternalSolver external;            // used when command is non-empty
  Polarity polarity = Polarity::prefer_true;
};

struct PairOutcome {
  PartitionPair pair;
  SolveStatus status = SolveStatus::unknown;
  SolveStats stats;
};

/// Everything learned at one candidate weight.
struct WeightAttempt {
  int weight = 0;
  std::vector<PairOutcome> outcomes;  // in generator order; may stop at the first SAT
  std::size_t pair_count = 0;         // pairs emitted for this weight

  [[nodiscard]] bool no_pairs() const noexcept { return pair_count == 0; }
  [[nodiscard]] bool satisfiable() const {
    return std::any_of(outcomes.begin(), outcomes.end(),
                       [](const PairOutcome& o) { return o.status == SolveStatus::sat; });
  }
  [[nodiscard]] bool refuted() const {
    return outcomes.size() == pair_count &&
           std::all_of(outcomes.begin(), outcomes.end(),
                       [](const PairOutcome& o) { return o.status == SolveStatus::unsat; });
  }
};

enum class SearchMethod { bounds_only, sat_search };

inline const char* to_string(SearchMethod m) {
  return m == SearchMethod::bounds_only ? "bounds-only" : "sat-search";
}

enum class RefutationKind { upper_bound, no_pairs, unsat_pairs, unresolved };

struct ZResult {
  ProblemParams params;
  int z = 0;                 // weight of the witness
  bool exact = false;
  int upper = 0;             // equals z when exact
  BitMatrix witness;
  int refuted_weight = 0;    // z + 1
  RefutationKind refutation = RefutationKind::unresolved;
  SearchMethod method = SearchMethod::sat_search;
  BoundReport bounds;
  std::vector<WeightAttempt> attempts;  // descending weights
  double seconds = 0.0;

  /// The attempt at refuted_weight, when the SAT stage produced one.
  [[nodiscard]] const WeightAttempt* refuting_attempt() const {
    for (const auto& a : attempts)
      if (a.weight == refuted_weight)
        return &a;
    return nullptr;
  }
};

inline const char* to_string(RefutationKind k) {
  switch (k) {
  case RefutationKind::upper_bound: return "upper-bound";
  case RefutationKind::no_pairs: return "no admissible pairs";
  case RefutationKind::unsat_pairs: return "all pairs unsatisfiable";
  case RefutationKind::unresolved: return "unresolved";
  }
  return "?";
}

/// Exactly claimed_w ones and no forbidden minor.
inline bool verify_witness(const BitMatrix& mat, const ProblemParams& p, int claimed_w) {
  if (mat.rows() != p.m || mat.cols() != p.n)
    throw InputError("witness dimensions do not match parameters");
  return mat.weight() == claimed_w && !has_forbidden_minor(mat, p);
}

/// Upper bounds for sub-minors, consulting the cache for proven values.
inline ZUpperFn live_z_upper(const ProblemParams& p, const ExactCache* cache) {
  return analytic_z_upper(p, cache);
}

namespace detail {

inline SolveOutcome solve_instance(const Cnf& cnf, const SearchOptions& opt, const std::atomic<bool>* cancel) {
  if (!opt.external.command.empty())
    return solve_external(cnf, opt.external);
  SolveOptions so;
  so.polarity = opt.polarity;
  if (opt.conflict_budget > 0)
    so.conflict_budget = opt.conflict_budget;
  so.cancel = cancel;
  return solve_embedded(cnf, so);
}

/// Solves every pair at weight w until the first SAT. Returns the witness, if any.
inline std::optional<BitMatrix> solve_weight(const ProblemParams& p, int w, const ZUpperFn& z_ub,
                                             const SearchOptions& opt, WeightAttempt& attempt) {
  attempt.weight = w;
  const auto pairs = admissible_pairs(p, w, z_ub);
  attempt.pair_count = pairs.size();
  if (pairs.empty())
    return std::nullopt;

  std::vector<std::optional<PairOutcome>> slots(pairs.size());
  std::optional<BitMatrix> witness;
  std::optional<std::size_t> witness_index;
  std::mutex mtx;
  std::atomic<bool> found{false};
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= pairs.size() || found.load())
        return;
      const Cnf cnf = build_instance(p, pairs[idx]);
      const auto outcome = solve_instance(cnf, opt, &found);
      PairOutcome po{pairs[idx], outcome.status(), outcome.stats()};
      std::lock_guard lock(mtx);
      if (outcome.status() == SolveStatus::sat) {
        BitMatrix mat = decode_cells(p, *outcome.model());
        if (!verify_witness(mat, p, w))
          throw Error("solver model decodes to an inadmissible matrix");
        if (!witness_index || idx < *witness_index) {
          witness = std::move(mat);
          witness_index = idx;
        }
        found.store(true);
      }
      // Runs cut short by another worker's SAT are not evidence.
      if (outcome.status() != SolveStatus::unknown || !found.load())
        slots[idx] = po;
    }
  };

  const int threads = std::max(1, std::min<int>(opt.workers, static_cast<int>(pairs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }
  for (auto& s : slots)
    if (s)
      attempt.outcomes.push_back(std::move(*s));
  return witness;
}

}  // namespace detail

/// Exact z when the budget allows, otherwise the best witness with the
/// smallest weight not refuted as upper.
inline ZResult compute_z(const ProblemParams& p, const SearchOptions& opt = {}, ExactCache* cache = nullptr) {
  p.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ZResult r;
  r.params = p;
  r.bounds = z_upper(p, cache);
  const ZUpperFn z_ub = live_z_upper(p, cache);

  int unresolved_above = -1;  // highest weight neither refuted nor satisfied
  for (int w = static_cast<int>(r.bounds.upper); w >= 0; --w) {
    WeightAttempt attempt;
    auto witness = detail::solve_weight(p, w, z_ub, opt, attempt);
    const bool refuted = attempt.refuted();
    r.attempts.push_back(std::move(attempt));
    if (witness) {
      r.z = w;
      r.witness = std::move(*witness);
      break;
    }
    if (!refuted && unresolved_above < 0)
      unresolved_above = w;
    if (r.bounds.exact && refuted)
      throw Error("no witness at the analytically exact weight " + std::to_string(w) + " for " +
                  to_string(p));
  }
  if (r.witness.empty())
    throw Error("search found no witness for " + to_string(p));

  r.refuted_weight = r.z + 1;
  r.exact = unresolved_above < 0;
  r.upper = r.exact ? r.z : unresolved_above;
  r.method = r.bounds.exact ? SearchMethod::bounds_only : SearchMethod::sat_search;
  if (!r.exact)
    r.refutation = RefutationKind::unresolved;
  else if (r.z == r.bounds.upper)
    r.refutation = RefutationKind::upper_bound;
  else if (const auto* a = r.refuting_attempt(); a && a->no_pairs())
    r.refutation = RefutationKind::no_pairs;
  else
    r.refutation = RefutationKind::unsat_pairs;

  if (cache && r.exact)
    cache->insert(p, r.z);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// compute_z against the exhaustive oracle.
inline bool cross_check(const ProblemParams& p, const SearchOptions& opt = {}, int cell_budget = default_oracle_cell_budget) {
  const int expected = brute_force_z(p, cell_budget);
  const auto r = compute_z(p, opt);
  return r.exact && r.z == expected;
}

// Results file ----------------------------------------------------------------------

/// One line per result:
///   a b m n z exact|bracket upper method seconds H W payload
struct ResultRecord {
  ProblemParams params;
  int z = 0;
  bool exact = false;
  int upper = 0;
  std::string method;
  double seconds = 0.0;
  std::string code;
};

inline ResultRecord to_record(const ZResult& r) {
  return {r.params, r.z, r.exact, r.upper, to_string(r.method), r.seconds, encode_matrix(r.witness)};
}

inline std::string format_record(const ResultRecord& rec) {
  std::ostringstream os;
  os << to_string(rec.params) << ' ' << rec.z << ' ' << (rec.exact ? "exact" : "bracket") << ' ' << rec.upper
     << ' ' << rec.method << ' ' << rec.seconds << ' ' << rec.code;
  return os.str();
}

inline ResultRecord parse_record(const std::string& line) {
  std::istringstream in(line);
  ResultRecord rec;
  std::string exactness, h, w, payload;
  if (!(in >> rec.params.a >> rec.params.b >> rec.params.m >> rec.params.n >> rec.z >> exactness >> rec.upper >>
        rec.method >> rec.seconds >> h >> w >> payload))
    throw InputError("malformed results line: " + line);
  if (exactness != "exact" && exactness != "bracket")
    throw InputError("malformed results line: " + line);
  rec.exact = exactness == "exact";
  rec.code = h + " " + w + " " + payload;
  const auto mat = decode_matrix(rec.code);
  if (!verify_witness(mat, rec.params, rec.z))
    throw InputError("results line carries an invalid witness: " + line);
  return rec;
}

/// Loads exact records into the cache; returns the number of records read.
inline std::size_t load_results(const std::string& path, ExactCache& cache) {
  std::ifstream in(path);
  if (!in)
    return 0;
  std::size_t count = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#')
      continue;
    const auto rec = parse_record(line);
    if (rec.exact)
      cache.insert(rec.params, rec.z);
    ++count;
  }
  return count;
}

inline void append_result(const std::string& path, const ZResult& r) {
  std::ofstream out(path, std::ios::app);
  if (!out)
    throw InputError("cannot open results file " + path);
  out << format_record(to_record(r)) << '\n';
}

}  // namespace kyoto
