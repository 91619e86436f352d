#pragma once

// Embedded DPLL solver: two-watched-literal unit propagation, chronological
// backtracking, lowest-index decisions with a fixed polarity. No learning,
// no restarts; the same input always gives the same run.
//
// Model enumeration decides the projection variables first. After a model is
// reported, the levels below the last projection decision are closed, the
// deepest open projection decision is flipped and the blocking clause is
// added; it is satisfied by that flip, so the watch invariants hold under
// chronological backtracking.

#include "kyoto/encoder.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace kyoto {

enum class SolveStatus { sat, unsat, unknown };

inline const char* to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::sat: return "SAT";
  case SolveStatus::unsat: return "UNSAT";
  case SolveStatus::unknown: return "UNKNOWN";
  }
  return "?";
}

enum class Polarity { prefer_true, prefer_false };

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  double seconds = 0.0;
};

/// Variable values are +1 (true), -1 (false) or 0 (unassigned); index 0 unused.
using Model = std::vector<std::int8_t>;

inline bool clause_satisfied(const Clause& c, const Model& model) {
  for (Lit l : c) {
    const auto v = model[std::abs(l)];
    if ((l > 0 && v > 0) || (l < 0 && v < 0))
      return true;
  }
  return false;
}

inline bool model_satisfies(const Cnf& cnf, const Model& model) {
  if (static_cast<int>(model.size()) != cnf.num_vars + 1)
    return false;
  for (const auto& c : cnf.clauses)
    if (!clause_satisfied(c, model))
      return false;
  return true;
}

class SolveOutcome {
public:
  SolveOutcome() = default;

  static SolveOutcome unsat(SolveStats stats) { return SolveOutcome(SolveStatus::unsat, {}, stats); }
  static SolveOutcome unknown(SolveStats stats) { return SolveOutcome(SolveStatus::unknown, {}, stats); }

  /// Throws unless model satisfies every clause of cnf.
  static SolveOutcome sat(const Cnf& cnf, Model model, SolveStats stats) {
    if (!model_satisfies(cnf, model))
      throw Error("model does not satisfy the formula");
    return SolveOutcome(SolveStatus::sat, std::move(model), stats);
  }

  [[nodiscard]] SolveStatus status() const noexcept { return status_; }
  [[nodiscard]] const std::optional<Model>& model() const noexcept { return model_; }
  [[nodiscard]] const SolveStats& stats() const noexcept { return stats_; }

private:
  SolveOutcome(SolveStatus s, std::optional<Model> m, SolveStats st)
      : status_(s), model_(std::move(m)), stats_(st) {}

  SolveStatus status_ = SolveStatus::unknown;
  std::optional<Model> model_;
  SolveStats stats_;
};

struct SolveOptions {
  Polarity polarity = Polarity::prefer_true;
  std::uint64_t conflict_budget = std::numeric_limits<std::uint64_t>::max();
  const std::atomic<bool>* cancel = nullptr;  // polled between conflicts
};

/// Partial assignment with its trail; trail_lim[d] is where level d+1 starts.
struct Assignment {
  Model values;
  std::vector<Lit> trail;
  std::vector<std::size_t> trail_lim;

  explicit Assignment(int num_vars = 0) : values(num_vars + 1, 0) {}

  [[nodiscard]] int level() const noexcept { return static_cast<int>(trail_lim.size()); }
  [[nodiscard]] int value(Lit l) const {
    const int v = values[std::abs(l)];
    return l > 0 ? v : -v;
  }
};

namespace detail {

class Dpll {
public:
  /// decision_order lists the variables decided first, in that order; all
  /// remaining variables follow by increasing index.
  explicit Dpll(const Cnf& cnf, const std::vector<int>& decision_order = {})
      : num_vars_(cnf.num_vars), assign_(cnf.num_vars), watches_(2 * (cnf.num_vars + 1)),
        pos_(cnf.num_vars + 1, -1), priority_(cnf.num_vars + 1, false) {
    for (int v : decision_order)
      if (pos_[v] < 0) {
        pos_[v] = static_cast<int>(order_.size());
        order_.push_back(v);
        priority_[v] = true;
      }
    for (int v = 1; v <= num_vars_; ++v)
      if (pos_[v] < 0) {
        pos_[v] = static_cast<int>(order_.size());
        order_.push_back(v);
      }
    for (const auto& c : cnf.clauses)
      if (!add_clause(c))
        root_conflict_ = true;
  }

  [[nodiscard]] const Assignment& assignment() const noexcept { return assign_; }
  [[nodiscard]] SolveStats& stats() noexcept { return stats_; }

  /// Asserts the root units and the given literals at level 0 and propagates.
  bool initialise(const std::vector<Lit>& assumptions = {}) {
    if (root_conflict_)
      return false;
    for (Lit l : units_)
      if (!enqueue(l))
        return false;
    for (Lit l : assumptions)
      if (!enqueue(l))
        return false;
    return propagate();
  }

  /// Exhaustive DPLL from the current state. on_model returns true to resume
  /// the search past the current model, false to stop.
  ///
  /// On resumption every level below the last priority decision is closed:
  /// with priority variables decided first, the whole subtree agrees with the
  /// reported model on them.
  SolveStatus search(const SolveOptions& opt, const std::function<bool(const Model&)>& on_model) {
    while (true) {
      const int var = next_unassigned();
      if (var == 0) {
        if (!on_model(assign_.values))
          return SolveStatus::sat;
        while (!decision_is_priority_.empty() && !decision_is_priority_.back())
          pop_level();
        if (!backtrack())
          return SolveStatus::unsat;
        for (auto& c : pending_)
          add_clause_during_search(std::move(c));
        pending_.clear();
        if (!propagate_with_backtrack(opt))
          return stop_status_;
        continue;
      }
      ++stats_.decisions;
      assign_.trail_lim.push_back(assign_.trail.size());
      flipped_.push_back(false);
      decision_is_priority_.push_back(priority_[var]);
      enqueue(opt.polarity == Polarity::prefer_true ? var : -var);
      if (!propagate_with_backtrack(opt))
        return stop_status_;
    }
  }

  /// Queues a clause to be added once the search resumes after a model. It
  /// must contain the negation of every priority decision of that model.
  void queue_after_model(Clause c) { pending_.push_back(std::move(c)); }

  /// Adds a clause that is satisfied by the current assignment or has at least
  /// two unassigned literals.
  void add_clause_during_search(Clause c) {
    if (c.size() < 2)
      return;
    // Watch non-false literals when possible.
    std::stable_partition(c.begin(), c.end(), [&](Lit l) { return assign_.value(l) >= 0; });
    add_clause(std::move(c));
  }

  bool propagate() {
    while (qhead_ < assign_.trail.size()) {
      const Lit p = assign_.trail[qhead_++];
      const Lit false_lit = -p;
      auto& ws = watches_[widx(false_lit)];
      std::size_t i = 0, j = 0;
      bool conflict = false;
      while (i < ws.size()) {
        const int ci = ws[i++];
        auto& c = clauses_[ci];
        if (c[0] == false_lit)
          std::swap(c[0], c[1]);
        if (assign_.value(c[0]) > 0) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k)
          if (assign_.value(c[k]) >= 0) {
            std::swap(c[1], c[k]);
            watch(c[1], ci);
            moved = true;
            break;
          }
        if (moved)
          continue;
        ws[j++] = ci;
        if (assign_.value(c[0]) < 0) {
          conflict = true;
          while (i < ws.size())
            ws[j++] = ws[i++];
          break;
        }
        enqueue(c[0]);
        ++stats_.propagations;
      }
      ws.resize(j);
      if (conflict) {
        qhead_ = assign_.trail.size();
        return false;
      }
    }
    return true;
  }

private:
  static std::size_t widx(Lit l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0 ? 1 : 0); }

  void watch(Lit l, int ci) { watches_[widx(l)].push_back(ci); }

  bool add_clause(Clause c) {
    if (c.empty())
      return false;
    if (c.size() == 1) {
      units_.push_back(c[0]);
      return true;
    }
    const int idx = static_cast<int>(clauses_.size());
    clauses_.push_back(std::move(c));
    watch(clauses_[idx][0], idx);
    watch(clauses_[idx][1], idx);
    return true;
  }

  bool enqueue(Lit l) {
    const int v = assign_.value(l);
    if (v != 0)
      return v > 0;
    assign_.values[std::abs(l)] = l > 0 ? 1 : -1;
    assign_.trail.push_back(l);
    return true;
  }

  int next_unassigned() {
    while (next_pos_ < static_cast<int>(order_.size()) && assign_.values[order_[next_pos_]] != 0)
      ++next_pos_;
    return next_pos_ < static_cast<int>(order_.size()) ? order_[next_pos_] : 0;
  }

  void unassign_to(std::size_t start) {
    for (std::size_t k = assign_.trail.size(); k-- > start;) {
      const int v = std::abs(assign_.trail[k]);
      assign_.values[v] = 0;
      next_pos_ = std::min(next_pos_, pos_[v]);
    }
    assign_.trail.resize(start);
    qhead_ = start;
  }

  void pop_level() {
    unassign_to(assign_.trail_lim.back());
    assign_.trail_lim.pop_back();
    flipped_.pop_back();
    decision_is_priority_.pop_back();
  }

  /// Undoes levels until one whose decision has not been flipped, then flips it.
  bool backtrack() {
    while (!assign_.trail_lim.empty()) {
      const std::size_t start = assign_.trail_lim.back();
      const Lit decision = assign_.trail[start];
      if (!flipped_.back()) {
        unassign_to(start);
        flipped_.back() = true;
        enqueue(-decision);
        return true;
      }
      pop_level();
    }
    return false;
  }

  bool propagate_with_backtrack(const SolveOptions& opt) {
    while (!propagate()) {
      ++stats_.conflicts;
      if (stats_.conflicts > opt.conflict_budget ||
          (opt.cancel && opt.cancel->load(std::memory_order_relaxed))) {
        stop_status_ = SolveStatus::unknown;
        return false;
      }
      if (!backtrack()) {
        stop_status_ = SolveStatus::unsat;
        return false;
      }
    }
    return true;
  }

  int num_vars_;
  Assignment assign_;
  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> order_;
  std::vector<int> pos_;
  std::vector<bool> priority_;
  std::vector<Lit> units_;
  std::vector<Clause> pending_;
  std::vector<bool> flipped_;
  std::vector<bool> decision_is_priority_;
  std::size_t qhead_ = 0;
  int next_pos_ = 0;
  bool root_conflict_ = false;
  SolveStatus stop_status_ = SolveStatus::unknown;
  SolveStats stats_;
};

}  // namespace detail

struct PropagationResult {
  bool conflict = false;
  Assignment assignment;  // fixpoint; meaningless when conflict is set
};

/// Unit propagation to fixpoint from the given partial assignment.
inline PropagationResult unit_propagate(const Cnf& cnf, const std::vector<Lit>& partial) {
  for (Lit l : partial)
    if (l == 0 || std::abs(l) > cnf.num_vars)
      throw InputError("assumption literal outside variable range");
  detail::Dpll engine(cnf);
  PropagationResult r;
  r.conflict = !engine.initialise(partial);
  r.assignment = engine.assignment();
  return r;
}

inline SolveOutcome solve_embedded(const Cnf& cnf, const SolveOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::Dpll engine(cnf);
  auto finish = [&] {
    engine.stats().seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return engine.stats();
  };
  if (!engine.initialise())
    return SolveOutcome::unsat(finish());
  Model found;
  const auto status = engine.search(opt, [&](const Model& m) {
    found = m;
    return false;
  });
  if (status == SolveStatus::sat)
    return SolveOutcome::sat(cnf, std::move(found), finish());
  if (status == SolveStatus::unsat)
    return SolveOutcome::unsat(finish());
  return SolveOutcome::unknown(finish());
}

inline SolveOutcome solve_embedded(const Cnf& cnf, Polarity polarity) {
  SolveOptions opt;
  opt.polarity = polarity;
  return solve_embedded(cnf, opt);
}

struct EnumerationResult {
  std::vector<Model> models;  // full models, one per distinct projection
  bool complete = false;
  SolveStats stats;
};

/// Every model distinct on the projection variables, found by blocking each
/// projected model and resuming the search. Calls on_model (if given) as each
/// model is found; returning false from it stops the enumeration early.
inline EnumerationResult enumerate_models(const Cnf& cnf, const std::vector<int>& projection,
                                          const SolveOptions& opt = {},
                                          const std::function<bool(const Model&)>& on_model = {}) {
  for (int v : projection)
    if (v <= 0 || v > cnf.num_vars)
      throw InputError("projection variable outside range");
  const auto t0 = std::chrono::steady_clock::now();
  EnumerationResult out;
  detail::Dpll engine(cnf, projection);
  if (!engine.initialise()) {
    out.complete = true;
    return out;
  }
  bool stopped = false;
  const auto status = engine.search(opt, [&](const Model& m) {
    if (!model_satisfies(cnf, m))
      throw Error("enumerated model does not satisfy the formula");
    out.models.push_back(m);
    if (on_model && !on_model(m)) {
      stopped = true;
      return false;
    }
    Clause block;
    for (int v : projection)
      block.push_back(m[v] > 0 ? -v : v);
    engine.queue_after_model(std::move(block));
    return true;
  });
  out.complete = !stopped && status == SolveStatus::unsat;
  out.stats = engine.stats();
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace kyoto
