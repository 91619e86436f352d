#pragma once

// Exhaustive reference for z_{a,b}(m,n) on tiny instances. Deliberately shares
// nothing with the bounds, partition, encoder or solver modules.

#include "kyoto/core.hpp"

namespace kyoto {

inline constexpr int default_oracle_cell_budget = 20;

namespace detail {

class BruteForce {
public:
  explicit BruteForce(const ProblemParams& p) : p_(p), cells_(p.m * p.n), grid_(p.m * p.n, 0) {}

  int run() {
    best_ = 0;
    dfs(0, 0);
    return best_;
  }

private:
  bool at(int i, int j) const { return grid_[i * p_.n + j] != 0; }

  // Only minors containing the freshly set cell (i, j) can be new.
  bool creates_minor(int i, int j) const {
    std::vector<int> rows;
    for (int r = 0; r < p_.m; ++r)
      if (r != i && at(r, j))
        rows.push_back(r);
    if (static_cast<int>(rows.size()) < p_.a - 1)
      return false;
    return for_each_subset(static_cast<int>(rows.size()), p_.a - 1, [&](std::span<const int> pick) {
      int common = 0;
      for (int c = 0; c < p_.n; ++c) {
        if (!at(i, c))
          continue;
        bool all = true;
        for (int k : pick)
          if (!at(rows[k], c)) {
            all = false;
            break;
          }
        if (all && ++common >= p_.b)
          return true;
      }
      return false;
    });
  }

  void dfs(int cell, int weight) {
    if (weight + (cells_ - cell) <= best_)
      return;
    if (cell == cells_) {
      best_ = weight;
      return;
    }
    const int i = cell / p_.n;
    const int j = cell % p_.n;
    grid_[cell] = 1;
    if (!creates_minor(i, j))
      dfs(cell + 1, weight + 1);
    grid_[cell] = 0;
    dfs(cell + 1, weight);
  }

  ProblemParams p_;
  int cells_;
  std::vector<std::uint8_t> grid_;
  int best_ = 0;
};

}  // namespace detail

/// Maximum weight of an admissible m x n matrix by depth-first search over
/// cells in row-major order. Refuses when m * n exceeds cell_budget.
inline int brute_force_z(const ProblemParams& p, int cell_budget = default_oracle_cell_budget) {
  if (p.a < 1 || p.b < 1 || p.m < 1 || p.n < 1)
    throw InputError("oracle needs positive parameters");
  if (p.m * p.n > cell_budget)
    throw BudgetError("oracle refuses " + std::to_string(p.m) + "x" + std::to_string(p.n) +
                      ": more than " + std::to_string(cell_budget) + " cells");
  if (p.a > p.m || p.b > p.n)
    return p.m * p.n;
  return detail::BruteForce(p).run();
}

}  // namespace kyoto
