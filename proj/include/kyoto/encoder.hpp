#pragma once

// CNF construction for one (parameters, partition pair) instance.
//
// Cell (i, j) is variable i*n + j + 1. Auxiliary variables follow, allocated
// in construction order and tagged with the constraint that owns them.

#include "kyoto/partitions.hpp"

#include <cstdlib>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kyoto {

using Lit = int;
using Clause = std::vector<Lit>;

struct VarRange {
  int first = 0;  // inclusive
  int last = 0;   // inclusive; last < first means empty
  std::string role;
};

struct Cnf {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<VarRange> ranges;
  std::vector<std::string> comments;  // emitted verbatim after "c "

  int new_var() { return ++num_vars; }

  /// Reserves count fresh variables under one role tag; returns the first.
  int new_vars(int count, std::string role) {
    const int first = num_vars + 1;
    num_vars += count;
    ranges.push_back({first, num_vars, std::move(role)});
    return first;
  }

  void add(Clause c) {
    if (c.empty())
      throw InputError("refusing to add an empty clause");
    for (Lit l : c)
      if (l == 0 || std::abs(l) > num_vars)
        throw InputError("literal " + std::to_string(l) + " outside variable range");
    clauses.push_back(std::move(c));
  }

  void append(std::vector<Clause> cs) {
    for (auto& c : cs)
      add(std::move(c));
  }
};

// Forbidden minors ---------------------------------------------------------------

inline int cell_var(const ProblemParams& p, int i, int j) { return i * p.n + j + 1; }

/// One clause per a x b minor: not all of its cells may be one.
inline std::vector<Clause> minor_clauses(const ProblemParams& p) {
  std::vector<Clause> out;
  for_each_subset(p.m, p.a, [&](std::span<const int> rows) {
    for_each_subset(p.n, p.b, [&](std::span<const int> cols) {
      Clause c;
      c.reserve(rows.size() * cols.size());
      for (int i : rows)
        for (int j : cols)
          c.push_back(-cell_var(p, i, j));
      out.push_back(std::move(c));
      return false;
    });
    return false;
  });
  return out;
}

// Cardinality ----------------------------------------------------------------------

/// Sequential counter for "exactly k of vars". With n = |vars|, the k(n-k)
/// auxiliaries s(i, j), 1 <= i <= k, 1 <= j <= n-k, mean "the i-th true input
/// sits at position <= i+j-1". Out-of-range counter literals are removed.
inline std::vector<Clause> exactly_k(const std::vector<Lit>& vars, int k, Cnf& cnf,
                                     const std::string& role = "card") {
  const int n = static_cast<int>(vars.size());
  if (k < 0 || k > n)
    throw InputError("cardinality " + std::to_string(k) + " out of range for " + std::to_string(n) +
                     " literals");
  std::vector<Clause> out;
  if (k == 0 || k == n) {
    for (Lit v : vars)
      out.push_back({k == 0 ? -v : v});
    return out;
  }
  const int width = n - k;
  const int base = cnf.new_vars(k * width, role);
  auto s = [&](int i, int j) -> std::optional<Lit> {
    if (i < 1 || i > k || j < 1 || j > width)
      return std::nullopt;
    return base + (i - 1) * width + (j - 1);
  };
  auto b = [&](int idx) { return vars[idx - 1]; };
  auto clause = [&](std::initializer_list<std::optional<Lit>> lits) {
    Clause c;
    for (const auto& l : lits)
      if (l)
        c.push_back(*l);
    out.push_back(std::move(c));
  };
  auto neg = [](std::optional<Lit> l) { return l ? std::optional<Lit>(-*l) : std::nullopt; };

  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= width - 1; ++j)
      clause({neg(s(i, j)), s(i, j + 1)});
  for (int i = 0; i <= k; ++i)
    for (int j = 1; j <= width; ++j)
      clause({neg(s(i, j)), s(i + 1, j), -b(i + j)});
  for (int i = 1; i <= k - 1; ++i)
    for (int j = 1; j <= width; ++j)
      clause({s(i, j), neg(s(i + 1, j))});
  for (int i = 1; i <= k; ++i)
    for (int j = 0; j <= width; ++j)
      clause({s(i, j), neg(s(i, j + 1)), b(i + j)});
  return out;
}

// Lexicographic order ----------------------------------------------------------------

/// value(lhs) <= value(rhs), first element most significant. Auxiliary c_i
/// (1 <= i < n) means "lhs < rhs is already decided within the first i
/// positions". c_0 is false and its literals are removed; clauses mentioning
/// c_n are removed since the final strictness is unconstrained.
inline std::vector<Clause> lex_leq(const std::vector<Lit>& lhs, const std::vector<Lit>& rhs, Cnf& cnf,
                                   const std::string& role = "lex") {
  if (lhs.size() != rhs.size() || lhs.empty())
    throw InputError("lex_leq needs two non-empty vectors of equal length");
  const int n = static_cast<int>(lhs.size());
  const int base = n > 1 ? cnf.new_vars(n - 1, role) : 0;
  auto c = [&](int i) { return base + i - 1; };
  std::vector<Clause> out;
  for (int i = 1; i <= n - 2; ++i)
    out.push_back({-c(i), c(i + 1)});
  for (int i = 1; i <= n; ++i) {
    const Lit a = lhs[i - 1];
    const Lit b = rhs[i - 1];
    Clause prefix;
    if (i > 1)
      prefix.push_back(c(i - 1));
    auto with = [&](std::initializer_list<Lit> lits) {
      Clause cl = prefix;
      cl.insert(cl.end(), lits);
      out.push_back(std::move(cl));
    };
    with({-a, b});
    if (i < n) {
      with({a, b, -c(i)});
      with({-a, -b, -c(i)});
      with({a, -b, c(i)});
    }
  }
  return out;
}

// Whole instance ---------------------------------------------------------------------

/// Maximal runs [first, last] of equal values in a non-increasing sequence.
inline std::vector<std::pair<int, int>> equal_runs(const std::vector<int>& parts) {
  std::vector<std::pair<int, int>> runs;
  for (int i = 0; i < static_cast<int>(parts.size());) {
    int j = i;
    while (j + 1 < static_cast<int>(parts.size()) && parts[j + 1] == parts[i])
      ++j;
    runs.emplace_back(i, j);
    i = j + 1;
  }
  return runs;
}

/// Minor clauses, exact row and column sums, and reverse-lexicographic order
/// (ones first) between adjacent equal-sum rows and between adjacent equal-sum
/// columns.
inline Cnf build_instance(const ProblemParams& p, const PartitionPair& pair) {
  p.validate();
  detail::check_partition_shape(pair.rows, p.m, p.n, "row");
  detail::check_partition_shape(pair.cols, p.n, p.m, "column");
  if (pair.rows.weight != pair.cols.weight)
    throw InputError("row and column partitions have different weights");

  Cnf cnf;
  cnf.new_vars(p.m * p.n, "cells");
  cnf.comments.push_back("kyoto params " + to_string(p));
  cnf.comments.push_back("rows " + format_parts(pair.rows.parts));
  cnf.comments.push_back("cols " + format_parts(pair.cols.parts));
  cnf.comments.push_back("cells 1.." + std::to_string(p.m * p.n) + " row-major");

  cnf.append(minor_clauses(p));

  std::vector<std::vector<Lit>> row_vars(p.m), col_vars(p.n);
  for (int i = 0; i < p.m; ++i)
    for (int j = 0; j < p.n; ++j) {
      row_vars[i].push_back(cell_var(p, i, j));
      col_vars[j].push_back(cell_var(p, i, j));
    }
  for (int i = 0; i < p.m; ++i)
    cnf.append(exactly_k(row_vars[i], pair.rows.parts[i], cnf, "row-sum " + std::to_string(i)));
  for (int j = 0; j < p.n; ++j)
    cnf.append(exactly_k(col_vars[j], pair.cols.parts[j], cnf, "col-sum " + std::to_string(j)));

  for (auto [first, last] : equal_runs(pair.rows.parts))
    for (int i = first; i < last; ++i)
      cnf.append(lex_leq(row_vars[i + 1], row_vars[i], cnf, "row-lex " + std::to_string(i)));
  for (auto [first, last] : equal_runs(pair.cols.parts))
    for (int j = first; j < last; ++j)
      cnf.append(lex_leq(col_vars[j + 1], col_vars[j], cnf, "col-lex " + std::to_string(j)));
  return cnf;
}

/// Reads the cell variables of a model (indexed by variable, 1-based) back into a matrix.
inline BitMatrix decode_cells(const ProblemParams& p, const std::vector<std::int8_t>& model) {
  BitMatrix mat(p.m, p.n);
  for (int i = 0; i < p.m; ++i)
    for (int j = 0; j < p.n; ++j)
      mat.set(i, j, model.at(cell_var(p, i, j)) > 0);
  return mat;
}

// DIMACS ---------------------------------------------------------------------------------

inline std::string emit_dimacs(const Cnf& cnf) {
  std::ostringstream os;
  for (const auto& c : cnf.comments)
    os << "c " << c << '\n';
  for (const auto& r : cnf.ranges)
    if (r.last >= r.first && r.role != "cells")
      os << "c var " << r.first << ".." << r.last << ' ' << r.role << '\n';
  os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) {
    for (Lit l : c)
      os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

/// Parses DIMACS CNF; comments are kept, role ranges are not reconstructed.
inline Cnf parse_dimacs(std::istream& in) {
  Cnf cnf;
  std::string line;
  bool header = false;
  std::size_t expected = 0;
  Clause current;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    if (line[0] == 'c') {
      cnf.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      if (!(ls >> p >> fmt >> cnf.num_vars >> expected) || fmt != "cnf")
        throw InputError("bad DIMACS header: " + line);
      header = true;
      continue;
    }
    if (!header)
      throw InputError("clause before DIMACS header");
    for (long long v; ls >> v;) {
      if (v == 0) {
        cnf.add(std::move(current));
        current.clear();
      } else {
        current.push_back(static_cast<Lit>(v));
      }
    }
    if (!ls.eof())
      throw InputError("bad DIMACS clause line: " + line);
  }
  if (!header)
    throw InputError("missing DIMACS header");
  if (!current.empty())
    throw InputError("unterminated DIMACS clause");
  if (cnf.clauses.size() != expected)
    throw InputError("DIMACS clause count mismatch");
  return cnf;
}

inline Cnf parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

}  // namespace kyoto
