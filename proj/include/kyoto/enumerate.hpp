#pragma once

// Maximal matrices up to isomorphism: row and column permutations, plus
// transposition for square matrices.

#include "kyoto/search.hpp"

#include <map>
#include <numeric>

namespace kyoto {

/// Index sets that lines may not leave; each block lists indices in increasing order.
using Blocks = std::vector<std::vector<int>>;

inline Blocks whole_block(int n) {
  Blocks b(1);
  b[0].resize(n);
  std::iota(b[0].begin(), b[0].end(), 0);
  return b;
}

inline Blocks singleton_blocks(int n) {
  Blocks b(n);
  for (int i = 0; i < n; ++i)
    b[i] = {i};
  return b;
}

/// Groups indices with equal values (e.g. line sums), in order of first appearance.
inline Blocks blocks_by_value(const std::vector<int>& values) {
  std::map<int, std::size_t> slot;
  Blocks out;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    auto [it, fresh] = slot.try_emplace(values[i], out.size());
    if (fresh)
      out.emplace_back();
    out[it->second].push_back(i);
  }
  return out;
}

/// The matrix rotated by 180 degrees.
inline BitMatrix rotated(const BitMatrix& mat) {
  BitMatrix out(mat.rows(), mat.cols());
  for (int i = 0; i < mat.rows(); ++i)
    for (int j = 0; j < mat.cols(); ++j)
      out.set(mat.rows() - 1 - i, mat.cols() - 1 - j, mat.at(i, j));
  return out;
}

struct SortTrace {
  BitMatrix result;
  int passes = 0;                 // row or column passes that changed something
  std::uint64_t swaps = 0;
  std::vector<BigInt> potentials; // potential(rotated(A)) before the first swap and after each swap
};

namespace detail {

inline void check_blocks(const Blocks& blocks, int n) {
  std::vector<int> seen(n, 0);
  for (const auto& b : blocks)
    for (int i : b) {
      if (i < 0 || i >= n || seen[i]++)
        throw InputError("blocks do not partition the index set");
    }
  for (int s : seen)
    if (!s)
      throw InputError("blocks do not partition the index set");
}

/// Insertion sort of rows within each block, ones first, first column most
/// significant. Returns true if anything moved.
inline bool sort_rows_desc(BitMatrix& mat, const Blocks& blocks, SortTrace* trace) {
  bool changed = false;
  auto row_less = [&](int r1, int r2) {
    for (int j = 0; j < mat.cols(); ++j)
      if (mat.at(r1, j) != mat.at(r2, j))
        return !mat.at(r1, j);
    return false;
  };
  for (const auto& blk : blocks)
    for (std::size_t k = 1; k < blk.size(); ++k)
      for (std::size_t t = k; t > 0 && row_less(blk[t - 1], blk[t]); --t) {
        for (int j = 0; j < mat.cols(); ++j) {
          const bool tmp = mat.at(blk[t - 1], j);
          mat.set(blk[t - 1], j, mat.at(blk[t], j));
          mat.set(blk[t], j, tmp);
        }
        changed = true;
        if (trace) {
          ++trace->swaps;
          trace->potentials.push_back(potential(rotated(mat)));
        }
      }
  return changed;
}

}  // namespace detail

/// Alternately sorts rows within row blocks and columns within column blocks,
/// in reverse-lexicographic order (ones first), until neither pass changes
/// the matrix. Every swap strictly increases the potential of the rotated
/// matrix, which bounds the number of steps.
inline SortTrace sort_to_fixpoint_traced(const BitMatrix& mat, const Blocks& row_blocks, const Blocks& col_blocks,
                                         bool record_potentials = true) {
  detail::check_blocks(row_blocks, mat.rows());
  detail::check_blocks(col_blocks, mat.cols());
  SortTrace trace;
  SortTrace* tp = record_potentials ? &trace : nullptr;
  if (record_potentials)
    trace.potentials.push_back(potential(rotated(mat)));
  BitMatrix cur = mat;
  while (true) {
    bool changed = false;
    if (detail::sort_rows_desc(cur, row_blocks, tp)) {
      changed = true;
      ++trace.passes;
    }
    BitMatrix t = cur.transposed();
    SortTrace col_trace;
    const bool col_changed = detail::sort_rows_desc(t, col_blocks, tp ? &col_trace : nullptr);
    cur = t.transposed();
    if (col_changed) {
      changed = true;
      ++trace.passes;
      if (tp) {
        // The transposed matrix rotated has the same potential as the original rotated.
        trace.swaps += col_trace.swaps;
        trace.potentials.insert(trace.potentials.end(), col_trace.potentials.begin(), col_trace.potentials.end());
      }
    }
    if (!changed)
      break;
  }
  trace.result = std::move(cur);
  return trace;
}

inline BitMatrix sort_to_fixpoint(const BitMatrix& mat, const Blocks& row_blocks, const Blocks& col_blocks) {
  return sort_to_fixpoint_traced(mat, row_blocks, col_blocks, false).result;
}

// Canonical form ---------------------------------------------------------------------

inline constexpr std::uint64_t default_canonical_node_budget = 20'000'000;

struct CanonicalSearch {
  BitMatrix form;                 // lexicographically greatest image
  std::uint64_t automorphisms = 0;
  std::uint64_t nodes = 0;
};

namespace detail {

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i)
    f *= static_cast<std::uint64_t>(i);
  return f;
}

/// Greatest row-major image of mat under row and column permutations that
/// keep every line inside its line-sum class, line classes ordered by
/// decreasing sum. Also counts the (row, column) permutation pairs mapping
/// mat onto that image.
///
/// Rows are placed one at a time. For a fixed row order the best column order
/// sorts columns by their contents, so the placed rows refine the column
/// classes, and the row placed next reads as, per column cell, its ones
/// followed by its zeros. Only rows giving the greatest such string are
/// branched on.
class CanonicalSearcher {
public:
  CanonicalSearcher(const BitMatrix& mat, std::uint64_t budget) : mat_(mat), budget_(budget) {
    const auto rs = mat.row_sums();
    const auto cs = mat.col_sums();
    std::vector<int> rows(mat.rows()), cols(mat.cols());
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::stable_sort(rows.begin(), rows.end(), [&](int x, int y) { return rs[x] > rs[y]; });
    std::stable_sort(cols.begin(), cols.end(), [&](int x, int y) { return cs[x] > cs[y]; });
    for (int i = 0; i < mat.rows(); ++i) {
      if (i == 0 || rs[rows[i]] != rs[rows[i - 1]])
        row_class_start_.push_back(i);
      row_class_of_pos_.push_back(static_cast<int>(row_class_start_.size()) - 1);
    }
    sorted_rows_ = rows;
    std::vector<std::vector<int>> cells;
    for (int j = 0; j < mat.cols(); ++j) {
      if (j == 0 || cs[cols[j]] != cs[cols[j - 1]])
        cells.emplace_back();
      cells.back().push_back(cols[j]);
    }
    initial_cells_ = std::move(cells);
  }

  CanonicalSearch run() {
    std::vector<bool> used(mat_.rows(), false);
    current_.assign(static_cast<std::size_t>(mat_.rows()) * mat_.cols(), 0);
    best_valid_depth_ = -1;
    best_.assign(current_.size(), 0);
    dfs(0, initial_cells_, used);

    CanonicalSearch out;
    out.form = BitMatrix(mat_.rows(), mat_.cols(), best_);
    // Identical columns can be exchanged freely once rows are fixed.
    std::map<std::vector<std::uint8_t>, int> col_mult;
    for (int j = 0; j < mat_.cols(); ++j) {
      std::vector<std::uint8_t> col(mat_.rows());
      for (int i = 0; i < mat_.rows(); ++i)
        col[i] = mat_.at(i, j);
      ++col_mult[col];
    }
    std::uint64_t col_factor = 1;
    for (const auto& [_, k] : col_mult)
      col_factor *= factorial(k);
    out.automorphisms = leaves_ * col_factor;
    out.nodes = nodes_;
    return out;
  }

private:
  using Cells = std::vector<std::vector<int>>;

  /// Row r read through the refined column cells: per cell, ones then zeros.
  void row_string(int r, const Cells& cells, std::vector<std::uint8_t>& out) const {
    out.clear();
    for (const auto& cell : cells) {
      int ones = 0;
      for (int c : cell)
        ones += mat_.at(r, c);
      out.insert(out.end(), ones, 1);
      out.insert(out.end(), cell.size() - ones, 0);
    }
  }

  Cells refine(const Cells& cells, int r) const {
    Cells out;
    out.reserve(cells.size() * 2);
    for (const auto& cell : cells) {
      std::vector<int> ones, zeros;
      for (int c : cell)
        (mat_.at(r, c) ? ones : zeros).push_back(c);
      if (!ones.empty())
        out.push_back(std::move(ones));
      if (!zeros.empty())
        out.push_back(std::move(zeros));
    }
    return out;
  }

  void dfs(int depth, const Cells& cells, std::vector<bool>& used) {
    if (++nodes_ > budget_)
      throw BudgetError("canonical form search exceeded its node budget");
    const int cols = mat_.cols();
    if (depth == mat_.rows()) {
      if (best_valid_depth_ < depth) {
        best_valid_depth_ = depth;
        leaves_ = 0;
      }
      ++leaves_;
      return;
    }
    const int cls = row_class_of_pos_[depth];
    const int cls_begin = row_class_start_[cls];
    const int cls_end = cls + 1 < static_cast<int>(row_class_start_.size()) ? row_class_start_[cls + 1]
                                                                           : mat_.rows();
    std::vector<std::uint8_t> best_here, s;
    std::vector<int> candidates;
    for (int k = cls_begin; k < cls_end; ++k) {
      const int r = sorted_rows_[k];
      if (used[r])
        continue;
      row_string(r, cells, s);
      if (candidates.empty() || s > best_here) {
        best_here = s;
        candidates = {r};
      } else if (s == best_here) {
        candidates.push_back(r);
      }
    }
    // Compare against the best image found so far at this depth.
    const auto offset = static_cast<std::size_t>(depth) * cols;
    if (best_valid_depth_ >= depth) {
      const auto cmp = std::lexicographical_compare_three_way(best_here.begin(), best_here.end(),
                                                              best_.begin() + offset, best_.begin() + offset + cols);
      if (cmp < 0)
        return;
      if (cmp > 0)
        best_valid_depth_ = depth;  // everything from here on is superseded
    }
    if (best_valid_depth_ < depth + 1) {
      std::copy(best_here.begin(), best_here.end(), best_.begin() + offset);
      best_valid_depth_ = depth;
    }
    for (int r : candidates) {
      used[r] = true;
      dfs(depth + 1, refine(cells, r), used);
      used[r] = false;
      // A better image found below invalidates the prefix we matched.
      if (best_valid_depth_ < depth)
        return;
    }
  }

  const BitMatrix& mat_;
  std::uint64_t budget_;
  std::vector<int> sorted_rows_;
  std::vector<int> row_class_start_;
  std::vector<int> row_class_of_pos_;
  Cells initial_cells_;
  std::vector<std::uint8_t> current_;
  std::vector<std::uint8_t> best_;
  int best_valid_depth_ = -1;
  std::uint64_t leaves_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Canonical image and automorphism group order. For square matrices with
/// allow_transpose, transposed images and transpose-composed symmetries are
/// included.
inline CanonicalSearch canonical_search(const BitMatrix& mat, bool allow_transpose = true,
                                        std::uint64_t node_budget = default_canonical_node_budget) {
  auto direct = detail::CanonicalSearcher(mat, node_budget).run();
  if (!allow_transpose || mat.rows() != mat.cols())
    return direct;
  const BitMatrix t = mat.transposed();
  auto flipped = detail::CanonicalSearcher(t, node_budget).run();
  CanonicalSearch out;
  out.nodes = direct.nodes + flipped.nodes;
  if (direct.form == flipped.form) {
    out.form = std::move(direct.form);
    out.automorphisms = direct.automorphisms + flipped.automorphisms;
  } else if (direct.form > flipped.form) {
    out.form = std::move(direct.form);
    out.automorphisms = direct.automorphisms;
  } else {
    // mat is isomorphic to its own transpose only when both forms agree; the
    // group is the same either way.
    out.form = std::move(flipped.form);
    out.automorphisms = flipped.automorphisms;
  }
  return out;
}

inline BitMatrix canonical_form(const BitMatrix& mat, bool allow_transpose = true,
                                std::uint64_t node_budget = default_canonical_node_budget) {
  return canonical_search(mat, allow_transpose, node_budget).form;
}

inline std::uint64_t automorphism_count(const BitMatrix& mat,
                                        std::uint64_t node_budget = default_canonical_node_budget) {
  return canonical_search(mat, true, node_budget).automorphisms;
}

// Maximal sets ---------------------------------------------------------------------------

struct CanonicalMatrix {
  BitMatrix matrix;
  std::vector<int> row_sums;  // non-increasing
  std::vector<int> col_sums;  // non-increasing
  std::uint64_t automorphism_count = 0;
  std::string code;
};

/// Transposition is a symmetry of the problem only when a == b; pass
/// allow_transpose accordingly.
inline CanonicalMatrix make_canonical(const BitMatrix& mat, bool allow_transpose = true,
                                      std::uint64_t node_budget = default_canonical_node_budget) {
  auto cs = canonical_search(mat, allow_transpose, node_budget);
  CanonicalMatrix out;
  out.matrix = std::move(cs.form);
  out.row_sums = out.matrix.row_sums();
  out.col_sums = out.matrix.col_sums();
  std::sort(out.row_sums.rbegin(), out.row_sums.rend());
  std::sort(out.col_sums.rbegin(), out.col_sums.rend());
  out.automorphism_count = cs.automorphisms;
  out.code = encode_matrix(out.matrix);
  return out;
}

struct MaximalSet {
  ProblemParams params;
  int z = 0;
  std::vector<CanonicalMatrix> representatives;  // ordered by code
  bool complete = false;
  std::size_t pairs = 0;
  std::size_t models = 0;
};

struct EnumerateOptions {
  std::uint64_t conflict_budget = 0;  // per pair; 0 = unlimited
  std::uint64_t node_budget = default_canonical_node_budget;
};

/// All maximal matrices for a square problem whose z is already known.
inline MaximalSet enumerate_maximal(const ProblemParams& p, int z, const EnumerateOptions& opt = {},
                                    const ExactCache* cache = nullptr) {
  p.validate();
  if (p.m != p.n)
    throw InputError("maximal matrices are only enumerated for square problems");
  MaximalSet out;
  out.params = p;
  out.z = z;
  out.complete = true;

  const auto pairs = admissible_pairs(p, z, live_z_upper(p, cache));
  out.pairs = pairs.size();
  std::vector<int> cells(p.m * p.n);
  std::iota(cells.begin(), cells.end(), 1);
  SolveOptions so;
  if (opt.conflict_budget > 0)
    so.conflict_budget = opt.conflict_budget;

  std::map<std::string, CanonicalMatrix> found;
  for (const auto& pair : pairs) {
    const Cnf cnf = build_instance(p, pair);
    const auto res = enumerate_models(cnf, cells, so, [&](const Model& model) {
      const BitMatrix mat = decode_cells(p, model);
      if (!verify_witness(mat, p, z))
        throw Error("enumerated model is not a maximal-weight admissible matrix");
      auto canon = make_canonical(mat, p.a == p.b, opt.node_budget);
      found.try_emplace(canon.code, std::move(canon));
      return true;
    });
    out.models += res.models.size();
    if (!res.complete)
      out.complete = false;
  }
  for (auto& [_, c] : found) {
    if (!verify_witness(c.matrix, p, z))
      throw Error("canonical representative lost admissibility");
    out.representatives.push_back(std::move(c));
  }
  return out;
}

inline std::string format_representative(const MaximalSet& set, const CanonicalMatrix& c) {
  return to_string(set.params) + " " + std::to_string(set.z) + " " + c.code + " " + format_parts(c.row_sums) +
         " " + format_parts(c.col_sums) + " " + std::to_string(c.automorphism_count);
}

// Complement structure ------------------------------------------------------------------

struct ComplementStructure {
  int isolated_vertices = 0;
  int isolated_edges = 0;
  std::vector<int> paths;   // edge counts of paths with at least two edges
  std::vector<int> cycles;  // cycle lengths
  int other = 0;            // components of any other shape
  int edges = 0;

  bool operator==(const ComplementStructure&) const = default;
};

/// Connected components of the bipartite graph whose edges are the zero entries.
inline ComplementStructure complement_structure(const BitMatrix& mat) {
  const int m = mat.rows();
  const int n = mat.cols();
  const int total = m + n;
  std::vector<std::vector<int>> adj(total);
  ComplementStructure out;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (!mat.at(i, j)) {
        adj[i].push_back(m + j);
        adj[m + j].push_back(i);
        ++out.edges;
      }
  std::vector<bool> seen(total, false);
  for (int s = 0; s < total; ++s) {
    if (seen[s])
      continue;
    std::vector<int> stack{s}, comp;
    seen[s] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int u : adj[v])
        if (!seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
    }
    int degree_sum = 0, max_degree = 0;
    for (int v : comp) {
      degree_sum += static_cast<int>(adj[v].size());
      max_degree = std::max(max_degree, static_cast<int>(adj[v].size()));
    }
    const int vertices = static_cast<int>(comp.size());
    const int edges = degree_sum / 2;
    if (vertices == 1)
      ++out.isolated_vertices;
    else if (vertices == 2)
      ++out.isolated_edges;
    else if (max_degree <= 2 && edges == vertices - 1)
      out.paths.push_back(edges);
    else if (max_degree == 2 && edges == vertices)
      out.cycles.push_back(edges);
    else
      ++out.other;
  }
  return out;
}

}  // namespace kyoto
