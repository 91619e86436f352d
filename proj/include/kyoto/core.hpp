#pragma once

// Fundamental types shared by every module: problem parameters, dense 0/1
// matrices, the forbidden-minor test and the sort potential.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kyoto {

using BigInt = boost::multiprecision::cpp_int;

// Error hierarchy --------------------------------------------------------------

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition on caller-supplied data.
class InputError : public Error {
public:
  using Error::Error;
};

/// A search or enumeration refused to start because it would exceed its budget.
class BudgetError : public Error {
public:
  using Error::Error;
};

// ProblemParams ----------------------------------------------------------------

/// Forbidden a x b all-one minor inside an m x n matrix.
struct ProblemParams {
  int a = 2;
  int b = 2;
  int m = 2;
  int n = 2;

  /// Throws InputError unless 2 <= a <= m and 2 <= b <= n.
  void validate() const {
    if (a < 2 || b < 2)
      throw InputError("minor dimensions must be at least 2");
    if (a > m || b > n)
      throw InputError("minor " + std::to_string(a) + "x" + std::to_string(b) +
                       " does not fit in " + std::to_string(m) + "x" + std::to_string(n));
  }

  [[nodiscard]] bool valid() const noexcept { return a >= 2 && b >= 2 && a <= m && b <= n; }

  /// Same problem with rows and columns exchanged.
  [[nodiscard]] ProblemParams transposed() const noexcept { return {b, a, n, m}; }

  auto operator<=>(const ProblemParams&) const = default;
};

inline std::string to_string(const ProblemParams& p) {
  return std::to_string(p.a) + " " + std::to_string(p.b) + " " + std::to_string(p.m) + " " +
         std::to_string(p.n);
}

inline std::ostream& operator<<(std::ostream& os, const ProblemParams& p) {
  return os << "(" << p.a << "," << p.b << "," << p.m << "," << p.n << ")";
}

// BitMatrix --------------------------------------------------------------------

/// Dense row-major 0/1 matrix. Entry (i, j) lives at index i * cols + j.
class BitMatrix {
public:
  BitMatrix() = default;

  BitMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0)
      throw InputError("matrix dimensions must be positive");
    bits_.assign(static_cast<std::size_t>(rows) * cols, 0);
  }

  BitMatrix(int rows, int cols, std::vector<std::uint8_t> bits) : BitMatrix(rows, cols) {
    if (bits.size() != bits_.size())
      throw InputError("bit count does not match dimensions");
    for (std::size_t k = 0; k < bits.size(); ++k)
      bits_[k] = bits[k] ? 1 : 0;
  }

  /// Builds a matrix from rows of '0'/'1' characters; other characters are ignored.
  static BitMatrix from_rows(const std::vector<std::string>& rows) {
    if (rows.empty())
      throw InputError("matrix needs at least one row");
    std::vector<std::vector<std::uint8_t>> parsed;
    for (const auto& r : rows) {
      std::vector<std::uint8_t> line;
      for (char c : r)
        if (c == '0' || c == '1')
          line.push_back(c == '1');
      parsed.push_back(std::move(line));
    }
    const int cols = static_cast<int>(parsed.front().size());
    BitMatrix out(static_cast<int>(parsed.size()), cols);
    for (int i = 0; i < out.rows(); ++i) {
      if (static_cast<int>(parsed[i].size()) != cols)
        throw InputError("ragged matrix rows");
      for (int j = 0; j < cols; ++j)
        out.set(i, j, parsed[i][j]);
    }
    return out;
  }

  static BitMatrix identity(int n) {
    BitMatrix out(n, n);
    for (int i = 0; i < n; ++i)
      out.set(i, i, true);
    return out;
  }

  static BitMatrix ones(int rows, int cols) {
    BitMatrix out(rows, cols);
    std::fill(out.bits_.begin(), out.bits_.end(), 1);
    return out;
  }

  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }
  [[nodiscard]] bool empty() const noexcept { return bits_.empty(); }

  [[nodiscard]] bool at(int i, int j) const { return bits_[index(i, j)] != 0; }
  void set(int i, int j, bool v) { bits_[index(i, j)] = v ? 1 : 0; }

  [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  [[nodiscard]] std::span<const std::uint8_t> row(int i) const {
    return std::span<const std::uint8_t>(bits_).subspan(static_cast<std::size_t>(i) * cols_, cols_);
  }

  [[nodiscard]] int weight() const {
    return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }

  [[nodiscard]] std::vector<int> row_sums() const {
    std::vector<int> s(rows_, 0);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        s[i] += bits_[index(i, j)];
    return s;
  }

  [[nodiscard]] std::vector<int> col_sums() const {
    std::vector<int> s(cols_, 0);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        s[j] += bits_[index(i, j)];
    return s;
  }

  [[nodiscard]] BitMatrix transposed() const {
    BitMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        out.set(j, i, at(i, j));
    return out;
  }

  /// Row i of the result is row row_order[i] of this matrix; likewise for columns.
  [[nodiscard]] BitMatrix permuted(std::span<const int> row_order, std::span<const int> col_order) const {
    if (static_cast<int>(row_order.size()) != rows_ || static_cast<int>(col_order.size()) != cols_)
      throw InputError("permutation length does not match matrix");
    BitMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        out.set(i, j, at(row_order[i], col_order[j]));
    return out;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s;
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j)
        s += at(i, j) ? '1' : '0';
      s += '\n';
    }
    return s;
  }

  bool operator==(const BitMatrix&) const = default;
  /// Orders by dimensions, then by the row-major bit string.
  auto operator<=>(const BitMatrix& o) const {
    if (auto c = rows_ <=> o.rows_; c != 0)
      return c;
    if (auto c = cols_ <=> o.cols_; c != 0)
      return c;
    return bits_ <=> o.bits_;
  }

private:
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

inline std::ostream& operator<<(std::ostream& os, const BitMatrix& m) { return os << m.to_string(); }

// Combinatorial helpers ----------------------------------------------------------

/// Calls fn(span) for every k-subset of {0..n-1} in lexicographic order.
/// Stops early and returns true as soon as fn returns true.
template <typename Fn>
bool for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n)
    return false;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (fn(std::span<const int>(idx)))
      return true;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i)
      --i;
    if (i < 0)
      return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j)
      idx[j] = idx[j - 1] + 1;
  }
}

// Operations ---------------------------------------------------------------------

/// True iff some a rows and b columns of mat intersect in all ones.
inline bool has_forbidden_minor(const BitMatrix& mat, const ProblemParams& p) {
  if (mat.rows() != p.m || mat.cols() != p.n)
    throw InputError("matrix is " + std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()) +
                     ", parameters expect " + std::to_string(p.m) + "x" + std::to_string(p.n));
  if (p.a > p.m || p.b > p.n)
    return false;
  return for_each_subset(p.m, p.a, [&](std::span<const int> rows) {
    int common = 0;
    for (int j = 0; j < p.n; ++j) {
      bool all = true;
      for (int r : rows)
        if (!mat.at(r, j)) {
          all = false;
          break;
        }
      if (all && ++common >= p.b)
        return true;
    }
    return false;
  });
}

/// Sum over all entries of 2^(i+j) * a_ij with zero-based indices.
inline BigInt potential(const BitMatrix& mat) {
  BigInt total = 0;
  for (int i = 0; i < mat.rows(); ++i)
    for (int j = 0; j < mat.cols(); ++j)
      if (mat.at(i, j))
        total += BigInt(1) << (i + j);
  return total;
}

}  // namespace kyoto
