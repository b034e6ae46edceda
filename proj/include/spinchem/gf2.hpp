#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spinchem::gf2 {

// Square matrix over GF(2), rows stored as bitmasks (column j = bit j).
// Dimensions up to 64.
class Matrix {
 public:
  Matrix() = default;
  Matrix(unsigned n, std::vector<std::uint64_t> rows) : n_(n), rows_(std::move(rows)) {
    if (rows_.size() != n_) throw std::invalid_argument("gf2::Matrix: row count mismatch");
  }

  static Matrix identity(unsigned n) {
    std::vector<std::uint64_t> rows(n);
    for (unsigned i = 0; i < n; ++i) rows[i] = std::uint64_t{1} << i;
    return Matrix(n, std::move(rows));
  }

  unsigned size() const { return n_; }
  std::uint64_t row(unsigned i) const { return rows_[i]; }
  std::uint64_t& row(unsigned i) { return rows_[i]; }

  std::uint64_t apply(std::uint64_t v) const {
    std::uint64_t out = 0;
    for (unsigned i = 0; i < n_; ++i)
      if (__builtin_parityll(rows_[i] & v)) out |= std::uint64_t{1} << i;
    return out;
  }

  Matrix transposed() const {
    std::vector<std::uint64_t> rows(n_, 0);
    for (unsigned i = 0; i < n_; ++i)
      for (unsigned j = 0; j < n_; ++j)
        if ((rows_[i] >> j) & 1) rows[j] |= std::uint64_t{1} << i;
    return Matrix(n_, std::move(rows));
  }

  Matrix inverted() const {
    std::vector<std::uint64_t> a = rows_;
    Matrix inv = identity(n_);
    for (unsigned col = 0; col < n_; ++col) {
      unsigned pivot = col;
      while (pivot < n_ && !((a[pivot] >> col) & 1)) ++pivot;
      if (pivot == n_) throw std::invalid_argument("gf2::Matrix: singular");
      std::swap(a[col], a[pivot]);
      std::swap(inv.rows_[col], inv.rows_[pivot]);
      for (unsigned r = 0; r < n_; ++r) {
        if (r != col && ((a[r] >> col) & 1)) {
          a[r] ^= a[col];
          inv.rows_[r] ^= inv.rows_[col];
        }
      }
    }
    return inv;
  }

 private:
  unsigned n_ = 0;
  std::vector<std::uint64_t> rows_;
};

// Basis of { v : row . v = 0 (mod 2) for every row }, over n_cols columns.
inline std::vector<std::uint64_t> kernel_basis(std::vector<std::uint64_t> rows, unsigned n_cols) {
  if (n_cols > 64) throw std::invalid_argument("gf2::kernel_basis: more than 64 columns");
  std::vector<int> pivot_of_col(n_cols, -1);
  unsigned rank = 0;
  for (unsigned col = 0; col < n_cols && rank < rows.size(); ++col) {
    unsigned r = rank;
    while (r < rows.size() && !((rows[r] >> col) & 1)) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[rank], rows[r]);
    for (unsigned k = 0; k < rows.size(); ++k)
      if (k != rank && ((rows[k] >> col) & 1)) rows[k] ^= rows[rank];
    pivot_of_col[col] = static_cast<int>(rank);
    ++rank;
  }
  std::vector<std::uint64_t> basis;
  for (unsigned col = 0; col < n_cols; ++col) {
    if (pivot_of_col[col] >= 0) continue;
    // Free column: set it to 1, back-fill pivot columns.
    std::uint64_t v = std::uint64_t{1} << col;
    for (unsigned c = 0; c < n_cols; ++c) {
      int p = pivot_of_col[c];
      if (p >= 0 && ((rows[p] >> col) & 1)) v |= std::uint64_t{1} << c;
    }
    basis.push_back(v);
  }
  return basis;
}

}  // namespace spinchem::gf2
