#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace elastopoint {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix with sorted column indices in every row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  /// Duplicate (row, col) entries are summed in input order.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  /// Zero-valued matrix with the given sorted, duplicate-free column lists.
  static SparseMatrix from_pattern(std::size_t cols, const std::vector<std::vector<std::size_t>>& pattern);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return col_idx_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  // Zero when the entry is not stored.
  double at(std::size_t r, std::size_t c) const;
  // Adds to a stored entry; throws ArgumentError if (r, c) is outside the pattern.
  void add(std::size_t r, std::size_t c, double v);

  double diagonal(std::size_t r) const { return at(r, r); }
  double max_abs() const;

  /// y = A x. Rows are split across `threads` workers; every row is summed in
  /// the same order, so the result does not depend on the thread count.
  void multiply(std::span<const double> x, std::span<double> y, int threads = 1) const;

  /// max |A_ij - A_ji| over all stored entries of a square matrix.
  double asymmetry() const;

  SparseMatrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace elastopoint
