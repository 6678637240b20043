#include "elastopoint/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "elastopoint/errors.hpp"

namespace elastopoint {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw ArgumentError("triplet index out of range");
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  SparseMatrix m(rows, cols);
  for (std::size_t k = 0; k < triplets.size();) {
    const auto& t = triplets[k];
    double v = 0.0;
    std::size_t j = k;
    for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j) v += triplets[j].value;
    m.col_idx_.push_back(t.col);
    m.values_.push_back(v);
    ++m.row_ptr_[t.row + 1];
    k = j;
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseMatrix SparseMatrix::from_pattern(std::size_t cols, const std::vector<std::vector<std::size_t>>& pattern) {
  SparseMatrix m(pattern.size(), cols);
  std::size_t total = 0;
  for (const auto& row : pattern) total += row.size();
  m.col_idx_.reserve(total);
  for (std::size_t r = 0; r < pattern.size(); ++r) {
    for (std::size_t c : pattern[r]) {
      if (c >= cols) throw ArgumentError("pattern column out of range");
      m.col_idx_.push_back(c);
    }
    m.row_ptr_[r + 1] = m.col_idx_.size();
  }
  m.values_.assign(total, 0.0);
  return m;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw ArgumentError("matrix index out of range");
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SparseMatrix::add(std::size_t r, std::size_t c, double v) {
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) {
    throw ArgumentError("entry (" + std::to_string(r) + ", " + std::to_string(c) + ") not in sparsity pattern");
  }
  values_[static_cast<std::size_t>(it - col_idx_.begin())] += v;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y, int threads) const {
  if (x.size() != cols_ || y.size() != rows_) throw ArgumentError("matrix-vector size mismatch");
  auto rows_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double s = 0.0;
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
      y[r] = s;
    }
  };
  const std::size_t workers = threads > 1 ? std::min<std::size_t>(static_cast<std::size_t>(threads), rows_) : 1;
  if (workers <= 1 || rows_ < 4096) {
    rows_range(0, rows_);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (rows_ + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(rows_, b + chunk);
    if (b < e) pool.emplace_back(rows_range, b, e);
  }
}

double SparseMatrix::asymmetry() const {
  if (rows_ != cols_) throw ArgumentError("asymmetry of a non-square matrix");
  double m = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      m = std::max(m, std::abs(values_[k] - at(col_idx_[k], r)));
  return m;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({col_idx_[k], r, values_[k]});
  return from_triplets(cols_, rows_, std::move(t));
}

}  // namespace elastopoint
