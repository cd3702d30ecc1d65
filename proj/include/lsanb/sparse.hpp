#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lsanb {

enum class MatrixKind { kCounts, kTfIdf };

struct SparseEntry {
  std::uint32_t row;
  double value;
};

// Column-major (CSC) m x n matrix. Rows are terms, columns documents.
// Zero values are never stored; row indices within a column are ascending.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, MatrixKind kind) : rows_(rows), kind_(kind) {}

  // Appends a column; entries must have ascending distinct rows < rows().
  // Zeros are dropped.
  void push_column(std::span<const SparseEntry> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return col_ptr_.empty() ? 0 : col_ptr_.size() - 1; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  MatrixKind kind() const noexcept { return kind_; }

  std::span<const SparseEntry> column(std::size_t j) const {
    return {entries_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }

  // Columns `keep` in the given order.
  SparseMatrix select_columns(std::span<const std::size_t> keep) const;
  // Restricts rows to `keep` (ascending); row keep[i] becomes row i.
  SparseMatrix select_rows(std::span<const std::size_t> keep) const;

  double frobenius_norm_sq() const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  MatrixKind kind_ = MatrixKind::kCounts;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<SparseEntry> entries_;
};

inline bool operator==(const SparseEntry& a, const SparseEntry& b) {
  return a.row == b.row && a.value == b.value;
}

}  // namespace lsanb
