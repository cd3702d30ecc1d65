#include "lsanb/sparse.hpp"

#include <cmath>
#include <string>

#include "lsanb/error.hpp"

namespace lsanb {

void SparseMatrix::push_column(std::span<const SparseEntry> entries) {
  std::int64_t prev = -1;
  for (const auto& e : entries) {
    if (e.row >= rows_ || static_cast<std::int64_t>(e.row) <= prev) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "bad row index " + std::to_string(e.row) + " in column " +
                      std::to_string(cols()));
    }
    if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
      throw Error(ErrorKind::kInvalidConfig, "matrix values must be finite and nonnegative");
    }
    prev = e.row;
    if (e.value != 0.0) entries_.push_back(e);
  }
  col_ptr_.push_back(entries_.size());
}

SparseMatrix SparseMatrix::select_columns(std::span<const std::size_t> keep) const {
  SparseMatrix out(rows_, kind_);
  for (std::size_t j : keep) out.push_column(column(j));
  return out;
}

SparseMatrix SparseMatrix::select_rows(std::span<const std::size_t> keep) const {
  std::vector<std::int64_t> remap(rows_, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = static_cast<std::int64_t>(i);
  SparseMatrix out(keep.size(), kind_);
  std::vector<SparseEntry> buf;
  for (std::size_t j = 0; j < cols(); ++j) {
    buf.clear();
    for (const auto& e : column(j)) {
      if (remap[e.row] >= 0) buf.push_back({static_cast<std::uint32_t>(remap[e.row]), e.value});
    }
    out.push_column(buf);
  }
  return out;
}

double SparseMatrix::frobenius_norm_sq() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.value * e.value;
  return s;
}

}  // namespace lsanb
