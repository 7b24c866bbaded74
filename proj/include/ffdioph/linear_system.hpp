#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ffdioph/errors.hpp"
#include "ffdioph/field.hpp"

namespace ffdioph {

using FkVector = std::vector<Rep>;

/// Reduced row echelon form of a system of linear forms over F_k, kept
/// together with the row operations that produced it, so consistency and
/// particular solutions for many right-hand sides cost one pass each.
class RowReduction {
 public:
  RowReduction(FieldSpec f, std::vector<FkVector> rows, std::size_t nvars) : field_(std::move(f)), nvars_(nvars) {
    const std::size_t nrows = rows.size();
    reduced_ = std::move(rows);
    ops_.assign(nrows, FkVector(nrows, 0));
    for (std::size_t i = 0; i < nrows; ++i) {
      if (reduced_[i].size() != nvars_) throw DomainError("linear form has the wrong number of variables");
      ops_[i][i] = 1;
    }
    std::size_t row = 0;
    for (std::size_t col = 0; col < nvars_ && row < nrows; ++col) {
      std::size_t piv = row;
      while (piv < nrows && reduced_[piv][col] == 0) ++piv;
      if (piv == nrows) continue;
      std::swap(reduced_[piv], reduced_[row]);
      std::swap(ops_[piv], ops_[row]);
      const Rep inv = field_.inv(reduced_[row][col]);
      scale_row(row, inv);
      for (std::size_t r = 0; r < nrows; ++r) {
        if (r == row || reduced_[r][col] == 0) continue;
        const Rep factor = field_.neg(reduced_[r][col]);
        axpy(r, row, factor);
      }
      pivots_.push_back(col);
      ++row;
    }
  }

  const FieldSpec& field() const { return field_; }
  std::size_t rank() const { return pivots_.size(); }
  std::size_t nvars() const { return nvars_; }
  std::size_t nrows() const { return ops_.size(); }

  /// Rows y with y * M = 0; M x = b is solvable iff y * b = 0 for all of them.
  std::vector<FkVector> left_null() const { return {ops_.begin() + static_cast<std::ptrdiff_t>(rank()), ops_.end()}; }

  bool consistent(const FkVector& rhs) const {
    for (std::size_t i = rank(); i < ops_.size(); ++i)
      if (dot(ops_[i], rhs) != 0) return false;
    return true;
  }

  /// Some x with M x = rhs; free variables set to zero.
  std::optional<FkVector> solve(const FkVector& rhs) const {
    if (!consistent(rhs)) return std::nullopt;
    FkVector x(nvars_, 0);
    for (std::size_t i = 0; i < rank(); ++i) x[pivots_[i]] = dot(ops_[i], rhs);
    return x;
  }

  /// Basis of {x : M x = 0}.
  std::vector<FkVector> kernel() const {
    std::vector<bool> is_pivot(nvars_, false);
    for (auto c : pivots_) is_pivot[c] = true;
    std::vector<FkVector> out;
    for (std::size_t free = 0; free < nvars_; ++free) {
      if (is_pivot[free]) continue;
      FkVector x(nvars_, 0);
      x[free] = 1;
      for (std::size_t i = 0; i < rank(); ++i) x[pivots_[i]] = field_.neg(reduced_[i][free]);
      out.push_back(std::move(x));
    }
    return out;
  }

  /// Nonzero rows of the echelon form: a basis of the row space.
  std::vector<FkVector> row_basis() const { return {reduced_.begin(), reduced_.begin() + static_cast<std::ptrdiff_t>(rank())}; }

  /// Whether `row` lies in the row space.
  bool spans(const FkVector& row) const {
    FkVector rest = row;
    for (std::size_t i = 0; i < rank(); ++i) {
      const Rep c = rest[pivots_[i]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < nvars_; ++j) rest[j] = field_.sub(rest[j], field_.mul(c, reduced_[i][j]));
    }
    for (auto c : rest)
      if (c != 0) return false;
    return true;
  }

  Rep dot(const FkVector& a, const FkVector& b) const {
    Rep acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && b[i]) acc = field_.add(acc, field_.mul(a[i], b[i]));
    return acc;
  }

 private:
  void scale_row(std::size_t r, Rep c) {
    for (auto& v : reduced_[r]) v = field_.mul(v, c);
    for (auto& v : ops_[r]) v = field_.mul(v, c);
  }

  // row[dst] += c * row[src]
  void axpy(std::size_t dst, std::size_t src, Rep c) {
    for (std::size_t j = 0; j < nvars_; ++j)
      if (reduced_[src][j]) reduced_[dst][j] = field_.add(reduced_[dst][j], field_.mul(c, reduced_[src][j]));
    for (std::size_t j = 0; j < ops_[src].size(); ++j)
      if (ops_[src][j]) ops_[dst][j] = field_.add(ops_[dst][j], field_.mul(c, ops_[src][j]));
  }

  FieldSpec field_;
  std::size_t nvars_;
  std::vector<FkVector> reduced_;
  std::vector<FkVector> ops_;
  std::vector<std::size_t> pivots_;
};

}  // namespace ffdioph
