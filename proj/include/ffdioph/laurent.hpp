#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ffdioph/errors.hpp"
#include "ffdioph/field.hpp"
#include "ffdioph/kadic.hpp"
#include "ffdioph/polynomial.hpp"

namespace ffdioph {

/// Truncated element sum_{i >= start} a_i X^-i of F((X^-1)).
///
/// Coefficients are known for indices up to precision(); beyond it they are
/// unknown, unless the series is exact, in which case they all vanish.
/// Arithmetic never reports a coefficient it cannot vouch for.
class LaurentSeries {
 public:
  LaurentSeries() = default;

  /// Series with coefficients a_start, a_{start+1}, ... known up to index precision.
  static LaurentSeries truncated(FieldSpec f, std::int64_t start, std::vector<Rep> coeffs, std::int64_t precision) {
    if (precision < start - 1) throw PrecisionError("precision window ends before the series starts");
    if (start + static_cast<std::int64_t>(coeffs.size()) - 1 > precision)
      throw PrecisionError("coefficients supplied beyond the precision window");
    return LaurentSeries(std::move(f), start, std::move(coeffs), precision);
  }

  /// Finite sum treated as exact: every coefficient past the list is zero.
  static LaurentSeries exact(FieldSpec f, std::int64_t start, std::vector<Rep> coeffs) {
    return LaurentSeries(std::move(f), start, std::move(coeffs), std::nullopt);
  }

  static LaurentSeries exact_zero(FieldSpec f) { return exact(std::move(f), 0, {}); }

  /// X^-index.
  static LaurentSeries monomial(FieldSpec f, std::int64_t index, Rep c = 1) { return exact(std::move(f), index, {c}); }

  const FieldSpec& field() const { return field_; }
  bool is_exact() const { return !precision_.has_value(); }
  /// Last known index; exact series report the last stored index.
  std::int64_t precision() const {
    if (precision_) return *precision_;
    return start_ + static_cast<std::int64_t>(coeffs_.size()) - 1;
  }
  std::optional<std::int64_t> maybe_precision() const { return precision_; }
  std::int64_t start() const { return start_; }
  const std::vector<Rep>& stored() const { return coeffs_; }

  /// True when no known coefficient is nonzero.
  bool window_zero() const { return coeffs_.empty(); }
  bool is_exact_zero() const { return is_exact() && coeffs_.empty(); }

  /// Lowest index that can carry a nonzero coefficient.
  std::int64_t lowest_possible() const {
    if (!coeffs_.empty()) return start_;
    return precision_ ? *precision_ + 1 : std::numeric_limits<std::int64_t>::max() / 4;
  }

  /// Index of the first nonzero coefficient; throws when it is not inside the window.
  std::int64_t lead() const {
    if (!coeffs_.empty()) return start_;
    if (is_exact()) throw DomainError("the zero series has no leading index");
    throw PrecisionError("no nonzero coefficient inside the precision window");
  }

  Rep coeff(std::int64_t i) const {
    if (precision_ && i > *precision_) throw PrecisionError("coefficient " + std::to_string(i) + " lies beyond precision " + std::to_string(*precision_));
    if (i < start_ || i >= start_ + static_cast<std::int64_t>(coeffs_.size())) return 0;
    return coeffs_[static_cast<std::size_t>(i - start_)];
  }

  /// |f| = k^-lead; ZERO only for exact zero.
  AbsValue abs() const {
    if (is_exact_zero()) return AbsValue::zero();
    return AbsValue::power(-lead());
  }

  /// Multiplication by X^shift.
  LaurentSeries shifted(std::int64_t shift) const {
    LaurentSeries r = *this;
    r.start_ -= shift;
    if (r.precision_) *r.precision_ -= shift;
    return r;
  }

  /// Same series with the window cut down to `precision`.
  LaurentSeries truncate(std::int64_t precision) const {
    if (precision_ && precision > *precision_) throw PrecisionError("cannot extend a precision window");
    std::vector<Rep> v;
    for (std::int64_t i = start_; i <= precision && i < start_ + static_cast<std::int64_t>(coeffs_.size()); ++i)
      v.push_back(coeff(i));
    return LaurentSeries(field_, std::min(start_, precision + 1), std::move(v), precision);
  }

  /// Drops every coefficient with index <= 0.
  LaurentSeries frac_part() const {
    std::vector<Rep> v;
    const std::int64_t from = std::max<std::int64_t>(start_, 1);
    for (std::int64_t i = from; i < start_ + static_cast<std::int64_t>(coeffs_.size()); ++i) v.push_back(coeff(i));
    return LaurentSeries(field_, from, std::move(v), precision_);
  }

  /// Coefficients with index <= 0, as a polynomial.
  Polynomial poly_part() const {
    if (precision_ && *precision_ < 0) throw PrecisionError("polynomial part needs precision >= 0");
    if (start_ > 0) return Polynomial(field_);
    std::vector<Rep> v(static_cast<std::size_t>(-start_) + 1, 0);
    for (std::int64_t e = 0; e <= -start_; ++e) v[static_cast<std::size_t>(e)] = coeff(-e);
    return Polynomial(field_, std::move(v));
  }

  friend LaurentSeries operator+(const LaurentSeries& f, const LaurentSeries& g) {
    const FieldSpec& fs = common_field(f, g);
    const auto prec = min_precision(f.precision_, g.precision_);
    const std::int64_t lo = std::min(f.start_, g.start_);
    std::int64_t hi = std::max(f.start_ + static_cast<std::int64_t>(f.coeffs_.size()),
                               g.start_ + static_cast<std::int64_t>(g.coeffs_.size())) - 1;
    if (prec) hi = std::min(hi, *prec);
    std::vector<Rep> v;
    for (std::int64_t i = lo; i <= hi; ++i) v.push_back(fs.add(f.raw(i), g.raw(i)));
    return LaurentSeries(fs, lo, std::move(v), prec);
  }

  friend LaurentSeries operator-(const LaurentSeries& f) {
    LaurentSeries r = f;
    for (auto& c : r.coeffs_) c = f.field_.neg(c);
    return r;
  }

  friend LaurentSeries operator-(const LaurentSeries& f, const LaurentSeries& g) { return f + (-g); }

  friend LaurentSeries operator*(const LaurentSeries& f, const LaurentSeries& g) {
    const FieldSpec& fs = common_field(f, g);
    if (f.is_exact_zero() || g.is_exact_zero()) return exact_zero(fs);
    const std::int64_t a = f.lowest_possible(), b = g.lowest_possible();
    std::optional<std::int64_t> prec;
    if (f.precision_) prec = *f.precision_ + b;
    if (g.precision_) prec = min_precision(prec, std::optional<std::int64_t>(*g.precision_ + a));
    if (f.coeffs_.empty() || g.coeffs_.empty()) return LaurentSeries(fs, *prec + 1, {}, prec);
    std::int64_t hi = a + b + static_cast<std::int64_t>(f.coeffs_.size() + g.coeffs_.size()) - 2;
    if (prec) hi = std::min(hi, *prec);
    std::vector<Rep> v(static_cast<std::size_t>(std::max<std::int64_t>(hi - a - b + 1, 0)), 0);
    for (std::size_t i = 0; i < f.coeffs_.size(); ++i) {
      if (f.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < g.coeffs_.size() && static_cast<std::int64_t>(i + j) < static_cast<std::int64_t>(v.size()); ++j)
        v[i + j] = fs.add(v[i + j], fs.mul(f.coeffs_[i], g.coeffs_[j]));
    }
    return LaurentSeries(fs, a + b, std::move(v), prec);
  }

  /// Equal coefficients on the common window, and equal exactness.
  friend bool operator==(const LaurentSeries& f, const LaurentSeries& g) {
    return f.field_ == g.field_ && f.precision_ == g.precision_ && f.start_ == g.start_ && f.coeffs_ == g.coeffs_;
  }

  /// Coefficients agree on every index both series know.
  bool agrees_with(const LaurentSeries& o) const {
    const auto prec = min_precision(precision_, o.precision_);
    const std::int64_t lo = std::min(start_, o.start_);
    std::int64_t hi = std::max(start_ + static_cast<std::int64_t>(coeffs_.size()),
                               o.start_ + static_cast<std::int64_t>(o.coeffs_.size()));
    if (prec) hi = std::min(hi, *prec);
    for (std::int64_t i = lo; i <= hi; ++i)
      if (raw(i) != o.raw(i)) return false;
    return true;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      const std::int64_t e = -(start_ + static_cast<std::int64_t>(i));
      if (coeffs_[i] != 1 || e == 0) s += std::to_string(coeffs_[i]);
      if (e != 0) s += (coeffs_[i] != 1 ? "*X" : "X") + (e == 1 ? std::string() : "^" + std::to_string(e));
    }
    if (s.empty()) s = "0";
    if (precision_) s += " + O(X^" + std::to_string(-*precision_ - 1) + ")";
    return s;
  }

  static const FieldSpec& common_field(const LaurentSeries& a, const LaurentSeries& b) {
    if (!(a.field_ == b.field_)) throw FieldMismatchError();
    return a.field_;
  }

 private:
  LaurentSeries(FieldSpec f, std::int64_t start, std::vector<Rep> coeffs, std::optional<std::int64_t> precision)
      : field_(std::move(f)), start_(start), coeffs_(std::move(coeffs)), precision_(precision) {
    for (auto c : coeffs_)
      if (c >= field_.k()) throw DomainError("coefficient index out of range for " + field_.describe());
    canonicalize();
  }

  static std::optional<std::int64_t> min_precision(std::optional<std::int64_t> a, std::optional<std::int64_t> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
  }

  // Stored coefficient, zero outside storage; the caller guarantees the window.
  Rep raw(std::int64_t i) const {
    if (i < start_ || i >= start_ + static_cast<std::int64_t>(coeffs_.size())) return 0;
    return coeffs_[static_cast<std::size_t>(i - start_)];
  }

  void canonicalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      start_ = precision_ ? *precision_ + 1 : 0;
      return;
    }
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    start_ += static_cast<std::int64_t>(lead);
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  FieldSpec field_;
  std::int64_t start_ = 0;
  std::vector<Rep> coeffs_;
  std::optional<std::int64_t> precision_;
};

inline LaurentSeries embed_poly(const Polynomial& p) {
  if (p.is_zero()) return LaurentSeries::exact_zero(p.field());
  std::vector<Rep> v(p.coeffs().rbegin(), p.coeffs().rend());
  return LaurentSeries::exact(p.field(), -p.degree(), std::move(v));
}

/// ||f||: distance from f to the nearest polynomial.
inline AbsValue dist_nearest_poly(const LaurentSeries& f) { return f.frac_part().abs(); }

/// |v|_inf = max_j |v_j|. Entries that vanish on their window only bound their
/// absolute value from above, so they must not decide the maximum.
inline AbsValue max_abs(const std::vector<LaurentSeries>& v) {
  if (v.empty()) throw DomainError("empty vector");
  std::optional<AbsValue> best;
  std::optional<std::int64_t> undecided_bound;  // every undecided entry is < k^-bound
  for (const auto& entry : v) {
    if (entry.is_exact_zero()) {
      best = best ? max(*best, AbsValue::zero()) : AbsValue::zero();
    } else if (entry.window_zero()) {
      const std::int64_t b = entry.precision();
      undecided_bound = undecided_bound ? std::min(*undecided_bound, b) : b;
    } else {
      best = best ? max(*best, entry.abs()) : entry.abs();
    }
  }
  if (undecided_bound) {
    if (!best || *best <= AbsValue::power(-*undecided_bound - 1))
      throw PrecisionError("absolute value is smaller than the precision window can resolve");
  }
  return *best;
}

/// ||v|| = max_j ||v_j||.
inline AbsValue dist_nearest_poly_vec(const std::vector<LaurentSeries>& v) {
  std::vector<LaurentSeries> fracs;
  for (const auto& e : v) fracs.push_back(e.frac_part());
  return max_abs(fracs);
}

/// m x n matrix over F((X^-1)), row-major.
class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  LaurentMatrix(std::size_t m, std::size_t n, std::vector<LaurentSeries> entries)
      : m_(m), n_(n), entries_(std::move(entries)) {
    if (m == 0 || n == 0 || entries_.size() != m * n) throw DomainError("matrix shape does not match its entries");
    for (const auto& e : entries_)
      if (!(e.field() == entries_.front().field())) throw FieldMismatchError();
  }

  /// Point of U given by digits[(i*n + j)*T + (t-1)] = coefficient of X^-t in A_ij.
  static LaurentMatrix from_digits(const FieldSpec& f, std::size_t m, std::size_t n, std::int64_t T,
                                   const std::vector<Rep>& digits) {
    if (digits.size() != m * n * static_cast<std::size_t>(T)) throw DomainError("digit count does not match m*n*T");
    std::vector<LaurentSeries> e;
    for (std::size_t c = 0; c < m * n; ++c) {
      std::vector<Rep> v(digits.begin() + static_cast<std::ptrdiff_t>(c * T),
                         digits.begin() + static_cast<std::ptrdiff_t>((c + 1) * T));
      e.push_back(LaurentSeries::truncated(f, 1, std::move(v), T));
    }
    return LaurentMatrix(m, n, std::move(e));
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  const FieldSpec& field() const { return entries_.front().field(); }
  const LaurentSeries& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  const std::vector<LaurentSeries>& entries() const { return entries_; }

  /// |A|_inf = max of the entry absolute values.
  AbsValue norm_inf() const {
    AbsValue best = AbsValue::zero();
    for (const auto& e : entries_) best = max(best, e.abs());
    return best;
  }

  /// Every entry has absolute value < 1.
  bool in_unit_cube() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const LaurentSeries& e) { return e.lowest_possible() >= 1; });
  }

  LaurentMatrix operator+(const LaurentMatrix& o) const {
    if (m_ != o.m_ || n_ != o.n_) throw DomainError("matrix shape mismatch");
    std::vector<LaurentSeries> e;
    for (std::size_t i = 0; i < entries_.size(); ++i) e.push_back(entries_[i] + o.entries_[i]);
    return LaurentMatrix(m_, n_, std::move(e));
  }

  LaurentMatrix shifted(std::int64_t s) const {
    std::vector<LaurentSeries> e;
    for (const auto& x : entries_) e.push_back(x.shifted(s));
    return LaurentMatrix(m_, n_, std::move(e));
  }

 private:
  std::size_t m_ = 0, n_ = 0;
  std::vector<LaurentSeries> entries_;
};

/// qA for a row vector q of length m.
inline std::vector<LaurentSeries> row_times_matrix(const PolyVector& q, const LaurentMatrix& A) {
  if (q.m() != A.rows()) throw DomainError("row vector length does not match matrix rows");
  if (!(q.field() == A.field())) throw FieldMismatchError();
  std::vector<LaurentSeries> out;
  for (std::size_t j = 0; j < A.cols(); ++j) {
    LaurentSeries acc = LaurentSeries::exact_zero(A.field());
    for (std::size_t i = 0; i < q.m(); ++i) acc = acc + embed_poly(q[i]) * A.at(i, j);
    out.push_back(std::move(acc));
  }
  return out;
}

/// ||qA||.
inline AbsValue dist_qA(const PolyVector& q, const LaurentMatrix& A) { return dist_nearest_poly_vec(row_times_matrix(q, A)); }

}  // namespace ffdioph
