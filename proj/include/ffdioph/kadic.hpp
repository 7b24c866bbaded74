#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "ffdioph/errors.hpp"

namespace ffdioph {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_pow(std::uint32_t base, std::uint64_t e) {
  BigInt result = 1;
  BigInt b = base;
  while (e) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

inline std::string rational_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Parses "p", "p/q" or a finite decimal such as "0.125".
inline Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const BigInt den(text.substr(slash + 1));
      if (den == 0) throw DomainError("zero denominator in \"" + text + "\"");
      return Rational(BigInt(text.substr(0, slash)), den);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
      const std::string frac = text.substr(dot + 1);
      const std::string whole = text.substr(0, dot);
      const bool neg = !whole.empty() && whole[0] == '-';
      const BigInt w(whole.empty() || whole == "-" ? "0" : whole);
      const Rational f(BigInt(frac.empty() ? "0" : frac), big_pow(10, frac.size()));
      return neg ? Rational(w) - f : Rational(w) + f;
    }
    return Rational(BigInt(text));
  } catch (const std::runtime_error&) {
    throw DomainError("not a rational number: \"" + text + "\"");
  }
}

inline BigInt floor_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

inline BigInt ceil_rational(const Rational& r) { return -floor_rational(-r); }

/// log_k x for x > 0, in double precision even when x has thousands of digits.
inline double log_k(const BigInt& x, std::uint32_t k) {
  if (x <= 0) throw DomainError("log of a non-positive number");
  const std::size_t bits = boost::multiprecision::msb(x);
  double log2x;
  if (bits < 1000) {
    log2x = std::log2(static_cast<double>(x));
  } else {
    const std::size_t shift = bits - 60;
    log2x = std::log2(static_cast<double>(BigInt(x >> shift))) + static_cast<double>(shift);
  }
  return log2x / std::log2(static_cast<double>(k));
}

/// |x| for x in F((X^-1)) or F[X]: either zero or k^e for an integer e.
class AbsValue {
 public:
  AbsValue() = default;
  static AbsValue zero() { return {}; }
  static AbsValue power(std::int64_t e) {
    AbsValue a;
    a.exponent_ = e;
    return a;
  }

  bool is_zero() const { return !exponent_.has_value(); }
  std::int64_t exponent() const {
    if (!exponent_) throw DomainError("exponent of |0| is undefined");
    return *exponent_;
  }
  const std::optional<std::int64_t>& maybe_exponent() const { return exponent_; }

  friend AbsValue operator*(const AbsValue& a, const AbsValue& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return power(*a.exponent_ + *b.exponent_);
  }

  friend bool operator==(const AbsValue&, const AbsValue&) = default;
  friend std::strong_ordering operator<=>(const AbsValue& a, const AbsValue& b) {
    if (a.is_zero() || b.is_zero()) return !a.is_zero() <=> !b.is_zero();
    return *a.exponent_ <=> *b.exponent_;
  }

  std::string str() const { return is_zero() ? "0" : "k^" + std::to_string(*exponent_); }

 private:
  std::optional<std::int64_t> exponent_;
};

inline AbsValue max(const AbsValue& a, const AbsValue& b) { return a < b ? b : a; }

/// Exact k-adic rational num * k^(-exp). Haar measures of cylinder-defined
/// sets, and finite sums or products of them, live here.
class KadicMeasure {
 public:
  KadicMeasure() = default;
  KadicMeasure(std::uint32_t k, BigInt num, std::int64_t exp) : k_(k), num_(std::move(num)), exp_(exp) {
    if (k_ < 2) throw DomainError("k-adic base must be at least 2");
    normalize();
  }

  static KadicMeasure zero(std::uint32_t k) { return {k, 0, 0}; }
  static KadicMeasure one(std::uint32_t k) { return {k, 1, 0}; }
  /// k^(-e).
  static KadicMeasure inv_power(std::uint32_t k, std::int64_t e) { return {k, 1, e}; }

  std::uint32_t k() const { return k_; }
  const BigInt& num() const { return num_; }
  std::int64_t exp() const { return exp_; }
  bool is_zero() const { return num_ == 0; }

  Rational to_rational() const {
    if (exp_ >= 0) return Rational(num_, big_pow(k_, static_cast<std::uint64_t>(exp_)));
    return Rational(num_ * big_pow(k_, static_cast<std::uint64_t>(-exp_)));
  }

  double to_double() const { return static_cast<double>(to_rational()); }

  /// "num/k^exp" with k spelled out, e.g. "3/2^5".
  std::string str() const {
    if (exp_ <= 0) return (num_ * big_pow(k_, static_cast<std::uint64_t>(-exp_))).str();
    return num_.str() + "/" + std::to_string(k_) + "^" + std::to_string(exp_);
  }

  KadicMeasure pow(std::uint64_t e) const {
    KadicMeasure r = one(k_);
    for (std::uint64_t i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  friend KadicMeasure operator+(const KadicMeasure& a, const KadicMeasure& b) {
    check_base(a, b);
    if (a.exp_ >= b.exp_)
      return {a.k_, a.num_ + b.num_ * big_pow(a.k_, static_cast<std::uint64_t>(a.exp_ - b.exp_)), a.exp_};
    return b + a;
  }
  friend KadicMeasure operator-(const KadicMeasure& a, const KadicMeasure& b) {
    return a + KadicMeasure(b.k_, -b.num_, b.exp_);
  }
  friend KadicMeasure operator*(const KadicMeasure& a, const KadicMeasure& b) {
    check_base(a, b);
    return {a.k_, a.num_ * b.num_, a.exp_ + b.exp_};
  }
  KadicMeasure& operator+=(const KadicMeasure& o) { return *this = *this + o; }

  friend bool operator==(const KadicMeasure& a, const KadicMeasure& b) {
    return a.k_ == b.k_ && a.num_ == b.num_ && a.exp_ == b.exp_;
  }
  friend std::strong_ordering operator<=>(const KadicMeasure& a, const KadicMeasure& b) {
    check_base(a, b);
    const Rational x = a.to_rational(), y = b.to_rational();
    if (x < y) return std::strong_ordering::less;
    if (y < x) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  static void check_base(const KadicMeasure& a, const KadicMeasure& b) {
    if (a.k_ != b.k_) throw DomainError("k-adic values with different bases");
  }

  void normalize() {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    while (num_ % k_ == 0) {
      num_ /= k_;
      --exp_;
    }
  }

  std::uint32_t k_ = 2;
  BigInt num_ = 0;
  std::int64_t exp_ = 0;
};

}  // namespace ffdioph
