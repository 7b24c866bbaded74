#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ffdioph/errors.hpp"

namespace ffdioph {

// Field elements are stored as their index in [0, k): the base-p digits of the
// index are the coefficients of the polynomial-basis representative, constant
// term least significant. 0 and 1 therefore keep their usual meaning.
using Rep = std::uint32_t;

inline constexpr std::uint32_t kMaxFieldSize = 1u << 16;

namespace detail {

inline bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Dense polynomials over the prime field F_p, lowest degree first.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo the nonzero polynomial m over F_p.
inline PrimePoly prime_poly_mod(PrimePoly a, const PrimePoly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = inv_mod_prime(m.back(), p);
  while (a.size() > dm) {
    const std::size_t shift = a.size() - 1 - dm;
    const std::uint64_t factor = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    for (std::size_t i = 0; i <= dm; ++i) {
      const std::uint64_t sub = factor * m[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

inline PrimePoly prime_poly_from_index(std::uint64_t index, std::uint32_t p, std::size_t len) {
  PrimePoly out(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return out;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool prime_poly_irreducible(const PrimePoly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg == 0) return false;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      PrimePoly g = prime_poly_from_index(idx, p, d);
      g.push_back(1);
      if (prime_poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

class FieldSpec;

namespace detail {

struct FieldData {
  std::uint32_t p = 0;
  std::uint32_t l = 0;
  std::uint32_t k = 0;
  PrimePoly modulus;                 // monic, degree l
  std::vector<std::uint32_t> pow_p;  // p^i for i < l
  std::vector<Rep> exp_table;        // g^i, i in [0, 2(k-1))
  std::vector<std::uint32_t> log_table;
  std::vector<std::uint16_t> add_table;  // k*k entries when k <= 256

  PrimePoly to_poly(Rep a) const { return prime_poly_from_index(a, p, l); }

  Rep from_poly(const PrimePoly& a) const {
    Rep out = 0;
    for (std::size_t i = a.size(); i-- > 0;) out = out * p + a[i];
    return out;
  }

  Rep add_digits(Rep a, Rep b) const {
    if (p == 2) return a ^ b;
    Rep out = 0;
    for (std::uint32_t i = 0; i < l; ++i) {
      out += ((a % p + b % p) % p) * pow_p[i];
      a /= p;
      b /= p;
    }
    return out;
  }

  Rep mul_reference(Rep a, Rep b) const {
    const PrimePoly x = to_poly(a), y = to_poly(b);
    PrimePoly prod(2 * l, 0);
    for (std::uint32_t i = 0; i < l; ++i)
      for (std::uint32_t j = 0; j < l; ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(x[i]) * y[j]) % p);
    PrimePoly r = prime_poly_mod(prod, modulus, p);
    r.resize(l, 0);
    return from_poly(r);
  }
};

}  // namespace detail

/// Finite field F_{p^l} in polynomial basis over a monic irreducible modulus.
///
/// A FieldSpec is a cheap shared handle; two handles compare equal when they
/// describe the same (p, l, modulus). Multiplication goes through log/antilog
/// tables whose contents are derived from the polynomial-basis product.
class FieldSpec {
 public:
  FieldSpec() = default;

  /// Builds F_{p^l}. Without a modulus the first irreducible monic polynomial of
  /// degree l is used, ordered by the integer its coefficient digits spell.
  static FieldSpec make(std::uint32_t p, std::uint32_t l = 1, std::vector<std::uint32_t> modulus = {}) {
    if (!detail::is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
    if (l < 1) throw DomainError("field degree must be at least 1");
    std::uint64_t k = 1;
    for (std::uint32_t i = 0; i < l; ++i) {
      k *= p;
      if (k > kMaxFieldSize) throw DomainError("field size exceeds 2^16");
    }
    auto data = std::make_shared<detail::FieldData>();
    data->p = p;
    data->l = l;
    data->k = static_cast<std::uint32_t>(k);
    data->pow_p.resize(l);
    for (std::uint32_t i = 0, acc = 1; i < l; ++i, acc *= p) data->pow_p[i] = acc;

    if (modulus.empty()) {
      const std::uint64_t count = k;  // p^l choices of the lower coefficients
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        detail::PrimePoly cand = detail::prime_poly_from_index(idx, p, l);
        cand.push_back(1);
        if (detail::prime_poly_irreducible(cand, p)) {
          modulus = std::move(cand);
          break;
        }
      }
    } else {
      if (modulus.size() != l + 1 || modulus.back() != 1)
        throw DomainError("modulus must be monic of degree " + std::to_string(l));
      for (auto c : modulus)
        if (c >= p) throw DomainError("modulus coefficient out of range for F_" + std::to_string(p));
      if (!detail::prime_poly_irreducible(modulus, p)) throw DomainError("modulus is reducible over F_p");
    }
    data->modulus = modulus;
    build_tables(*data);
    FieldSpec spec;
    spec.data_ = std::move(data);
    return spec;
  }

  /// F_k for a prime power k, default modulus.
  static FieldSpec of_size(std::uint32_t k) {
    for (std::uint32_t p = 2; p <= k; ++p) {
      if (k % p != 0) continue;
      std::uint32_t l = 0, rest = k;
      while (rest % p == 0) {
        rest /= p;
        ++l;
      }
      if (rest != 1 || !detail::is_prime(p)) break;
      return make(p, l);
    }
    throw DomainError("field size " + std::to_string(k) + " is not a prime power");
  }

  bool valid() const { return static_cast<bool>(data_); }
  std::uint32_t p() const { return data_->p; }
  std::uint32_t l() const { return data_->l; }
  std::uint32_t k() const { return data_->k; }
  const std::vector<std::uint32_t>& modulus() const { return data_->modulus; }

  Rep zero() const { return 0; }
  Rep one() const { return 1; }

  Rep add(Rep a, Rep b) const {
    const auto& d = *data_;
    if (d.p == 2) return a ^ b;
    if (!d.add_table.empty()) return d.add_table[a * d.k + b];
    return d.add_digits(a, b);
  }

  Rep neg(Rep a) const {
    const auto& d = *data_;
    if (d.p == 2 || a == 0) return a;
    Rep out = 0;
    for (std::uint32_t i = 0; i < d.l; ++i) {
      out += ((d.p - a % d.p) % d.p) * d.pow_p[i];
      a /= d.p;
    }
    return out;
  }

  Rep sub(Rep a, Rep b) const { return add(a, neg(b)); }

  Rep mul(Rep a, Rep b) const {
    if (a == 0 || b == 0) return 0;
    const auto& d = *data_;
    return d.exp_table[d.log_table[a] + d.log_table[b]];
  }

  Rep inv(Rep a) const {
    if (a == 0) throw DivisionByZeroError("inverse of zero field element");
    const auto& d = *data_;
    return d.exp_table[(d.k - 1 - d.log_table[a]) % (d.k - 1)];
  }

  Rep div(Rep a, Rep b) const { return mul(a, inv(b)); }

  Rep pow(Rep a, std::uint64_t e) const {
    Rep result = 1;
    while (e) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  /// Product computed directly in the polynomial basis; the table-driven mul
  /// must agree with it everywhere.
  Rep mul_reference(Rep a, Rep b) const { return data_->mul_reference(a, b); }

  /// Image of an integer in the prime subfield.
  Rep from_int(std::int64_t v) const {
    const std::int64_t p = data_->p;
    return static_cast<Rep>(((v % p) + p) % p);
  }

  /// Base-p digits of the polynomial-basis representative.
  std::vector<std::uint32_t> coefficients(Rep a) const { return data_->to_poly(a); }

  std::string describe() const {
    std::string s = "F_" + std::to_string(k());
    if (l() > 1) {
      s += " (mod [";
      for (std::size_t i = 0; i < modulus().size(); ++i) s += (i ? "," : "") + std::to_string(modulus()[i]);
      s += "])";
    }
    return s;
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    if (a.data_ == b.data_) return true;
    if (!a.data_ || !b.data_) return false;
    return a.p() == b.p() && a.l() == b.l() && a.modulus() == b.modulus();
  }

 private:
  static void build_tables(detail::FieldData& d) {
    const std::uint32_t k = d.k;
    if (d.p != 2 && k <= 256) {
      d.add_table.resize(static_cast<std::size_t>(k) * k);
      for (Rep a = 0; a < k; ++a)
        for (Rep b = 0; b < k; ++b) d.add_table[a * k + b] = static_cast<std::uint16_t>(d.add_digits(a, b));
    }
    d.log_table.assign(k, 0);
    d.exp_table.assign(2 * static_cast<std::size_t>(k - 1) + 1, 0);
    if (k == 2) {
      d.exp_table = {1, 1, 1};
      d.log_table[1] = 0;
      return;
    }
    for (Rep g = 2; g < k; ++g) {
      std::uint32_t order = 1;
      Rep x = g;
      while (x != 1) {
        x = d.mul_reference(x, g);
        ++order;
      }
      if (order != k - 1) continue;
      Rep acc = 1;
      for (std::uint32_t i = 0; i < k - 1; ++i) {
        d.exp_table[i] = acc;
        d.exp_table[i + k - 1] = acc;
        d.log_table[acc] = i;
        acc = d.mul_reference(acc, g);
      }
      return;
    }
  }

  std::shared_ptr<const detail::FieldData> data_;
};

/// An element of a specific field; the operations below refuse to mix fields.
struct FieldElement {
  Rep rep = 0;
  FieldSpec spec;

  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.rep == b.rep && a.spec == b.spec; }
};

namespace detail {
inline void require_same(const FieldElement& a, const FieldElement& b) {
  if (!(a.spec == b.spec)) throw FieldMismatchError();
}
}  // namespace detail

inline FieldElement ff_add(const FieldElement& a, const FieldElement& b) {
  detail::require_same(a, b);
  return {a.spec.add(a.rep, b.rep), a.spec};
}

inline FieldElement ff_mul(const FieldElement& a, const FieldElement& b) {
  detail::require_same(a, b);
  return {a.spec.mul(a.rep, b.rep), a.spec};
}

inline FieldElement ff_inv(const FieldElement& a) { return {a.spec.inv(a.rep), a.spec}; }

/// All k elements in index order: 0, 1, then the rest.
inline std::vector<FieldElement> ff_enumerate(const FieldSpec& spec) {
  std::vector<FieldElement> out;
  out.reserve(spec.k());
  for (Rep r = 0; r < spec.k(); ++r) out.push_back({r, spec});
  return out;
}

}  // namespace ffdioph
