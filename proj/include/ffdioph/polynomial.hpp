#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ffdioph/errors.hpp"
#include "ffdioph/field.hpp"
#include "ffdioph/kadic.hpp"

namespace ffdioph {

inline constexpr int kZeroDegree = -1;

/// Element of F_k[X] in canonical form: coefficients lowest degree first, no
/// trailing zeros, so the zero polynomial has an empty coefficient list.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(FieldSpec f) : field_(std::move(f)) {}
  Polynomial(FieldSpec f, std::vector<Rep> coeffs) : field_(std::move(f)), coeffs_(std::move(coeffs)) {
    for (auto c : coeffs_)
      if (c >= field_.k()) throw DomainError("coefficient index out of range for " + field_.describe());
    trim();
  }

  static Polynomial constant(const FieldSpec& f, Rep c) { return Polynomial(f, {c}); }
  static Polynomial one(const FieldSpec& f) { return constant(f, 1); }
  static Polynomial monomial(const FieldSpec& f, int degree, Rep c = 1) {
    std::vector<Rep> v(static_cast<std::size_t>(degree) + 1, 0);
    v.back() = c;
    return Polynomial(f, std::move(v));
  }
  static Polynomial x(const FieldSpec& f) { return monomial(f, 1); }

  /// Polynomial whose first `len` coefficients are the base-k digits of index.
  static Polynomial from_index(const FieldSpec& f, std::uint64_t index, std::size_t len) {
    std::vector<Rep> v(len);
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = static_cast<Rep>(index % f.k());
      index /= f.k();
    }
    return Polynomial(f, std::move(v));
  }

  const FieldSpec& field() const { return field_; }
  const std::vector<Rep>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Rep coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
  Rep lead() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
  bool is_constant() const { return coeffs_.size() <= 1; }

  AbsValue abs() const { return is_zero() ? AbsValue::zero() : AbsValue::power(degree()); }

  Polynomial monic() const {
    if (is_zero()) return *this;
    return scaled(field_.inv(lead()));
  }

  Polynomial scaled(Rep c) const {
    std::vector<Rep> v(coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = field_.mul(coeffs_[i], c);
    return Polynomial(field_, std::move(v));
  }

  Polynomial shifted(int n) const {
    if (is_zero()) return *this;
    std::vector<Rep> v(static_cast<std::size_t>(n), 0);
    v.insert(v.end(), coeffs_.begin(), coeffs_.end());
    return Polynomial(field_, std::move(v));
  }

  Polynomial derivative() const {
    std::vector<Rep> v;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) v.push_back(field_.mul(field_.from_int(static_cast<std::int64_t>(i)), coeffs_[i]));
    return Polynomial(field_, std::move(v));
  }

  Rep evaluate(Rep x) const {
    Rep acc = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = field_.add(field_.mul(acc, x), coeffs_[i]);
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    const FieldSpec& f = common_field(a, b);
    std::vector<Rep> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.add(a.coeff(i), b.coeff(i));
    return Polynomial(f, std::move(v));
  }

  friend Polynomial operator-(const Polynomial& a) {
    std::vector<Rep> v(a.coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.field_.neg(a.coeffs_[i]);
    return Polynomial(a.field_, std::move(v));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    const FieldSpec& f = common_field(a, b);
    if (a.is_zero() || b.is_zero()) return Polynomial(f);
    std::vector<Rep> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] = f.add(v[i + j], f.mul(a.coeffs_[i], b.coeffs_[j]));
    }
    return Polynomial(f, std::move(v));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_ == b.coeffs_ && (a.field_ == b.field_ || !a.field_.valid() || !b.field_.valid());
  }

  /// Total order by (degree, coefficients from the top); used for deterministic sorting.
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return a.coeffs_.size() < b.coeffs_.size();
    return std::lexicographical_compare(a.coeffs_.rbegin(), a.coeffs_.rend(), b.coeffs_.rbegin(), b.coeffs_.rend());
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      const Rep c = coeffs_[i];
      if (c == 0) continue;
      if (!s.empty()) s += " + ";
      const bool show_coeff = c != 1 || i == 0;
      if (show_coeff) s += std::to_string(c);
      if (i >= 1) s += (show_coeff ? "*" : std::string()) + "X";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

  static const FieldSpec& common_field(const Polynomial& a, const Polynomial& b) {
    if (!(a.field_ == b.field_)) throw FieldMismatchError();
    return a.field_;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  FieldSpec field_;
  std::vector<Rep> coeffs_;
};

/// Euclidean division a = q*b + r with deg r < deg b.
inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  const FieldSpec& f = Polynomial::common_field(a, b);
  if (b.is_zero()) throw DivisionByZeroError("polynomial division by zero");
  std::vector<Rep> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial(f), a};
  std::vector<Rep> quot(static_cast<std::size_t>(a.degree() - db) + 1, 0);
  const Rep lead_inv = f.inv(b.lead());
  for (int i = a.degree(); i >= db; --i) {
    const Rep c = rem[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const Rep factor = f.mul(c, lead_inv);
    quot[static_cast<std::size_t>(i - db)] = factor;
    for (int j = 0; j <= db; ++j) {
      auto& slot = rem[static_cast<std::size_t>(i - db + j)];
      slot = f.sub(slot, f.mul(factor, b.coeffs()[static_cast<std::size_t>(j)]));
    }
  }
  return {Polynomial(f, std::move(quot)), Polynomial(f, std::move(rem))};
}

inline Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }
inline Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }

/// Monic greatest common divisor.
inline Polynomial poly_gcd(Polynomial a, Polynomial b) {
  if (a.is_zero() && b.is_zero()) throw DomainError("gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    Polynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline bool coprime(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() && b.is_zero()) return false;
  return poly_gcd(a, b).degree() == 0;
}

inline Polynomial mulmod(const Polynomial& a, const Polynomial& b, const Polynomial& m) { return (a * b) % m; }

inline Polynomial powmod(Polynomial base, BigInt e, const Polynomial& m) {
  Polynomial result = Polynomial::one(m.field()) % m;
  base = base % m;
  while (e > 0) {
    if ((e & 1) != 0) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

namespace detail {

// X^(k^times) mod m via repeated k-th powering.
inline Polynomial frobenius_power_of_x(const Polynomial& m, std::uint64_t times) {
  const FieldSpec& f = m.field();
  Polynomial h = Polynomial::x(f) % m;
  for (std::uint64_t i = 0; i < times; ++i) h = powmod(h, f.k(), m);
  return h;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

/// Rabin's irreducibility test.
inline bool is_irreducible(const Polynomial& f) {
  const int n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  const Polynomial fm = f.monic();
  const Polynomial x = Polynomial::x(f.field());
  if (!(detail::frobenius_power_of_x(fm, static_cast<std::uint64_t>(n)) == x % fm)) return false;
  for (auto r : detail::prime_divisors(static_cast<std::uint64_t>(n))) {
    const Polynomial h = detail::frobenius_power_of_x(fm, static_cast<std::uint64_t>(n) / r) - x;
    if (poly_gcd(fm, h).degree() != 0) return false;
  }
  return true;
}

/// Monic irreducible factors with multiplicities; ordered by Polynomial::operator<.
using Factorization = std::vector<std::pair<Polynomial, int>>;

namespace detail {

inline void merge_factor(std::map<std::vector<Rep>, std::pair<Polynomial, int>>& acc, const Polynomial& p, int mult) {
  auto [it, inserted] = acc.try_emplace(p.coeffs(), p, 0);
  it->second.second += mult;
}

// p-th root of a polynomial whose derivative vanishes.
inline Polynomial pth_root(const Polynomial& c) {
  const FieldSpec& f = c.field();
  const std::uint32_t p = f.p();
  const std::uint64_t root_exp = f.k() / p;  // a^(k/p) is the p-th root of a
  std::vector<Rep> v;
  for (std::size_t i = 0; i < c.coeffs().size(); i += p) v.push_back(f.pow(c.coeffs()[i], root_exp));
  return Polynomial(f, std::move(v));
}

inline std::vector<std::pair<Polynomial, int>> squarefree_decomposition(const Polynomial& monic_f) {
  std::vector<std::pair<Polynomial, int>> out;
  const FieldSpec& field = monic_f.field();
  const Polynomial one = Polynomial::one(field);
  if (monic_f.degree() < 1) return out;
  const Polynomial fprime = monic_f.derivative();
  if (fprime.is_zero()) {
    for (auto& [g, e] : squarefree_decomposition(pth_root(monic_f))) out.emplace_back(g, e * static_cast<int>(field.p()));
    return out;
  }
  Polynomial c = poly_gcd(monic_f, fprime);
  Polynomial w = monic_f / c;
  int i = 1;
  while (!(w == one)) {
    Polynomial y = poly_gcd(w, c);
    Polynomial fac = (w / y).monic();
    if (fac.degree() > 0) out.emplace_back(fac, i);
    w = y;
    c = c / y;
    ++i;
  }
  if (c.degree() > 0) {
    for (auto& [g, e] : squarefree_decomposition(pth_root(c.monic()))) out.emplace_back(g, e * static_cast<int>(field.p()));
  }
  return out;
}

inline std::vector<std::pair<Polynomial, int>> distinct_degree(Polynomial f) {
  std::vector<std::pair<Polynomial, int>> out;
  const FieldSpec& field = f.field();
  const Polynomial x = Polynomial::x(field);
  Polynomial h = x % f;
  for (int i = 1; 2 * i <= f.degree(); ++i) {
    h = powmod(h, field.k(), f);
    Polynomial g = poly_gcd(f, h - x);
    if (g.degree() > 0) {
      out.emplace_back(g, i);
      f = (f / g).monic();
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, f.degree());
  return out;
}

inline void equal_degree(const Polynomial& g, int d, std::mt19937_64& rng, std::vector<Polynomial>& out) {
  if (g.degree() == d) {
    out.push_back(g);
    return;
  }
  const FieldSpec& field = g.field();
  const BigInt qd = big_pow(field.k(), static_cast<std::uint64_t>(d));
  std::uniform_int_distribution<Rep> coeff(0, field.k() - 1);
  for (;;) {
    std::vector<Rep> v(static_cast<std::size_t>(g.degree()));
    for (auto& c : v) c = coeff(rng);
    Polynomial a(field, std::move(v));
    if (a.degree() < 1) continue;
    Polynomial b(field);
    if (field.p() == 2) {
      // Absolute trace to F_2: a + a^2 + ... + a^(2^(l d - 1)).
      Polynomial t = a % g;
      b = t;
      for (std::uint64_t i = 1; i < static_cast<std::uint64_t>(field.l()) * d; ++i) {
        t = mulmod(t, t, g);
        b = b + t;
      }
    } else {
      b = powmod(a, (qd - 1) / 2, g) - Polynomial::one(field);
    }
    Polynomial h = poly_gcd(g, b.is_zero() ? g : b);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree(h, d, rng, out);
      equal_degree((g / h).monic(), d, rng, out);
      return;
    }
  }
}

inline std::vector<Polynomial> monic_polys_of_degree(const FieldSpec& f, int d) {
  std::vector<Polynomial> out;
  std::uint64_t count = 1;
  for (int i = 0; i < d; ++i) count *= f.k();
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<Rep> v = Polynomial::from_index(f, idx, static_cast<std::size_t>(d)).coeffs();
    v.resize(static_cast<std::size_t>(d), 0);
    v.push_back(1);
    out.emplace_back(f, std::move(v));
  }
  return out;
}

inline void trial_division(Polynomial f, std::map<std::vector<Rep>, std::pair<Polynomial, int>>& acc) {
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    for (const auto& cand : monic_polys_of_degree(f.field(), d)) {
      while (f.degree() >= d) {
        auto [q, r] = divmod(f, cand);
        if (!r.is_zero()) break;
        merge_factor(acc, cand, 1);
        f = q;
      }
    }
  }
  if (f.degree() > 0) merge_factor(acc, f.monic(), 1);
}

}  // namespace detail

inline constexpr int kTrialDivisionMaxDegree = 4;

/// Factorization into monic irreducibles (squarefree, distinct-degree and
/// equal-degree splitting; trial division for small degrees).
inline Factorization poly_factor(const Polynomial& f) {
  if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
  std::map<std::vector<Rep>, std::pair<Polynomial, int>> acc;
  const Polynomial fm = f.monic();
  if (fm.degree() <= kTrialDivisionMaxDegree) {
    detail::trial_division(fm, acc);
  } else {
    std::mt19937_64 rng(0x5eedf00dULL + static_cast<std::uint64_t>(fm.degree()));
    for (const auto& [sq, mult] : detail::squarefree_decomposition(fm)) {
      for (const auto& [block, d] : detail::distinct_degree(sq)) {
        std::vector<Polynomial> irreducibles;
        detail::equal_degree(block, d, rng, irreducibles);
        for (const auto& g : irreducibles) detail::merge_factor(acc, g, mult);
      }
    }
  }
  Factorization out;
  for (auto& [key, entry] : acc) out.push_back(entry);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

inline int poly_mobius(const Polynomial& f) {
  if (f.is_zero()) throw DomainError("Mobius function of the zero polynomial");
  int sign = 1;
  for (const auto& [g, e] : poly_factor(f)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

/// Order of the unit group of F[X]/(q): |q| * prod over distinct monic
/// irreducible P | q of (1 - 1/|P|). Equals 1 for nonzero constants.
inline BigInt unit_count(const Polynomial& q) {
  if (q.is_zero()) throw DomainError("unit count of the zero polynomial");
  const std::uint32_t k = q.field().k();
  BigInt result = big_pow(k, static_cast<std::uint64_t>(q.degree()));
  for (const auto& [g, e] : poly_factor(q)) {
    const BigInt norm = big_pow(k, static_cast<std::uint64_t>(g.degree()));
    result = result / norm * (norm - 1);
  }
  return result;
}

/// Phi(q): nonzero q' with |q'| < |q| and gcd(q, q') = 1, via the product
/// formula. Zero for constant q, whose range |q'| < 1 holds no nonzero q'.
inline BigInt totient(const Polynomial& q) {
  if (q.is_zero()) throw DomainError("totient of the zero polynomial");
  if (q.degree() == 0) return 0;
  return unit_count(q);
}

/// The same count restricted to monic q'; equals totient(q) / (k - 1).
inline BigInt totient_monic(const Polynomial& q) { return totient(q) / (q.field().k() - 1); }

/// Number of monic irreducible polynomials of degree d over F_k.
inline BigInt count_monic_irreducibles(std::uint32_t k, int d) {
  auto mu = [](int n) {
    int sign = 1;
    for (int p = 2; p * p <= n; ++p) {
      if (n % p) continue;
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
  };
  BigInt sum = 0;
  for (int e = 1; e <= d; ++e)
    if (d % e == 0) sum += mu(d / e) * big_pow(k, static_cast<std::uint64_t>(e));
  return sum / d;
}

/// Calls fn on every polynomial of exact degree d (monic only, if asked).
template <typename Fn>
void for_each_poly(const FieldSpec& f, int d, bool monic, Fn&& fn) {
  if (d < 0) throw DomainError("degree must be non-negative");
  std::uint64_t count = 1;
  for (int i = 0; i < d; ++i) count *= f.k();
  for (Rep lead = 1; lead < f.k(); ++lead) {
    if (monic && lead != 1) break;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<Rep> v = Polynomial::from_index(f, idx, static_cast<std::size_t>(d)).coeffs();
      v.resize(static_cast<std::size_t>(d), 0);
      v.push_back(lead);
      fn(Polynomial(f, std::move(v)));
    }
  }
}

inline std::vector<Polynomial> enumerate_polys(const FieldSpec& f, int d, bool monic) {
  std::vector<Polynomial> out;
  for_each_poly(f, d, monic, [&](Polynomial p) { out.push_back(std::move(p)); });
  return out;
}

/// Row vector q in F[X]^m.
struct PolyVector {
  std::vector<Polynomial> entries;

  PolyVector() = default;
  explicit PolyVector(std::vector<Polynomial> e) : entries(std::move(e)) {
    if (entries.empty()) throw DomainError("PolyVector needs at least one entry");
    for (const auto& p : entries)
      if (!(p.field() == entries.front().field())) throw FieldMismatchError();
  }

  std::size_t m() const { return entries.size(); }
  const FieldSpec& field() const { return entries.front().field(); }
  const Polynomial& operator[](std::size_t i) const { return entries[i]; }

  bool is_zero() const {
    return std::all_of(entries.begin(), entries.end(), [](const Polynomial& p) { return p.is_zero(); });
  }
  int max_degree() const {
    int d = kZeroDegree;
    for (const auto& p : entries) d = std::max(d, p.degree());
    return d;
  }
  /// |q|_inf = max_i |q_i|.
  AbsValue norm_inf() const { return is_zero() ? AbsValue::zero() : AbsValue::power(max_degree()); }

  /// Monic gcd of the coordinates.
  Polynomial content() const {
    Polynomial g(field());
    for (const auto& p : entries) g = g.is_zero() && p.is_zero() ? g : poly_gcd(g, p);
    return g;
  }

  PolyVector scaled(const Polynomial& c) const {
    std::vector<Polynomial> e;
    for (const auto& p : entries) e.push_back(p * c);
    return PolyVector(std::move(e));
  }

  friend bool operator==(const PolyVector& a, const PolyVector& b) { return a.entries == b.entries; }
  friend bool operator<(const PolyVector& a, const PolyVector& b) {
    return std::lexicographical_compare(a.entries.begin(), a.entries.end(), b.entries.begin(), b.entries.end());
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < entries.size(); ++i) s += (i ? ", " : "") + entries[i].str();
    return s + ")";
  }
};

/// Linear independence over F((X^-1)): some 2x2 minor is nonzero.
inline bool linearly_independent(const PolyVector& a, const PolyVector& b) {
  if (a.m() != b.m()) throw DomainError("dimension mismatch");
  for (std::size_t i = 0; i < a.m(); ++i)
    for (std::size_t j = i + 1; j < a.m(); ++j)
      if (!(a[i] * b[j] - a[j] * b[i]).is_zero()) return true;
  return false;
}

/// Every q in F[X]^m with |q|_inf = k^N, i.e. max degree exactly N.
template <typename Fn>
void for_each_vector(const FieldSpec& f, std::size_t m, int N, Fn&& fn) {
  if (N < 0) throw DomainError("norm exponent must be non-negative");
  std::uint64_t per_coord = 1;
  for (int i = 0; i <= N; ++i) per_coord *= f.k();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= per_coord;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<Polynomial> e;
    e.reserve(m);
    std::uint64_t rest = idx;
    bool reaches = false;
    for (std::size_t i = 0; i < m; ++i) {
      e.push_back(Polynomial::from_index(f, rest % per_coord, static_cast<std::size_t>(N) + 1));
      reaches = reaches || e.back().degree() == N;
      rest /= per_coord;
    }
    if (reaches) fn(PolyVector(std::move(e)));
  }
}

inline std::vector<PolyVector> enumerate_vectors(const FieldSpec& f, std::size_t m, int N) {
  std::vector<PolyVector> out;
  for_each_vector(f, m, N, [&](PolyVector q) { out.push_back(std::move(q)); });
  return out;
}

}  // namespace ffdioph
