#pragma once

// Families S of row vectors, approximation functions psi, and the exponents
// built from them: v(S), gamma(S), lambda(psi), eta(psi), C(N, v; psi),
// gamma(v; psi), delta(v; psi), delta(psi).
//
// psi always depends on q only through |q|_inf (and, for the restricted
// kind, membership in a family), so every count reduces to the norm blocks
// S_N = {q in S : |q|_inf = k^N}. Limits and limsups are estimated from
// least-squares slopes over the tail window [N_max/2, N_max].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ffdioph/errors.hpp"
#include "ffdioph/field.hpp"
#include "ffdioph/kadic.hpp"
#include "ffdioph/polynomial.hpp"

namespace ffdioph {

enum class FamilyKind { ALL_NONZERO, MONIC_COORDS, LACUNARY, DEGREE_PATTERN, EXPLICIT };

inline std::string family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::ALL_NONZERO: return "ALL_NONZERO";
    case FamilyKind::MONIC_COORDS: return "MONIC_COORDS";
    case FamilyKind::LACUNARY: return "LACUNARY";
    case FamilyKind::DEGREE_PATTERN: return "DEGREE_PATTERN";
    case FamilyKind::EXPLICIT: return "EXPLICIT";
  }
  return "?";
}

class SetFamily {
 public:
  /// All nonzero q in F[X]^m.
  static SetFamily all_nonzero(FieldSpec f, std::size_t m) { return SetFamily(FamilyKind::ALL_NONZERO, std::move(f), m); }

  /// q whose coordinates are all monic.
  static SetFamily monic_coords(FieldSpec f, std::size_t m) { return SetFamily(FamilyKind::MONIC_COORDS, std::move(f), m); }

  /// Nonzero q with deg q = max degree in {base^j : j >= 0}.
  static SetFamily lacunary(FieldSpec f, std::size_t m, int base) {
    if (base < 2) throw DomainError("lacunary base must be at least 2");
    SetFamily s(FamilyKind::LACUNARY, std::move(f), m);
    s.base_ = base;
    return s;
  }

  /// Nonzero q whose max degree lies in a given finite list.
  static SetFamily lacunary_list(FieldSpec f, std::size_t m, std::vector<int> degrees) {
    SetFamily s(FamilyKind::LACUNARY, std::move(f), m);
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    for (int d : degrees)
      if (d < 0) throw DomainError("lacunary degrees must be non-negative");
    s.degrees_ = std::move(degrees);
    return s;
  }

  /// Nonzero q with deg q_i <= floor(alpha_i N) where N = max degree; some
  /// alpha_i must be 1 so that every block is reachable.
  static SetFamily degree_pattern(FieldSpec f, std::vector<Rational> alphas) {
    if (alphas.empty()) throw DomainError("degree pattern needs at least one coordinate");
    bool has_one = false;
    for (const auto& a : alphas) {
      if (a < 0 || a > 1) throw DomainError("degree pattern fractions must lie in [0, 1]");
      has_one = has_one || a == 1;
    }
    if (!has_one) throw DomainError("degree pattern needs a coordinate with fraction 1");
    SetFamily s(FamilyKind::DEGREE_PATTERN, std::move(f), alphas.size());
    s.alphas_ = std::move(alphas);
    return s;
  }

  static SetFamily explicit_list(FieldSpec f, std::size_t m, std::vector<PolyVector> members) {
    SetFamily s(FamilyKind::EXPLICIT, std::move(f), m);
    for (const auto& q : members) {
      if (q.m() != m) throw DomainError("explicit member has the wrong dimension");
      if (q.is_zero()) throw DomainError("0 is never a member of S");
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    s.members_ = std::move(members);
    return s;
  }

  FamilyKind kind() const { return kind_; }
  const FieldSpec& field() const { return field_; }
  std::size_t m() const { return m_; }
  int base() const { return base_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<Rational>& alphas() const { return alphas_; }
  const std::vector<PolyVector>& members() const { return members_; }

  bool infinite() const {
    if (kind_ == FamilyKind::EXPLICIT) return false;
    if (kind_ == FamilyKind::LACUNARY) return base_ > 0;
    return true;
  }

  bool block_allowed(int N) const {
    if (N < 0) return false;
    if (kind_ != FamilyKind::LACUNARY) return true;
    if (base_ == 0) return std::binary_search(degrees_.begin(), degrees_.end(), N);
    for (long long p = 1; p <= N; p *= base_)
      if (p == N) return true;
    return false;
  }

  bool contains(const PolyVector& q) const {
    if (q.m() != m_ || q.is_zero() || !(q.field() == field_)) return false;
    const int N = q.max_degree();
    switch (kind_) {
      case FamilyKind::ALL_NONZERO: return true;
      case FamilyKind::MONIC_COORDS:
        return std::all_of(q.entries.begin(), q.entries.end(), [](const Polynomial& c) { return c.is_monic(); });
      case FamilyKind::LACUNARY: return block_allowed(N);
      case FamilyKind::DEGREE_PATTERN:
        for (std::size_t i = 0; i < m_; ++i)
          if (q[i].degree() > cap(i, N)) return false;
        return true;
      case FamilyKind::EXPLICIT: return std::binary_search(members_.begin(), members_.end(), q);
    }
    return false;
  }

  /// #S_N in closed form.
  BigInt block_count(int N) const {
    if (N < 0) return 0;
    const std::uint32_t k = field_.k();
    const auto up_to = [&](std::int64_t d) { return d < 0 ? BigInt(1) : big_pow(k, static_cast<std::uint64_t>(d + 1)); };
    switch (kind_) {
      case FamilyKind::ALL_NONZERO:
      case FamilyKind::LACUNARY:
        if (!block_allowed(N)) return 0;
        return big_pow(k, static_cast<std::uint64_t>(m_) * (N + 1)) - big_pow(k, static_cast<std::uint64_t>(m_) * N);
      case FamilyKind::MONIC_COORDS: {
        // monic polynomials of degree <= d: (k^(d+1) - 1)/(k - 1)
        const auto monic = [&](std::int64_t d) { return d < 0 ? BigInt(0) : (up_to(d) - 1) / (k - 1); };
        return boost::multiprecision::pow(monic(N), static_cast<unsigned>(m_)) -
               boost::multiprecision::pow(monic(N - 1), static_cast<unsigned>(m_));
      }
      case FamilyKind::DEGREE_PATTERN: {
        BigInt all = 1, lower = 1;
        for (std::size_t i = 0; i < m_; ++i) {
          all *= up_to(cap(i, N));
          lower *= up_to(std::min<std::int64_t>(cap(i, N), N - 1));
        }
        return all - lower;
      }
      case FamilyKind::EXPLICIT: {
        BigInt c = 0;
        for (const auto& q : members_)
          if (q.max_degree() == N) ++c;
        return c;
      }
    }
    return 0;
  }

  /// #S_N by enumerating F[X]^m and testing membership.
  BigInt block_count_enumerated(int N) const {
    BigInt c = 0;
    for_each_vector(field_, m_, N, [&](const PolyVector& q) {
      if (contains(q)) ++c;
    });
    return c;
  }

  /// Exact v(S) when it is known in closed form.
  std::optional<Rational> oracle_v() const {
    switch (kind_) {
      case FamilyKind::ALL_NONZERO:
      case FamilyKind::MONIC_COORDS: return Rational(static_cast<long long>(m_));
      case FamilyKind::LACUNARY:
        if (base_ > 0) return Rational(static_cast<long long>(m_));
        return std::nullopt;
      case FamilyKind::DEGREE_PATTERN: return std::accumulate(alphas_.begin(), alphas_.end(), Rational(0));
      case FamilyKind::EXPLICIT: return std::nullopt;
    }
    return std::nullopt;
  }

  std::string describe() const {
    std::string s = family_kind_name(kind_) + "(m=" + std::to_string(m_) + ", " + field_.describe();
    if (kind_ == FamilyKind::LACUNARY) {
      if (base_ > 0) s += ", base=" + std::to_string(base_);
      else {
        s += ", degrees=";
        for (std::size_t i = 0; i < degrees_.size(); ++i) s += (i ? "," : "") + std::to_string(degrees_[i]);
      }
    }
    if (kind_ == FamilyKind::DEGREE_PATTERN) {
      s += ", alphas=";
      for (std::size_t i = 0; i < alphas_.size(); ++i) s += (i ? "," : "") + rational_string(alphas_[i]);
    }
    if (kind_ == FamilyKind::EXPLICIT) s += ", size=" + std::to_string(members_.size());
    return s + ")";
  }

 private:
  SetFamily(FamilyKind kind, FieldSpec f, std::size_t m) : kind_(kind), field_(std::move(f)), m_(m) {
    if (m_ == 0) throw DomainError("m must be at least 1");
  }

  std::int64_t cap(std::size_t i, int N) const {
    return static_cast<std::int64_t>(floor_rational(alphas_[i] * N));
  }

  FamilyKind kind_;
  FieldSpec field_;
  std::size_t m_;
  int base_ = 0;
  std::vector<int> degrees_;
  std::vector<Rational> alphas_;
  std::vector<PolyVector> members_;
};

enum class PsiKind { POWER, POWER_LOG, INDICATOR_RESTRICTED, TABLE };

inline std::string psi_kind_name(PsiKind k) {
  switch (k) {
    case PsiKind::POWER: return "POWER";
    case PsiKind::POWER_LOG: return "POWER_LOG";
    case PsiKind::INDICATOR_RESTRICTED: return "INDICATOR_RESTRICTED";
    case PsiKind::TABLE: return "TABLE";
  }
  return "?";
}

/// psi with values in {k^r} u {0}; values are stored as the exponent r, or
/// nullopt for 0.
class ApproxFunction {
 public:
  /// |q|^-v, rounded down to a power of k: r = floor(-v N) at |q| = k^N.
  static ApproxFunction power(Rational v) {
    ApproxFunction a(PsiKind::POWER);
    a.v_ = std::move(v);
    return a;
  }

  /// |q|^-v (log_k |q|)^a, rounded down to a power of k; the log factor is
  /// taken as 1 on the block N = 0.
  static ApproxFunction power_log(Rational v, Rational a) {
    ApproxFunction f(PsiKind::POWER_LOG);
    f.v_ = std::move(v);
    f.log_exponent_ = std::move(a);
    return f;
  }

  /// Explicit exponents per block; blocks outside the map get psi = 0.
  static ApproxFunction table(std::map<int, std::optional<std::int64_t>> values) {
    ApproxFunction f(PsiKind::TABLE);
    f.table_ = std::move(values);
    return f;
  }

  /// psi-hat: inner psi on S, 0 elsewhere.
  static ApproxFunction restricted(const ApproxFunction& inner, const SetFamily& S) {
    if (inner.kind_ == PsiKind::INDICATOR_RESTRICTED) throw DomainError("nested restrictions are not supported");
    ApproxFunction f(PsiKind::INDICATOR_RESTRICTED);
    f.inner_ = std::make_shared<ApproxFunction>(inner);
    f.support_ = std::make_shared<SetFamily>(S);
    return f;
  }

  PsiKind kind() const { return kind_; }
  const Rational& v() const { return v_; }
  const Rational& log_exponent() const { return log_exponent_; }
  const ApproxFunction* inner() const { return inner_.get(); }
  const SetFamily* support() const { return support_.get(); }

  /// Exponent of psi on the block |q| = k^N, ignoring any support restriction.
  std::optional<std::int64_t> exponent_at(int N, std::uint32_t k) const {
    switch (kind_) {
      case PsiKind::POWER: return static_cast<std::int64_t>(floor_rational(-v_ * N));
      case PsiKind::POWER_LOG: {
        if (N <= 1) return static_cast<std::int64_t>(floor_rational(-v_ * N));
        // floor(-vN + a log_k N): exact integer part, then a double for the log term.
        const double x = static_cast<double>(-v_ * N) + static_cast<double>(log_exponent_) * std::log(N) / std::log(k);
        return static_cast<std::int64_t>(std::floor(x + 1e-12));
      }
      case PsiKind::TABLE: {
        const auto it = table_.find(N);
        if (it == table_.end()) return std::nullopt;
        return it->second;
      }
      case PsiKind::INDICATOR_RESTRICTED: return inner_->exponent_at(N, k);
    }
    return std::nullopt;
  }

  std::optional<std::int64_t> at(const PolyVector& q) const {
    if (q.is_zero()) throw DomainError("psi is defined on nonzero q");
    if (support_ && !support_->contains(q)) return std::nullopt;
    return exponent_at(q.max_degree(), q.field().k());
  }

  /// Exact lambda(psi) when psi is an exact power family.
  std::optional<Rational> oracle_lambda() const {
    if (kind_ == PsiKind::POWER || kind_ == PsiKind::POWER_LOG) return v_;
    if (kind_ == PsiKind::INDICATOR_RESTRICTED) return inner_->oracle_lambda();
    return std::nullopt;
  }

  std::string describe() const {
    switch (kind_) {
      case PsiKind::POWER: return "POWER(v=" + rational_string(v_) + ")";
      case PsiKind::POWER_LOG: return "POWER_LOG(v=" + rational_string(v_) + ", a=" + rational_string(log_exponent_) + ")";
      case PsiKind::TABLE: return "TABLE(" + std::to_string(table_.size()) + " blocks)";
      case PsiKind::INDICATOR_RESTRICTED: return "RESTRICTED(" + inner_->describe() + " to " + support_->describe() + ")";
    }
    return "?";
  }

 private:
  explicit ApproxFunction(PsiKind kind) : kind_(kind) {}

  PsiKind kind_;
  Rational v_ = 0;
  Rational log_exponent_ = 0;
  std::map<int, std::optional<std::int64_t>> table_;
  std::shared_ptr<const ApproxFunction> inner_;
  std::shared_ptr<const SetFamily> support_;
};

/// The family of q on which psi may be nonzero, inside the ambient family S.
inline const SetFamily& effective_support(const ApproxFunction& psi, const SetFamily& S) {
  if (!psi.support()) return S;
  if (psi.support()->m() != S.m()) throw DomainError("psi is restricted to a family of a different dimension");
  if (S.kind() == FamilyKind::ALL_NONZERO) return *psi.support();
  throw DomainError("psi is already restricted; pass ALL_NONZERO as the ambient family");
}

struct BlockRow {
  int N = 0;
  BigInt count;       // #S_N
  BigInt cumulative;  // C(k^N; S)
};

inline std::vector<BlockRow> block_counts(const SetFamily& S, int N_max) {
  if (N_max < 0) throw DomainError("N_max must be non-negative");
  std::vector<BlockRow> rows;
  BigInt acc = 0;
  for (int N = 0; N <= N_max; ++N) {
    const BigInt c = S.block_count(N);
    acc += c;
    rows.push_back({N, c, acc});
  }
  return rows;
}

struct Estimate {
  double value = 0;
  std::optional<Rational> exact;
  bool converged = true;
  int window_lo = 0, window_hi = 0;
  std::string note;
};

namespace detail {

inline double slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw DomainError("need at least two points for a slope");
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0) throw DomainError("degenerate slope window");
  return sxy / sxx;
}

// Points with index in the tail [N_max/2, N_max]; when fewer than three
// survive (sparse families) every available point with N >= 1 is used.
template <class Point>
std::vector<Point> tail_points(const std::vector<std::pair<int, Point>>& indexed, int N_max, int& lo, int& hi) {
  std::vector<Point> tail, all;
  lo = N_max / 2;
  hi = N_max;
  for (const auto& [N, p] : indexed) {
    if (N < 1) continue;
    all.push_back(p);
    if (N >= N_max / 2) tail.push_back(p);
  }
  if (tail.size() >= 3) return tail;
  if (!indexed.empty()) lo = std::max(1, indexed.front().first);
  return all;
}

}  // namespace detail

/// v(S): slope of log_k #S_N against N over nonempty blocks.
inline Estimate v_of_S(const SetFamily& S, int N_max) {
  if (N_max < 4) throw DomainError("v(S) needs N_max >= 4");
  std::vector<std::pair<int, std::pair<double, double>>> pts;
  for (int N = 1; N <= N_max; ++N) {
    const BigInt c = S.block_count(N);
    if (c > 0) pts.push_back({N, {static_cast<double>(N), log_k(c, S.field().k())}});
  }
  if (pts.empty() && S.block_count(0) == 0) throw DomainError("empty family");
  Estimate e;
  e.exact = S.oracle_v();
  if (pts.size() < 2) {
    e.value = 0;
    e.converged = false;
    e.note = "fewer than two nonempty blocks; a finite family has v(S) = -inf";
    return e;
  }
  e.value = detail::slope(detail::tail_points(pts, N_max, e.window_lo, e.window_hi));
  return e;
}

/// gamma(S): slope of log_k C(k^N; S) against N.
inline Estimate gamma_of_S(const SetFamily& S, int N_max) {
  if (!S.infinite()) throw DomainError("gamma(S) is defined for infinite families only");
  if (N_max < 4) throw DomainError("gamma(S) needs N_max >= 4");
  std::vector<std::pair<int, std::pair<double, double>>> pts;
  BigInt acc = S.block_count(0);
  for (int N = 1; N <= N_max; ++N) {
    const BigInt c = S.block_count(N);
    acc += c;
    if (c > 0) pts.push_back({N, {static_cast<double>(N), log_k(acc, S.field().k())}});
  }
  if (pts.size() < 2) throw DomainError("too few nonempty blocks below N_max");
  Estimate e;
  e.exact = S.oracle_v();
  e.value = detail::slope(detail::tail_points(pts, N_max, e.window_lo, e.window_hi));
  return e;
}

/// lambda(psi) along S: slope of -log_k psi against log_k |q|. The limit is
/// flagged as nonexistent when -log_k psi / N spreads by more than `tol`
/// over the tail.
inline Estimate lambda_of_psi(const ApproxFunction& psi, const SetFamily& S, int N_max, double tol = 0.1) {
  if (N_max < 4) throw DomainError("lambda needs N_max >= 4");
  const SetFamily& supp = effective_support(psi, S);
  const std::uint32_t k = S.field().k();
  std::vector<std::pair<int, std::pair<double, double>>> pts;
  for (int N = 1; N <= N_max; ++N) {
    if (supp.block_count(N) == 0) continue;
    const auto r = psi.exponent_at(N, k);
    if (r) pts.push_back({N, {static_cast<double>(N), -static_cast<double>(*r)}});
  }
  if (pts.size() < 2) throw DomainError("psi vanishes on all sampled q");
  Estimate e;
  e.exact = psi.oracle_lambda();
  const auto tail = detail::tail_points(pts, N_max, e.window_lo, e.window_hi);
  e.value = detail::slope(tail);
  double lo = 1e300, hi = -1e300;
  for (const auto& [x, y] : tail) {
    lo = std::min(lo, y / x);
    hi = std::max(hi, y / x);
  }
  if (hi - lo > tol) {
    e.converged = false;
    e.note = "limit does not exist: -log psi / log |q| ranges over [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  }
  return e;
}

/// eta(psi): the series sum |q|^n (psi/|q|)^eta has block terms
/// #S_N k^(nN) k^(eta (r_N - N)), so eta is the growth rate of
/// log_k #S_N + nN against N - r_N. psi is capped at 1 first.
inline Estimate eta_of_psi(const ApproxFunction& psi, const SetFamily& S, std::size_t n, int N_max, double tol = 0.05) {
  if (N_max < 4) throw DomainError("eta needs N_max >= 4");
  const SetFamily& supp = effective_support(psi, S);
  const std::uint32_t k = S.field().k();
  std::vector<std::pair<int, std::pair<double, double>>> pts;
  for (int N = 1; N <= N_max; ++N) {
    const BigInt c = supp.block_count(N);
    const auto r = psi.exponent_at(N, k);
    if (c == 0 || !r) continue;
    const double x = static_cast<double>(N - std::min<std::int64_t>(*r, 0));
    pts.push_back({N, {x, log_k(c, k) + static_cast<double>(n) * N}});
  }
  if (pts.size() < 2) throw DomainError("psi vanishes identically on the sampled range");
  Estimate e;
  const auto tail = detail::tail_points(pts, N_max, e.window_lo, e.window_hi);
  e.value = detail::slope(tail);
  const double ratio = tail.back().second / tail.back().first;
  if (std::abs(ratio - e.value) > tol) {
    e.converged = false;
    e.note = "slow convergence: slope " + std::to_string(e.value) + " vs ratio " + std::to_string(ratio);
  }
  // For psi = |q|^-v on S the series is sum_{q in S} |q|^(n - eta(1+v)).
  const ApproxFunction& base = psi.inner() ? *psi.inner() : psi;
  if (base.kind() == PsiKind::POWER && supp.oracle_v())
    e.exact = (*supp.oracle_v() + Rational(static_cast<long long>(n))) / (base.v() + 1);
  return e;
}

/// C(k^N, v; psi): q with |q| <= k^N and psi(q) >= |q|^-v.
inline BigInt C_of(int N, const Rational& v, const ApproxFunction& psi, const SetFamily& S) {
  const SetFamily& supp = effective_support(psi, S);
  BigInt total = 0;
  for (int j = 0; j <= N; ++j) {
    const auto r = psi.exponent_at(j, S.field().k());
    if (r && Rational(*r) + v * j >= 0) total += supp.block_count(j);
  }
  return total;
}

/// gamma(v; psi) with the "bounded" case reported as converged = false and value 0.
inline Estimate gamma_of(const Rational& v, const ApproxFunction& psi, const SetFamily& S, int N_max) {
  if (N_max < 4) throw DomainError("gamma needs N_max >= 4");
  const SetFamily& supp = effective_support(psi, S);
  const std::uint32_t k = S.field().k();
  std::vector<std::pair<int, std::pair<double, double>>> pts;
  BigInt acc = 0;
  bool tail_growth = false;
  for (int N = 0; N <= N_max; ++N) {
    const auto r = psi.exponent_at(N, k);
    if (!(r && Rational(*r) + v * N >= 0)) continue;
    const BigInt c = supp.block_count(N);
    if (c == 0) continue;
    acc += c;
    if (N >= N_max / 2) tail_growth = true;
    if (N >= 1) pts.push_back({N, {static_cast<double>(N), log_k(acc, k)}});
  }
  Estimate e;
  if (!tail_growth || pts.size() < 2) {
    e.value = 0;
    e.converged = false;
    e.note = "C(N, v; psi) bounded on the sampled range";
    return e;
  }
  e.value = detail::slope(detail::tail_points(pts, N_max, e.window_lo, e.window_hi));
  const ApproxFunction& base = psi.inner() ? *psi.inner() : psi;
  if (base.kind() == PsiKind::POWER && supp.oracle_v() && v >= base.v()) e.exact = supp.oracle_v();
  return e;
}

/// delta(v; psi) = (n + gamma(v; psi)) / (v + 1), or 0 when C stays bounded.
inline Estimate delta_of(const Rational& v, const ApproxFunction& psi, std::size_t n, const SetFamily& S, int N_max) {
  Estimate g = gamma_of(v, psi, S, N_max);
  Estimate d = g;
  if (!g.converged) {
    d.value = 0;
    d.exact = Rational(0);
    return d;
  }
  d.value = (static_cast<double>(n) + g.value) / (static_cast<double>(v) + 1);
  if (g.exact) d.exact = (Rational(static_cast<long long>(n)) + *g.exact) / (v + 1);
  return d;
}

/// lo, lo + step, ..., up to hi.
inline std::vector<Rational> arithmetic_grid(const Rational& lo, const Rational& hi, const Rational& step) {
  if (step <= 0) throw DomainError("grid step must be positive");
  std::vector<Rational> out;
  for (Rational x = lo; x <= hi; x += step) out.push_back(x);
  return out;
}

struct DeltaSup {
  Estimate value;
  Rational argmax;
};

/// delta(psi) = sup over the grid of delta(v; psi).
inline DeltaSup delta_sup(const ApproxFunction& psi, std::size_t n, const SetFamily& S, const std::vector<Rational>& grid,
                          int N_max) {
  if (grid.empty()) throw DomainError("empty v-grid");
  DeltaSup best{delta_of(grid.front(), psi, n, S, N_max), grid.front()};
  for (const auto& v : grid) {
    auto d = delta_of(v, psi, n, S, N_max);
    if (d.value > best.value.value) best = {d, v};
  }
  return best;
}

/// N <= N_max with #S_N >= k^(N (vS - delta)), compared exactly.
inline std::vector<int> large_blocks_witnesses(const SetFamily& S, const Rational& vS, const Rational& delta, int N_max) {
  if (delta <= 0) throw DomainError("delta must be positive");
  std::vector<int> out;
  const Rational e = vS - delta;
  const BigInt num = boost::multiprecision::numerator(e), den = boost::multiprecision::denominator(e);
  for (int N = 0; N <= N_max; ++N) {
    const BigInt c = S.block_count(N);
    if (c == 0) continue;
    // c >= k^(N num/den)  <=>  c^den >= k^(N num)
    if (num * N <= 0 || boost::multiprecision::pow(c, static_cast<unsigned>(den)) >=
                            big_pow(S.field().k(), static_cast<std::uint64_t>(num * N)))
      out.push_back(N);
  }
  return out;
}

struct SplitPart {
  Rational v;                // 0 marks S'
  BigInt members;            // q with |q| <= k^N_max in this part
  std::vector<double> log_terms;  // log_k of the block sums of |q|^n (psi/|q|)^eta, per N (nan when empty)
  double exponent_bound = 0;      // exponent of the majorant series
  bool majorant_converges = false;
  bool terms_decrease = false;    // block sums decrease beyond N_max/2
};

struct SplitReport {
  Rational mu, theta, eta;
  std::vector<SplitPart> parts;  // parts[0] is S'
  bool covers = true;            // every q up to N_max lands in some part
  int first_uncovered = -1;
};

/// The decomposition F[X]^m = S' u U_{v in V} S(v, theta) with
/// mu = (m + n)/eta, S' = {psi < |q|^-mu},
/// S(v, theta) = {|q|^-v <= psi <= |q|^(-v + theta)} and V = {theta, 2 theta, ...}
/// covering [0, mu].
inline SplitReport split_S_prime_and_Svtheta(const ApproxFunction& psi, const SetFamily& S, std::size_t n,
                                             const Rational& eta, const Rational& theta, int N_max) {
  if (theta <= 0) throw DomainError("theta must be positive");
  if (eta <= 0) throw DomainError("eta must be positive");
  const SetFamily& supp = effective_support(psi, S);
  const std::uint32_t k = S.field().k();
  const std::size_t m = S.m();
  SplitReport rep;
  rep.eta = eta;
  rep.theta = theta;
  rep.mu = Rational(static_cast<long long>(m + n)) / eta;
  const auto steps = static_cast<long long>(ceil_rational(rep.mu / theta));
  rep.parts.push_back({Rational(0), 0, {}, 0, false, false});
  for (long long j = 1; j <= std::max(1LL, steps); ++j) rep.parts.push_back({theta * j, 0, {}, 0, false, false});
  const double eta_d = static_cast<double>(eta);
  for (auto& p : rep.parts) p.log_terms.assign(static_cast<std::size_t>(N_max + 1), std::nan(""));
  for (int N = 0; N <= N_max; ++N) {
    const BigInt all = big_pow(k, static_cast<std::uint64_t>(m) * (N + 1)) - big_pow(k, static_cast<std::uint64_t>(m) * N);
    const BigInt in_support = supp.block_count(N);
    auto r = psi.exponent_at(N, k);
    if (r) r = std::min<std::int64_t>(*r, 0);
    const double term_exp = static_cast<double>(n) * N + (r ? eta_d * static_cast<double>(*r - N) : 0);
    auto add = [&](SplitPart& part, const BigInt& count, bool psi_zero) {
      if (count == 0) return;
      part.members += count;
      if (psi_zero) return;
      double& slot = part.log_terms[static_cast<std::size_t>(N)];
      const double t = log_k(count, k) + term_exp;
      slot = std::isnan(slot) ? t : std::max(slot, t) + std::log1p(std::pow(k, -std::abs(slot - t))) / std::log(k);
    };
    // Outside the support psi = 0, which is below every |q|^-mu.
    add(rep.parts[0], r ? all - in_support : all, true);
    if (!r || in_support == 0) continue;
    bool placed = false;
    if (Rational(*r) < -rep.mu * N) {
      add(rep.parts[0], in_support, false);
      placed = true;
    }
    for (std::size_t i = 1; i < rep.parts.size(); ++i) {
      const Rational& v = rep.parts[i].v;
      if (Rational(*r) >= -v * N && Rational(*r) <= (theta - v) * N) {
        add(rep.parts[i], in_support, false);
        placed = true;
      }
    }
    if (!placed && rep.covers) {
      rep.covers = false;
      rep.first_uncovered = N;
    }
  }
  const double mn = static_cast<double>(m + n);
  rep.parts[0].exponent_bound = mn - (static_cast<double>(rep.mu) + 1) * eta_d;
  rep.parts[0].majorant_converges = rep.parts[0].exponent_bound < 0;
  for (std::size_t i = 1; i < rep.parts.size(); ++i) {
    auto& p = rep.parts[i];
    const Estimate g = gamma_of(p.v, psi, S, std::max(N_max, 4));
    p.exponent_bound = static_cast<double>(n) - (static_cast<double>(p.v) + 1 - static_cast<double>(theta)) * eta_d + g.value;
    // A part on which C(N, v; psi) stays bounded is finite, so its sum converges.
    p.majorant_converges = !g.converged || p.exponent_bound < 0;
  }
  for (auto& p : rep.parts) {
    double prev = std::nan("");
    bool ok = true;
    int seen = 0;
    for (int N = N_max / 2; N <= N_max; ++N) {
      const double t = p.log_terms[static_cast<std::size_t>(N)];
      if (std::isnan(t)) continue;
      if (!std::isnan(prev) && t >= prev) ok = false;
      prev = t;
      ++seen;
    }
    p.terms_decrease = ok && seen >= 2;
  }
  return rep;
}

}  // namespace ffdioph
