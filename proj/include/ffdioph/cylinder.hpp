#pragma once

// Haar measures of resonant neighbourhoods, computed exactly at finite
// coefficient depth.
//
// A point of U is an m x n matrix whose entries are sum_{t>=1} a_{ij,t} X^-t.
// For a column (a_1, ..., a_m) and q = (q_1, ..., q_m), the coefficient of
// X^-u in sum_i q_i a_i is the linear form sum_i sum_s q_{i,s} a_{i,s+u}.
// ||qA|| < k^-r says the forms u = 1..r vanish in every column; the
// polynomial part p of qA is given by the forms u <= 0. Columns are
// independent and identically constrained, so every measure below is a
// one-column measure raised to the n-th power.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffdioph/errors.hpp"
#include "ffdioph/kadic.hpp"
#include "ffdioph/laurent.hpp"
#include "ffdioph/linear_system.hpp"
#include "ffdioph/polynomial.hpp"

namespace ffdioph {

enum class ResonantKind { B, B_PRIME, B_DOUBLE_PRIME };

inline std::string kind_name(ResonantKind kind) {
  switch (kind) {
    case ResonantKind::B: return "B";
    case ResonantKind::B_PRIME: return "B_PRIME";
    case ResonantKind::B_DOUBLE_PRIME: return "B_DOUBLE_PRIME";
  }
  return "?";
}

/// B(q, k^-r), B'(q, k^-r) or B''(q, k^-r).
struct ResonantSet {
  ResonantKind kind = ResonantKind::B;
  PolyVector q;
  std::int64_t r = 0;

  friend bool operator==(const ResonantSet&, const ResonantSet&) = default;
};

inline ResonantSet make_B(PolyVector q, std::int64_t r) { return {ResonantKind::B, std::move(q), r}; }
inline ResonantSet make_B_prime(const Polynomial& q, std::int64_t r) { return {ResonantKind::B_PRIME, PolyVector({q}), r}; }
inline ResonantSet make_B_dprime(PolyVector q, std::int64_t r) { return {ResonantKind::B_DOUBLE_PRIME, std::move(q), r}; }

/// Polynomial that the coordinates of p must be coprime to; empty when the
/// condition is vacuous (plain B, or a constant modulus).
inline std::optional<Polynomial> coprimality_modulus(const ResonantSet& s) {
  if (s.kind == ResonantKind::B) return std::nullopt;
  const Polynomial g = s.kind == ResonantKind::B_PRIME ? s.q[0].monic() : s.q.content();
  if (g.degree() <= 0) return std::nullopt;
  return g;
}

inline void validate(const ResonantSet& s) {
  if (s.q.m() == 0 || s.q.is_zero()) throw DomainError("resonant sets need a nonzero q");
  if (s.kind == ResonantKind::B_PRIME && s.q.m() != 1) throw DomainError("B' is defined for m = 1 only");
  if (s.r < 0)
    throw DomainError("epsilon not small enough: for k^-r > 1 the components around different p overlap");
}

/// Coefficient of X^-u in q . (one column of A) as a linear form in the
/// digits a_{i,t}, variable index i*T + (t-1).
inline FkVector coefficient_form(const PolyVector& q, std::int64_t u, std::int64_t T) {
  const FieldSpec& f = q.field();
  FkVector row(q.m() * static_cast<std::size_t>(T), 0);
  for (std::size_t i = 0; i < q.m(); ++i) {
    for (int s = 0; s <= q[i].degree(); ++s) {
      const Rep c = q[i].coeff(static_cast<std::size_t>(s));
      const std::int64_t t = s + u;
      if (c == 0 || t < 1) continue;
      if (t > T)
        throw PrecisionError("depth T = " + std::to_string(T) + " cannot resolve coefficient X^-" + std::to_string(u) +
                             " of qA; need T >= r + max deg q");
      auto& slot = row[i * static_cast<std::size_t>(T) + static_cast<std::size_t>(t - 1)];
      slot = f.add(slot, c);
    }
  }
  return row;
}

/// The linear system describing one column's membership in an intersection
/// of resonant sets.
class ColumnSystem {
 public:
  struct SlotGroup {
    std::size_t first_row = 0;
    std::size_t count = 0;                 // polynomial-part coefficients X^0 .. X^(count-1)
    std::vector<Polynomial> admissible;    // values of that polynomial part allowed by coprimality
  };

  ColumnSystem(const std::vector<ResonantSet>& sets, std::int64_t T) : T_(T) {
    if (sets.empty()) throw DomainError("empty intersection");
    for (const auto& s : sets) {
      validate(s);
      if (s.q.m() != sets.front().q.m()) throw DomainError("resonant sets with different m");
      if (!(s.q.field() == sets.front().q.field())) throw FieldMismatchError();
    }
    field_ = sets.front().q.field();
    m_ = sets.front().q.m();
    if (T < 1) throw PrecisionError("depth T must be positive");
    for (const auto& s : sets) {
      for (std::int64_t u = 1; u <= s.r; ++u) rows_.push_back(coefficient_form(s.q, u, T));
      const auto g = coprimality_modulus(s);
      if (!g) continue;
      SlotGroup group;
      group.first_row = rows_.size();
      group.count = static_cast<std::size_t>(s.q.max_degree());
      for (std::size_t e = 0; e < group.count; ++e) rows_.push_back(coefficient_form(s.q, -static_cast<std::int64_t>(e), T));
      for (int d = 0; d < static_cast<int>(group.count); ++d)
        for_each_poly(field_, d, false, [&](const Polynomial& p) {
          if (coprime(*g, p)) group.admissible.push_back(p);
        });
      groups_.push_back(std::move(group));
    }
  }

  std::size_t nvars() const { return m_ * static_cast<std::size_t>(T_); }
  const std::vector<FkVector>& rows() const { return rows_; }
  const std::vector<SlotGroup>& groups() const { return groups_; }

  /// Number of admissible slot assignments for which the system is
  /// consistent, and the rank; the column measure is count * k^-rank.
  std::pair<BigInt, std::size_t> count_and_rank() const {
    const RowReduction rr(field_, rows_, nvars());
    const auto null = rr.left_null();
    // Each slot value contributes a syndrome (null-row . rhs); a full
    // assignment is consistent iff the syndromes sum to zero.
    std::map<FkVector, BigInt> acc;
    acc[FkVector(null.size(), 0)] = 1;
    for (const auto& group : groups_) {
      std::map<FkVector, BigInt> contrib;
      for (const auto& p : group.admissible) {
        FkVector syn(null.size(), 0);
        for (std::size_t l = 0; l < null.size(); ++l)
          for (std::size_t e = 0; e < group.count; ++e) {
            const Rep y = null[l][group.first_row + e];
            if (y) syn[l] = field_.add(syn[l], field_.mul(y, p.coeff(e)));
          }
        ++contrib[syn];
      }
      std::map<FkVector, BigInt> next;
      for (const auto& [s1, c1] : acc)
        for (const auto& [s2, c2] : contrib) {
          FkVector s(s1.size());
          for (std::size_t l = 0; l < s.size(); ++l) s[l] = field_.add(s1[l], s2[l]);
          next[s] += c1 * c2;
        }
      acc = std::move(next);
    }
    const auto it = acc.find(FkVector(null.size(), 0));
    return {it == acc.end() ? BigInt(0) : it->second, rr.rank()};
  }

  KadicMeasure measure() const {
    auto [count, rank] = count_and_rank();
    return KadicMeasure(field_.k(), count, static_cast<std::int64_t>(rank));
  }

 private:
  FieldSpec field_;
  std::size_t m_ = 0;
  std::int64_t T_ = 0;
  std::vector<FkVector> rows_;
  std::vector<SlotGroup> groups_;
};

/// Measure of the intersection of the given sets, one column of A.
inline KadicMeasure column_measure(const std::vector<ResonantSet>& sets, std::int64_t T) {
  return ColumnSystem(sets, T).measure();
}

inline KadicMeasure measure_of(const std::vector<ResonantSet>& sets, std::size_t n, std::int64_t T) {
  if (n < 1) throw DomainError("n must be at least 1");
  return column_measure(sets, T).pow(n);
}

inline KadicMeasure measure_B(const PolyVector& q, std::int64_t r, std::size_t n, std::int64_t T) {
  return measure_of({make_B(q, r)}, n, T);
}

inline KadicMeasure measure_B_prime(const Polynomial& q, std::int64_t r, std::size_t n, std::int64_t T) {
  return measure_of({make_B_prime(q, r)}, n, T);
}

inline KadicMeasure measure_B_dprime(const PolyVector& q, std::int64_t r, std::size_t n, std::int64_t T) {
  return measure_of({make_B_dprime(q, r)}, n, T);
}

inline KadicMeasure measure_intersection(const ResonantSet& a, const ResonantSet& b, std::size_t n, std::int64_t T) {
  return measure_of({a, b}, n, T);
}

/// Depth at which every set in the list is a finite union of cylinders.
inline std::int64_t sufficient_depth(const std::vector<ResonantSet>& sets) {
  std::int64_t T = 1;
  for (const auto& s : sets) T = std::max<std::int64_t>(T, s.r + std::max(0, s.q.max_degree()));
  return T;
}

/// k^-rn.
inline KadicMeasure closed_form_B(std::uint32_t k, std::int64_t r, std::size_t n) {
  return KadicMeasure::inv_power(k, r * static_cast<std::int64_t>(n));
}

/// (k^-r |(F[X]/g)^*| / |g|)^n with g the coprimality modulus (1 if vacuous).
inline KadicMeasure closed_form_coprime(const ResonantSet& s, std::size_t n) {
  validate(s);
  const auto g = coprimality_modulus(s);
  const BigInt units = g ? unit_count(*g) : BigInt(1);
  const std::int64_t deg = g ? g->degree() : 0;
  return KadicMeasure(s.q.field().k(), units, s.r + deg).pow(n);
}

/// Closed form eps^n Phi(q)^n / |q|^n for B'(q, eps).
inline KadicMeasure closed_form_B_prime(const Polynomial& q, std::int64_t r, std::size_t n) {
  return closed_form_coprime(make_B_prime(q, r), n);
}

inline KadicMeasure closed_form_B_dprime(const PolyVector& q, std::int64_t r, std::size_t n) {
  return closed_form_coprime(make_B_dprime(q, r), n);
}

/// Decomposition q = lambda * qhat, q' = lambda' * qhat of two linearly
/// dependent vectors along a common primitive direction.
struct DependentPair {
  PolyVector qhat;
  Polynomial lambda, lambda_prime;
};

inline DependentPair common_direction(const PolyVector& q, const PolyVector& qp) {
  if (q.is_zero() || qp.is_zero()) throw DomainError("vectors must be nonzero");
  if (q.m() != qp.m()) throw DomainError("dimension mismatch");
  if (linearly_independent(q, qp)) throw DomainError("vectors are not linearly dependent");
  const Polynomial g = q.content();
  std::vector<Polynomial> hat;
  for (const auto& c : q.entries) hat.push_back(c / g);
  std::size_t i0 = 0;
  while (hat[i0].is_zero()) ++i0;
  const Rep unit = hat[i0].lead();
  for (auto& c : hat) c = c.scaled(q.field().inv(unit));
  DependentPair out{PolyVector(hat), g.scaled(unit), Polynomial(q.field())};
  auto [lp, rem] = divmod(qp[i0], out.qhat[i0]);
  if (!rem.is_zero() || !(out.qhat.scaled(lp) == qp)) throw DomainError("vectors are not linearly dependent");
  out.lambda_prime = lp;
  return out;
}

struct CountNResult {
  BigInt count;           // N(q, q') over all n coordinates
  BigInt per_coordinate;  // the one-coordinate count; count = per_coordinate^n
  Rational bound;         // (|q'| eps + |q| eps')^n
  bool within_bound = false;
  Polynomial lambda, lambda_prime;  // after ordering |lambda| >= |lambda'|
  bool swapped = false;
};

/// Pairs (p, p') in F[X]^n x F[X]^n with |p| < |q|, |p'| < |q'| (only
/// <= when strict_range is off), (p_j, lambda) = (p'_j, lambda') = 1 and
/// |lambda' p_j - lambda p'_j| < eps |lambda'| for every j, where
/// |lambda| >= |lambda'| after swapping the roles of (q, eps) and (q', eps')
/// if necessary.
inline CountNResult count_N(PolyVector q, PolyVector qp, std::int64_t r, std::int64_t rp, std::size_t n,
                            bool strict_range = true) {
  if (r < 0 || rp < 0) throw DomainError("epsilon exponents must be non-negative");
  const FieldSpec f = q.field();
  const std::uint32_t k = f.k();
  CountNResult out;
  {
    // |q'| k^-r + |q| k^-r' over the common denominator k^(r + r').
    const BigInt num = big_pow(k, static_cast<std::uint64_t>(qp.max_degree() + rp)) +
                       big_pow(k, static_cast<std::uint64_t>(q.max_degree() + r));
    const BigInt den = big_pow(k, static_cast<std::uint64_t>(r + rp));
    out.bound = Rational(boost::multiprecision::pow(num, static_cast<unsigned>(n)),
                         boost::multiprecision::pow(den, static_cast<unsigned>(n)));
  }
  DependentPair dp = common_direction(q, qp);
  if (dp.lambda.degree() < dp.lambda_prime.degree()) {
    std::swap(q, qp);
    std::swap(r, rp);
    std::swap(dp.lambda, dp.lambda_prime);
    out.swapped = true;
  }
  const int D = q.max_degree() - (strict_range ? 1 : 0);
  const int Dp = qp.max_degree() - (strict_range ? 1 : 0);
  // |x| < eps |lambda'| = k^(deg lambda' - r).
  const std::int64_t limit = dp.lambda_prime.degree() - r;
  auto polys_upto = [&](int d, const Polynomial& lam) {
    std::vector<Polynomial> v;
    if (d < 0) return v;
    if (coprime(lam, Polynomial(f))) v.push_back(Polynomial(f));
    for (int e = 0; e <= d; ++e)
      for_each_poly(f, e, false, [&](const Polynomial& p) {
        if (coprime(lam, p)) v.push_back(p);
      });
    return v;
  };
  const auto ps = polys_upto(D, dp.lambda), pps = polys_upto(Dp, dp.lambda_prime);
  BigInt per = 0;
  for (const auto& p : ps)
    for (const auto& pp : pps) {
      const Polynomial diff = dp.lambda_prime * p - dp.lambda * pp;
      if (diff.is_zero() || diff.degree() < limit) ++per;
    }
  out.per_coordinate = per;
  out.count = boost::multiprecision::pow(per, static_cast<unsigned>(n));
  out.within_bound = Rational(out.count) <= out.bound;
  out.lambda = dp.lambda;
  out.lambda_prime = dp.lambda_prime;
  return out;
}

/// dist(A, H(q, p)) for A in U, where H(q, p) = {A' in U : qA' = p}. Equals
/// |qA - p|_inf / |q|_inf: moving one row of A by (qA - p)/q_i for a
/// coordinate with |q_i| = |q|_inf lands in H, and |q(A - A')| <= |q||A - A'|
/// for every A' in H.
inline AbsValue dist_to_H(const LaurentMatrix& A, const PolyVector& q, const std::vector<Polynomial>& p) {
  if (q.is_zero()) throw DomainError("q must be nonzero");
  if (p.size() != A.cols()) throw DomainError("p must have one entry per column");
  if (!A.in_unit_cube()) throw DomainError("A must lie in U");
  for (const auto& pj : p)
    if (pj.abs() >= q.norm_inf()) throw DomainError("H(q, p) is empty: needs |p|_inf < |q|_inf");
  auto qA = row_times_matrix(q, A);
  for (std::size_t j = 0; j < qA.size(); ++j) qA[j] = qA[j] - embed_poly(p[j]);
  const AbsValue w = max_abs(qA);
  if (w.is_zero()) return w;
  return AbsValue::power(w.exponent() - q.max_degree());
}

struct InclusionReport {
  bool holds = true;
  bool trivial = false;                    // the larger set is all of U
  std::int64_t r = 0;                      // rho = k^-r
  std::int64_t rho_tilde_exp = 0;          // rho~ = k^rho_tilde_exp
  std::int64_t required = 0;               // B~ means ||qA|| < k^-required
  std::optional<FkVector> counterexample;  // first-column digits of a depth-T cylinder in B but not near H
};

namespace detail {

// Rows over the first m*T digits that a depth-T cylinder must annihilate to
// meet {||qA|| < k^-R} (one column): the left null space of the free part
// applied to the fixed part.
inline std::vector<FkVector> meets_condition(const PolyVector& q, std::int64_t R, std::int64_t T, std::int64_t T_ext) {
  const FieldSpec& f = q.field();
  const std::size_t m = q.m();
  std::vector<FkVector> fixed, free;
  for (std::int64_t u = 1; u <= R; ++u) {
    const FkVector row = coefficient_form(q, u, T_ext);
    FkVector a(m * static_cast<std::size_t>(T), 0), b(m * static_cast<std::size_t>(T_ext - T), 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::int64_t t = 1; t <= T_ext; ++t) {
        const Rep c = row[i * static_cast<std::size_t>(T_ext) + static_cast<std::size_t>(t - 1)];
        if (t <= T) a[i * static_cast<std::size_t>(T) + static_cast<std::size_t>(t - 1)] = c;
        else b[i * static_cast<std::size_t>(T_ext - T) + static_cast<std::size_t>(t - T - 1)] = c;
      }
    fixed.push_back(std::move(a));
    free.push_back(std::move(b));
  }
  if (fixed.empty()) return {};
  const RowReduction rr(f, free, m * static_cast<std::size_t>(T_ext - T));
  std::vector<FkVector> out;
  for (const auto& y : rr.left_null()) {
    FkVector row(m * static_cast<std::size_t>(T), 0);
    for (std::size_t l = 0; l < y.size(); ++l)
      if (y[l])
        for (std::size_t v = 0; v < row.size(); ++v) row[v] = f.add(row[v], f.mul(y[l], fixed[l][v]));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

/// Whether every depth-T cylinder meeting B(q; rho) also meets the
/// rho~-neighbourhood of the union of the H(q, p), rho = k^rho_exp and
/// rho~ = rho k^(-N_t + 1 - extra_shrink). The neighbourhood is
/// {A : ||qA|| < rho~ |q|}, since dist(A, H(q, p)) = |qA - p| / |q| and the
/// nearest p always has |p| < |q|.
inline InclusionReport check_inclusion_eq20(const PolyVector& q, std::int64_t N_t, std::int64_t rho_exp, std::int64_t T,
                                            std::int64_t extra_shrink = 0) {
  if (q.is_zero() || q.max_degree() != N_t) throw DomainError("q must lie in S_N with N = N_t");
  if (T < 1) throw PrecisionError("depth T must be positive");
  InclusionReport rep;
  rep.r = std::max<std::int64_t>(0, -rho_exp);
  rep.rho_tilde_exp = rho_exp - N_t + 1 - extra_shrink;
  rep.required = -(rep.rho_tilde_exp + N_t);
  if (rep.required <= 0) {
    rep.trivial = true;
    return rep;
  }
  const std::int64_t T_ext = T + N_t + std::max(rep.r, rep.required) + 1;
  const auto in_B = detail::meets_condition(q, rep.r, T, T_ext);
  const auto near_H = detail::meets_condition(q, rep.required, T, T_ext);
  const std::size_t nv = q.m() * static_cast<std::size_t>(T);
  const RowReduction rb(q.field(), in_B, nv);
  for (const auto& row : near_H) {
    if (rb.spans(row)) continue;
    rep.holds = false;
    for (const auto& x : rb.kernel())
      if (rb.dot(row, x) != 0) {
        rep.counterexample = x;
        break;
      }
    break;
  }
  return rep;
}

struct ScaleReport {
  KadicMeasure ball;      // mu(B(c, k^-R)), recounted
  KadicMeasure scaled;    // mu(X^r0 B(c, k^-R)), recounted after translating back into U
  KadicMeasure expected;  // k^(mn r0) mu(B(c, k^-R))
  bool holds = false;
};

/// Recounts mu(X^r0 B) for the ball B of matrices in U agreeing with
/// `center` in their first R digits. The scaled ball is split into its
/// translates P + (subset of U) by the polynomial part P, and each piece is
/// counted as depth-R cylinders of U.
inline ScaleReport scale_measure_check(const LaurentMatrix& center, std::int64_t R, std::int64_t r0,
                                       std::uint64_t max_cylinders = 1u << 22) {
  const FieldSpec& f = center.field();
  const std::size_t mn = center.rows() * center.cols();
  const std::uint32_t k = f.k();
  if (R < 1) throw DomainError("ball depth must be positive");
  if (R - r0 > R + 64) throw DomainError("shift too large");
  // The scaled ball fixes the coefficients of X^r0 A with index 1 - r0 .. R - r0.
  const LaurentMatrix scaled = center.shifted(r0);
  const std::int64_t W = R - r0;
  // Cylinders of depth D in U, enough to resolve the fixed fractional digits.
  const std::int64_t D = std::max<std::int64_t>(W, 1);
  std::uint64_t total = 1;
  for (std::size_t c = 0; c < mn * static_cast<std::size_t>(D); ++c) {
    total *= k;
    if (total > max_cylinders) throw ScaleError("scale check would enumerate more than the cylinder guard");
  }
  auto count_matching = [&](const LaurentMatrix& target, std::int64_t fixed_digits) {
    std::uint64_t count = 0;
    std::vector<Rep> digits(mn * static_cast<std::size_t>(D));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t rest = idx;
      for (auto& d : digits) {
        d = static_cast<Rep>(rest % k);
        rest /= k;
      }
      const LaurentMatrix cyl = LaurentMatrix::from_digits(f, center.rows(), center.cols(), D, digits);
      bool inside = true;
      for (std::size_t c = 0; c < mn && inside; ++c)
        for (std::int64_t t = 1; t <= fixed_digits && inside; ++t)
          inside = cyl.entries()[c].coeff(t) == target.entries()[c].coeff(t);
      if (inside) ++count;
    }
    return count;
  };
  ScaleReport rep;
  // The unscaled ball, recounted at depth max(R, D).
  {
    const std::int64_t Db = R;
    std::uint64_t tb = 1;
    for (std::size_t c = 0; c < mn * static_cast<std::size_t>(Db); ++c) {
      tb *= k;
      if (tb > max_cylinders) throw ScaleError("scale check would enumerate more than the cylinder guard");
    }
    std::uint64_t count = 0;
    std::vector<Rep> digits(mn * static_cast<std::size_t>(Db));
    for (std::uint64_t idx = 0; idx < tb; ++idx) {
      std::uint64_t rest = idx;
      for (auto& d : digits) {
        d = static_cast<Rep>(rest % k);
        rest /= k;
      }
      const LaurentMatrix cyl = LaurentMatrix::from_digits(f, center.rows(), center.cols(), Db, digits);
      bool inside = true;
      for (std::size_t c = 0; c < mn && inside; ++c)
        for (std::int64_t t = 1; t <= R && inside; ++t) inside = cyl.entries()[c].coeff(t) == center.entries()[c].coeff(t);
      if (inside) ++count;
    }
    rep.ball = KadicMeasure(k, count, static_cast<std::int64_t>(mn) * Db);
  }
  // Number of polynomial translates: the digits of index W+1 .. 0 are free when W < 0.
  const BigInt translates = W >= 0 ? BigInt(1) : big_pow(k, static_cast<std::uint64_t>(-W) * mn);
  // Translate back into U: subtract the polynomial part, keep the fractional digits.
  std::vector<LaurentSeries> frac;
  for (const auto& e : scaled.entries()) frac.push_back(e.frac_part());
  const LaurentMatrix target(center.rows(), center.cols(), frac);
  const std::uint64_t inside = count_matching(target, std::max<std::int64_t>(W, 0));
  rep.scaled = KadicMeasure(k, translates * inside, static_cast<std::int64_t>(mn) * D);
  rep.expected = rep.ball * KadicMeasure(k, big_pow(k, 0), -static_cast<std::int64_t>(mn) * r0);
  rep.holds = rep.scaled == rep.expected;
  return rep;
}

}  // namespace ffdioph
