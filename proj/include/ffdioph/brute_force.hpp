#pragma once

// Exhaustive oracles. They share no code path with the closed forms and
// linear-algebra routines they are used to check, and only work at toy sizes.

#include <cstdint>
#include <functional>
#include <vector>

#include "ffdioph/kadic.hpp"
#include "ffdioph/cylinder.hpp"
#include "ffdioph/laurent.hpp"
#include "ffdioph/polynomial.hpp"

namespace ffdioph::brute {

/// Nonzero q' with deg q' < deg q and gcd(q, q') = 1, by direct gcd.
inline BigInt totient(const Polynomial& q) {
  BigInt count = 0;
  for (int d = 0; d < q.degree(); ++d)
    for_each_poly(q.field(), d, false, [&](const Polynomial& r) {
      if (poly_gcd(q, r).degree() == 0) ++count;
    });
  return count;
}

inline BigInt totient_monic(const Polynomial& q) {
  BigInt count = 0;
  for (int d = 0; d < q.degree(); ++d)
    for_each_poly(q.field(), d, true, [&](const Polynomial& r) {
      if (poly_gcd(q, r).degree() == 0) ++count;
    });
  return count;
}

/// Calls fn on every digit string of the given length, in counter order.
inline void for_each_digits(std::uint32_t k, std::size_t len, const std::function<void(const std::vector<Rep>&)>& fn) {
  std::vector<Rep> d(len, 0);
  while (true) {
    fn(d);
    std::size_t i = 0;
    while (i < len && d[i] + 1 == k) d[i++] = 0;
    if (i == len) return;
    ++d[i];
  }
}

/// Membership of A in a resonant set, read off qA directly.
inline bool contains(const ResonantSet& s, const LaurentMatrix& A) {
  Polynomial g = Polynomial::one(s.q.field());
  if (s.kind == ResonantKind::B_PRIME) g = s.q[0];
  if (s.kind == ResonantKind::B_DOUBLE_PRIME) {
    g = Polynomial(s.q.field());
    for (const auto& c : s.q.entries) g = c.is_zero() ? g : (g.is_zero() ? c : poly_gcd(g, c));
  }
  for (const auto& w : row_times_matrix(s.q, A)) {
    for (std::int64_t u = 1; u <= s.r; ++u)
      if (w.coeff(u) != 0) return false;
    if (s.kind != ResonantKind::B && poly_gcd(g, w.poly_part()).degree() != 0) return false;
  }
  return true;
}

/// Measure of the intersection by enumerating all k^(mnT) depth-T cylinders.
inline KadicMeasure measure(const std::vector<ResonantSet>& sets, std::size_t n, std::int64_t T) {
  const FieldSpec& f = sets.front().q.field();
  const std::size_t m = sets.front().q.m();
  BigInt count = 0;
  for_each_digits(f.k(), m * n * static_cast<std::size_t>(T), [&](const std::vector<Rep>& d) {
    const auto A = LaurentMatrix::from_digits(f, m, n, T, d);
    for (const auto& s : sets)
      if (!contains(s, A)) return;
    ++count;
  });
  return KadicMeasure(f.k(), count, static_cast<std::int64_t>(m * n) * T);
}

/// Whether the depth-T cylinder with first-column digits x (layout i*T + t-1)
/// meets {||qA|| < k^-R}: tries every continuation down to depth T_ext.
inline bool cylinder_meets(const PolyVector& q, const std::vector<Rep>& x, std::int64_t T, std::int64_t R,
                           std::int64_t T_ext) {
  const FieldSpec& f = q.field();
  const std::size_t m = q.m();
  bool found = false;
  for_each_digits(f.k(), m * static_cast<std::size_t>(T_ext - T), [&](const std::vector<Rep>& y) {
    if (found) return;
    std::vector<Rep> d(m * static_cast<std::size_t>(T_ext));
    for (std::size_t i = 0; i < m; ++i)
      for (std::int64_t t = 1; t <= T_ext; ++t)
        d[i * static_cast<std::size_t>(T_ext) + static_cast<std::size_t>(t - 1)] =
            t <= T ? x[i * static_cast<std::size_t>(T) + static_cast<std::size_t>(t - 1)]
                   : y[i * static_cast<std::size_t>(T_ext - T) + static_cast<std::size_t>(t - T - 1)];
    const auto A = LaurentMatrix::from_digits(f, m, 1, T_ext, d);
    const auto w = row_times_matrix(q, A).front();
    for (std::int64_t u = 1; u <= R; ++u)
      if (w.coeff(u) != 0) return;
    found = true;
  });
  return found;
}

/// Exhaustive version of the inclusion test: every depth-T cylinder meeting
/// {||qA|| < k^-r} also meets {||qA|| < k^-R}.
inline bool inclusion(const PolyVector& q, std::int64_t r, std::int64_t R, std::int64_t T) {
  const std::int64_t T_ext = T + q.max_degree() + std::max(r, R) + 1;
  bool holds = true;
  for_each_digits(q.field().k(), q.m() * static_cast<std::size_t>(T), [&](const std::vector<Rep>& x) {
    if (holds && cylinder_meets(q, x, T, r, T_ext) && !cylinder_meets(q, x, T, R, T_ext)) holds = false;
  });
  return holds;
}

/// min |A - A'| over A' in H(q, p) at depth T, for m = n = 1 where H is a
/// finite set of exact points when q is nonconstant: searches all depth-T
/// points A' and keeps those with qA' = p up to the window.
inline AbsValue dist_to_H_1d(const LaurentSeries& a, const Polynomial& q, const Polynomial& p, std::int64_t T) {
  const FieldSpec& f = q.field();
  AbsValue best = AbsValue::power(1);
  bool any = false;
  for_each_digits(f.k(), static_cast<std::size_t>(T), [&](const std::vector<Rep>& d) {
    const auto b = LaurentSeries::truncated(f, 1, d, T);
    const auto w = embed_poly(q) * b - embed_poly(p);
    // qA' = p on the resolved window; the tail is left free.
    for (std::int64_t i = w.start(); i <= w.precision(); ++i)
      if (w.coeff(i) != 0) return;
    const auto diff = (a - b).truncate(T);
    const AbsValue dv = diff.window_zero() ? AbsValue::zero() : diff.abs();
    if (!any || dv < best) best = dv;
    any = true;
  });
  if (!any) throw DomainError("no point of H found at this depth");
  return best;
}

}  // namespace ffdioph::brute
