#pragma once

// Dimension formulas of the two main theorems, the s-length of the natural
// cover of W_S(m, n; psi), and cross-checks between the two routes.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ffdioph/errors.hpp"
#include "ffdioph/exponents.hpp"
#include "ffdioph/kadic.hpp"

namespace ffdioph {

enum class Regime { FULL_MEASURE, DIMENSION, CRITICAL_UNDECIDED };

inline std::string regime_name(Regime r) {
  switch (r) {
    case Regime::FULL_MEASURE: return "FULL_MEASURE";
    case Regime::DIMENSION: return "DIMENSION";
    case Regime::CRITICAL_UNDECIDED: return "CRITICAL_UNDECIDED";
  }
  return "?";
}

struct DimensionVerdict {
  Regime regime = Regime::DIMENSION;
  Rational dim;  // Hausdorff dimension; mn under FULL_MEASURE
  std::size_t m = 1, n = 1;
  std::optional<Rational> vS, lambda, eta;
};

inline void check_mn(std::size_t m, std::size_t n) {
  if (m < 1 || n < 1) throw DomainError("m and n must be at least 1");
}

/// From v(S) and lambda: full measure when n lambda < v(S), otherwise
/// dim = n(m-1) + (n + v(S))/(1 + lambda); at n lambda = v(S) the measure
/// question is open and the verdict is CRITICAL_UNDECIDED.
inline DimensionVerdict theorem1_verdict(std::size_t m, std::size_t n, const Rational& vS, const Rational& lambda) {
  check_mn(m, n);
  const Rational mm(static_cast<long long>(m)), nn(static_cast<long long>(n));
  if (vS < 0 || vS > mm) throw DomainError("v(S) must lie in [0, m]");
  if (lambda < 0) throw DomainError("lambda must be non-negative");
  DimensionVerdict d;
  d.m = m;
  d.n = n;
  d.vS = vS;
  d.lambda = lambda;
  if (nn * lambda < vS) {
    d.regime = Regime::FULL_MEASURE;
    d.dim = mm * nn;
    return d;
  }
  d.regime = nn * lambda == vS ? Regime::CRITICAL_UNDECIDED : Regime::DIMENSION;
  d.dim = nn * (mm - 1) + (nn + vS) / (1 + lambda);
  return d;
}

/// From eta: dim = n(m-1) + min(eta, n).
inline DimensionVerdict theorem2_verdict(std::size_t m, std::size_t n, const Rational& eta) {
  check_mn(m, n);
  if (eta < 0) throw DomainError("eta must be non-negative");
  const Rational mm(static_cast<long long>(m)), nn(static_cast<long long>(n));
  DimensionVerdict d;
  d.m = m;
  d.n = n;
  d.eta = eta;
  d.dim = nn * (mm - 1) + std::min(eta, nn);
  return d;
}

struct ConsistencyReport {
  DimensionVerdict thm1, thm2;
  Estimate vS, eta;
  bool exact = false;  // both routes used closed forms
  bool agree = false;
  double gap = 0;
};

/// Dimension of W_S(m, n; |q|^-v) from v(S) with lambda = v, and from eta
/// of psi-hat = |q|^-v restricted to S.
inline ConsistencyReport consistency_check(const SetFamily& S, const Rational& v, std::size_t n, int N_max, double tol = 0.1) {
  ConsistencyReport rep;
  const std::size_t m = S.m();
  rep.vS = v_of_S(S, N_max);
  const auto psi = ApproxFunction::restricted(ApproxFunction::power(v), S);
  rep.eta = eta_of_psi(psi, SetFamily::all_nonzero(S.field(), m), n, N_max);
  auto to_rat = [](double x) { return Rational(static_cast<long long>(std::llround(x * 1e6)), 1000000); };
  const Rational vS = rep.vS.exact ? *rep.vS.exact : std::clamp(to_rat(rep.vS.value), Rational(0), Rational(static_cast<long long>(m)));
  const Rational eta = rep.eta.exact ? *rep.eta.exact : std::max(to_rat(rep.eta.value), Rational(0));
  rep.exact = rep.vS.exact.has_value() && rep.eta.exact.has_value();
  rep.thm1 = theorem1_verdict(m, n, vS, v);
  rep.thm2 = theorem2_verdict(m, n, eta);
  rep.gap = std::abs(static_cast<double>(rep.thm1.dim - rep.thm2.dim));
  rep.agree = rep.exact ? rep.thm1.dim == rep.thm2.dim : rep.gap <= tol;
  return rep;
}

struct CoverBlock {
  int N = 0;
  BigInt q_count;        // #S_N
  double log_term = 0;   // log_k of the block's contribution to the s-length majorant
};

struct CoverReport {
  Rational s, lambda, eps, eps_used, vS;
  Rational threshold;     // n(m-1) + (n + v(S))/(1 + lambda)
  bool eq4_holds = false; // s > threshold
  Rational exponent;      // per-block growth rate v(S) + n + (1+lambda-eps)(n(m-1) - s)
  bool converges = false; // exponent < 0
  int M = 0;
  std::vector<CoverBlock> blocks;
  std::vector<double> log_tail_sums;  // log_k sum_{N >= M'} for M' = M .. N_max
  bool tail_decreasing = false;
  bool terms_growing = false;
};

/// s-length of the cover of W_S(m, n; psi) by balls of radius
/// |q|^(-lambda+eps-1) around the neighbourhoods of H(q, p),
/// |q| >= k^M. Per q: about |q|^n choices of p, |q|^((1+lambda-eps) n(m-1))
/// balls for each, each contributing |q|^(-(1+lambda-eps)s). When s exceeds
/// the threshold but eps is too coarse to show it, eps is halved until the
/// exponent turns negative.
inline CoverReport s_length(const SetFamily& S, std::size_t n, const Rational& vS, const Rational& lambda, const Rational& eps,
                            const Rational& s, int M, int N_max) {
  const std::size_t m = S.m();
  check_mn(m, n);
  if (eps <= 0) throw DomainError("eps must be positive");
  const Rational mn(static_cast<long long>(m * n));
  if (s <= 0 || s > mn) throw DomainError("s must lie in (0, mn]");
  if (M < 0 || M > N_max) throw DomainError("need 0 <= M <= N_max");
  CoverReport rep;
  rep.s = s;
  rep.lambda = lambda;
  rep.eps = eps;
  rep.vS = vS;
  rep.M = M;
  const Rational nn(static_cast<long long>(n)), base_dim = nn * Rational(static_cast<long long>(m - 1));
  rep.threshold = base_dim + (nn + vS) / (1 + lambda);
  rep.eq4_holds = s > rep.threshold;
  auto exponent_for = [&](const Rational& e) { return vS + nn + (1 + lambda - e) * (base_dim - s); };
  rep.eps_used = eps;
  if (rep.eq4_holds)
    while (exponent_for(rep.eps_used) >= 0) rep.eps_used /= 2;
  rep.exponent = exponent_for(rep.eps_used);
  rep.converges = rep.exponent < 0;
  const double growth = static_cast<double>(nn + (1 + lambda - rep.eps_used) * (base_dim - s));
  const std::uint32_t k = S.field().k();
  for (int N = M; N <= N_max; ++N) {
    const BigInt c = S.block_count(N);
    if (c == 0) continue;
    rep.blocks.push_back({N, c, log_k(c, k) + growth * N});
  }
  // Tail sums, accumulated from the top in log space.
  rep.log_tail_sums.assign(static_cast<std::size_t>(N_max - M + 1), -INFINITY);
  double acc = -INFINITY;
  std::size_t bi = rep.blocks.size();
  for (int N = N_max; N >= M; --N) {
    while (bi > 0 && rep.blocks[bi - 1].N >= N) {
      const double t = rep.blocks[--bi].log_term;
      acc = std::isinf(acc) ? t : std::max(acc, t) + std::log1p(std::pow(k, -std::abs(acc - t))) / std::log(k);
    }
    rep.log_tail_sums[static_cast<std::size_t>(N - M)] = acc;
  }
  bool dec = true, grow = true;
  for (std::size_t i = 1; i < rep.blocks.size(); ++i) {
    if (rep.blocks[i].log_term >= rep.blocks[i - 1].log_term) dec = false;
    if (rep.blocks[i].log_term <= rep.blocks[i - 1].log_term) grow = false;
  }
  rep.tail_decreasing = dec && rep.blocks.size() >= 2;
  rep.terms_growing = grow && rep.blocks.size() >= 2;
  return rep;
}

}  // namespace ffdioph
