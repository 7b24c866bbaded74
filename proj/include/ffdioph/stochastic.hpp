#pragma once

// The counting variables nu_t over blocks S_{N_t}: the scale rho, exact first
// and second moments, Monte Carlo sampling on U, and the Borel-Cantelli ratio.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffdioph/cylinder.hpp"
#include "ffdioph/errors.hpp"
#include "ffdioph/exponents.hpp"
#include "ffdioph/kadic.hpp"
#include "ffdioph/parallel.hpp"

namespace ffdioph {

struct RhoSpec {
  std::uint32_t k = 2;
  Rational vS = 1;
  Rational delta = Rational(1, 2);
  std::size_t n = 1;
};

struct RhoValue {
  int N = 0;
  Rational power;             // rho = k^power * log_k N
  double raw = 0;
  std::int64_t exponent = 0;  // quantized: k^exponent <= rho < k^(exponent+1), capped at 0
  bool capped = false;
};

/// rho(k^N) = k^(-N (vS - delta)/n) log_k N. The quantized exponent is the
/// floor of log_k rho; values within 1e-40 of an integer are snapped, which
/// catches the exact cases (N a power of k).
inline RhoValue rho(int N, const RhoSpec& spec) {
  using Float = boost::multiprecision::cpp_bin_float_50;
  if (N < 2) throw DomainError("rho needs N >= 2 so that log N > 0");
  if (spec.n < 1) throw DomainError("n must be at least 1");
  if (spec.delta <= 0) throw DomainError("delta must be positive");
  RhoValue out;
  out.N = N;
  out.power = -Rational(N) * (spec.vS - spec.delta) / Rational(static_cast<long long>(spec.n));
  const Float lk = boost::multiprecision::log(Float(spec.k));
  const Float L = boost::multiprecision::log(Float(N)) / lk;
  const Float x = Float(boost::multiprecision::numerator(out.power)) / Float(boost::multiprecision::denominator(out.power));
  const Float e = x + boost::multiprecision::log(L) / lk;
  const Float nearest = boost::multiprecision::round(e);
  const Float fl = boost::multiprecision::abs(e - nearest) < Float("1e-40") ? nearest : boost::multiprecision::floor(e);
  out.raw = static_cast<double>(boost::multiprecision::pow(Float(spec.k), x) * L);
  out.exponent = static_cast<std::int64_t>(fl);
  if (out.exponent > 0) {
    out.exponent = 0;
    out.capped = true;
  }
  return out;
}

/// The resonant set used by nu_t around q: B' for m = 1, B'' for m >= 2.
inline ResonantSet nu_set(const PolyVector& q, std::int64_t r) {
  return q.m() == 1 ? make_B_prime(q[0], r) : make_B_dprime(q, r);
}

inline std::vector<PolyVector> block_members(const SetFamily& S, int N) {
  std::vector<PolyVector> out;
  if (!S.block_allowed(N)) return out;
  if (S.kind() == FamilyKind::EXPLICIT) {
    for (const auto& q : S.members())
      if (q.max_degree() == N) out.push_back(q);
    return out;
  }
  for_each_vector(S.field(), S.m(), N, [&](PolyVector q) {
    if (S.contains(q)) out.push_back(std::move(q));
  });
  return out;
}

struct MomentReport {
  int t = 0, N_t = 0;
  std::size_t n = 1;
  RhoValue rho;
  std::size_t block_size = 0;
  std::int64_t T = 0;
  std::optional<KadicMeasure> E, E2, variance;
  std::optional<KadicMeasure> zero_measure;  // exact mu(nu_t = 0), when enumerable
  Rational C;                                // constant in the variance bound
  bool variance_bound = false;               // variance <= C E
  bool pair_bound = false;                   // off-diagonal E(nu^2) <= C rho^2n #pairs
  bool zero_bound = false;                   // mu(nu = 0) <= variance / E^2
  // Monte Carlo part
  std::uint64_t samples = 0, seed = 0;
  double mean = 0, second = 0, std_error = 0, zero_freq = 0, zero_std_error = 0;
  bool mean_within = false, zero_within = false;
};

namespace detail {

inline std::uint64_t guard_enumeration(std::uint32_t k, std::uint64_t digits, std::uint64_t limit_bits) {
  const double bits = static_cast<double>(digits) * std::log2(static_cast<double>(k));
  if (bits > static_cast<double>(limit_bits)) return 0;
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < digits; ++i) total *= k;
  return total;
}

/// Digit layout of an m x n matrix: entry (i, j), digit t at ((i n + j) T + t - 1).
class SampleMembership {
 public:
  SampleMembership(const FieldSpec& f, std::size_t m, std::size_t n, std::int64_t T) : f_(f), m_(m), n_(n), T_(T) {}

  bool contains(const ResonantSet& s, const std::vector<Rep>& a) const {
    const auto g = coprimality_modulus(s);
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::int64_t u = 1; u <= s.r; ++u)
        if (coeff(s.q, a, j, u) != 0) return false;
      if (!g) continue;
      const int d = s.q.max_degree();
      std::vector<Rep> p(static_cast<std::size_t>(std::max(d, 0)));
      for (int e = 0; e < d; ++e) p[static_cast<std::size_t>(e)] = coeff(s.q, a, j, -e);
      if (poly_gcd(*g, Polynomial(f_, std::move(p))).degree() != 0) return false;
    }
    return true;
  }

 private:
  // Coefficient of X^-u in sum_i q_i a_{i,j}.
  Rep coeff(const PolyVector& q, const std::vector<Rep>& a, std::size_t j, std::int64_t u) const {
    Rep acc = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (int s = 0; s <= q[i].degree(); ++s) {
        const std::int64_t t = s + u;
        if (t < 1) continue;
        if (t > T_) throw PrecisionError("sample depth too small for this resonant set");
        const Rep c = q[i].coeff(static_cast<std::size_t>(s));
        if (c == 0) continue;
        acc = f_.add(acc, f_.mul(c, a[(i * n_ + j) * static_cast<std::size_t>(T_) + static_cast<std::size_t>(t - 1)]));
      }
    }
    return acc;
  }

  FieldSpec f_;
  std::size_t m_, n_;
  std::int64_t T_;
};

}  // namespace detail

struct MomentOptions {
  std::size_t n = 1;
  Rational delta = Rational(1, 2);
  std::optional<Rational> vS;      // defaults to the family's closed-form v(S)
  Rational C = 1;                  // largest frozen intersection constant
  unsigned threads = 1;
  std::uint64_t zero_enum_bits = 22;
};

/// Exact E(nu_t), E(nu_t^2), variance and, when the depth is small enough,
/// the exact measure of the zero set.
inline MomentReport nu_exact_moments(const SetFamily& S, int t, int N_t, const MomentOptions& opt) {
  MomentReport rep;
  rep.t = t;
  rep.N_t = N_t;
  rep.n = opt.n;
  rep.C = opt.C;
  const std::uint32_t k = S.field().k();
  const auto vS = opt.vS ? *opt.vS : S.oracle_v();
  if (!vS) throw DomainError("v(S) has no closed form for " + S.describe() + "; pass it explicitly");
  rep.rho = rho(N_t, RhoSpec{k, *vS, opt.delta, opt.n});
  const std::int64_t r = -rep.rho.exponent;
  const auto qs = block_members(S, N_t);
  rep.block_size = qs.size();
  rep.T = std::max<std::int64_t>(1, r + N_t);
  const KadicMeasure zero = KadicMeasure::zero(k);
  if (qs.empty()) {
    rep.E = rep.E2 = rep.variance = zero;
    rep.zero_measure = KadicMeasure::one(k);
    rep.variance_bound = rep.pair_bound = true;
    rep.zero_bound = false;  // E = 0: the bound 1/E is vacuous
    return rep;
  }
  std::vector<ResonantSet> sets;
  for (const auto& q : qs) sets.push_back(nu_set(q, r));

  struct Partial {
    KadicMeasure diag, off;
  };
  const std::uint64_t M = qs.size();
  const auto parts = map_chunks<Partial>(M, opt.threads, [&](const ChunkRange& c) {
    Partial p{zero, zero};
    for (std::uint64_t i = c.begin; i < c.end; ++i) {
      p.diag += measure_of({sets[i]}, opt.n, rep.T);
      for (std::uint64_t j = i + 1; j < M; ++j) p.off += measure_intersection(sets[i], sets[j], opt.n, rep.T);
    }
    return p;
  });
  KadicMeasure E = zero, off = zero;
  for (const auto& p : parts) {
    E += p.diag;
    off += p.off;
  }
  off = off + off;
  rep.E = E;
  rep.E2 = E + off;
  rep.variance = *rep.E2 - E * E;
  const Rational Er = E.to_rational();
  rep.variance_bound = rep.variance->to_rational() <= opt.C * Er;
  const Rational rho_n = Rational(1) / Rational(big_pow(k, static_cast<std::uint64_t>(r) * opt.n));
  rep.pair_bound = off.to_rational() <= opt.C * rho_n * rho_n * Rational(M * (M - 1));

  const std::size_t mn = S.m() * opt.n;
  if (const auto total = detail::guard_enumeration(k, mn * static_cast<std::uint64_t>(rep.T), opt.zero_enum_bits)) {
    const detail::SampleMembership member(S.field(), S.m(), opt.n, rep.T);
    const auto counts = map_chunks<std::uint64_t>(total, opt.threads, [&](const ChunkRange& c) {
      std::vector<Rep> a(mn * static_cast<std::size_t>(rep.T));
      std::uint64_t zeros = 0;
      for (std::uint64_t idx = c.begin; idx < c.end; ++idx) {
        std::uint64_t rest = idx;
        for (auto& d : a) {
          d = static_cast<Rep>(rest % k);
          rest /= k;
        }
        bool hit = false;
        for (const auto& s : sets)
          if (member.contains(s, a)) {
            hit = true;
            break;
          }
        if (!hit) ++zeros;
      }
      return zeros;
    });
    std::uint64_t zeros = 0;
    for (auto z : counts) zeros += z;
    rep.zero_measure = KadicMeasure(k, zeros, static_cast<std::int64_t>(mn) * rep.T);
    rep.zero_bound = !E.is_zero() && rep.zero_measure->to_rational() * Er * Er <= rep.variance->to_rational();
  }
  return rep;
}

/// Samples uniform depth-T matrices (sample i uses the stream (seed, i)) and
/// compares the empirical moments of nu_t with the exact report.
inline void nu_monte_carlo(const SetFamily& S, MomentReport& rep, std::uint64_t samples, std::uint64_t seed,
                           unsigned threads = 1) {
  if (samples < 1) throw DomainError("samples must be at least 1");
  rep.samples = samples;
  rep.seed = seed;
  const std::uint32_t k = S.field().k();
  const auto qs = block_members(S, rep.N_t);
  const std::int64_t r = -rep.rho.exponent;
  std::vector<ResonantSet> sets;
  for (const auto& q : qs) sets.push_back(nu_set(q, r));
  const std::size_t mn = S.m() * rep.n;
  const detail::SampleMembership member(S.field(), S.m(), rep.n, rep.T);
  struct Partial {
    std::uint64_t sum = 0, sumsq = 0, zeros = 0;
  };
  const auto parts = map_chunks<Partial>(samples, threads, [&](const ChunkRange& c) {
    Partial p;
    std::vector<Rep> a(mn * static_cast<std::size_t>(rep.T));
    for (std::uint64_t i = c.begin; i < c.end; ++i) {
      CounterRng rng(seed, i);
      for (auto& d : a) d = static_cast<Rep>(rng.below(k));
      std::uint64_t nu = 0;
      for (const auto& s : sets)
        if (member.contains(s, a)) ++nu;
      p.sum += nu;
      p.sumsq += nu * nu;
      if (nu == 0) ++p.zeros;
    }
    return p;
  });
  Partial tot;
  for (const auto& p : parts) {
    tot.sum += p.sum;
    tot.sumsq += p.sumsq;
    tot.zeros += p.zeros;
  }
  const double ns = static_cast<double>(samples);
  rep.mean = static_cast<double>(tot.sum) / ns;
  rep.second = static_cast<double>(tot.sumsq) / ns;
  const double var = samples > 1 ? std::max(0.0, (rep.second - rep.mean * rep.mean) * ns / (ns - 1)) : 0.0;
  rep.std_error = std::sqrt(var / ns);
  rep.zero_freq = static_cast<double>(tot.zeros) / ns;
  rep.zero_std_error = std::sqrt(rep.zero_freq * (1 - rep.zero_freq) / ns);
  if (rep.E) {
    const double E = rep.E->to_double();
    rep.mean_within = std::abs(rep.mean - E) <= 5 * rep.std_error || (rep.std_error == 0 && rep.mean == E);
    rep.zero_within = E > 0 && rep.zero_freq <= 1 / E + 5 * rep.zero_std_error;
  }
}

/// (sum_i mu(A_i))^2 / sum_{i,j} mu(A_i n A_j), exactly.
inline Rational borel_cantelli_ratio(const std::vector<ResonantSet>& events, std::size_t n, unsigned threads = 1) {
  if (events.empty()) throw DomainError("no events");
  const std::int64_t T = sufficient_depth(events);
  const std::uint32_t k = events.front().q.field().k();
  const KadicMeasure zero = KadicMeasure::zero(k);
  struct Partial {
    KadicMeasure single, pairs;
  };
  const std::uint64_t M = events.size();
  const auto parts = map_chunks<Partial>(M, threads, [&](const ChunkRange& c) {
    Partial p{zero, zero};
    for (std::uint64_t i = c.begin; i < c.end; ++i) {
      p.single += measure_of({events[i]}, n, T);
      for (std::uint64_t j = i + 1; j < M; ++j) p.pairs += measure_intersection(events[i], events[j], n, T);
    }
    return p;
  });
  KadicMeasure sum = zero, pairs = zero;
  for (const auto& p : parts) {
    sum += p.single;
    pairs += p.pairs;
  }
  const KadicMeasure denom = sum + pairs + pairs;
  if (denom.is_zero()) throw DomainError("all events have measure zero");
  return (sum * sum).to_rational() / denom.to_rational();
}

/// Events B'(q, |q|^-v) (B'' for m >= 2) for q in S with max degree in [lo, hi];
/// ||x|| < k^(-dv) means ||x|| <= k^(-floor(dv) - 1), i.e. r = floor(dv).
inline std::vector<ResonantSet> power_events(const SetFamily& S, const Rational& v, int lo, int hi) {
  std::vector<ResonantSet> out;
  for (int d = std::max(lo, 0); d <= hi; ++d) {
    const auto r = static_cast<std::int64_t>(floor_rational(v * d));
    for (const auto& q : block_members(S, d)) out.push_back(nu_set(q, r));
  }
  return out;
}

}  // namespace ffdioph
