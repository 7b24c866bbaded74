#pragma once

// Registry of exhaustive lemma checks at desk scale. Each check returns a
// structured report; counterexamples are capped and kept in a fixed order.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffdioph/brute_force.hpp"
#include "ffdioph/cylinder.hpp"
#include "ffdioph/exponents.hpp"
#include "ffdioph/parallel.hpp"
#include "ffdioph/stochastic.hpp"

namespace ffdioph {

using Json = nlohmann::ordered_json;

struct VerifyParams {
  std::uint32_t k = 2;
  std::size_t m = 1, n = 1;
  int degmax = 3;
  int rmax = 3;
  int nmax = 1;
  int N_max = 12;
  int brute_T = 8;
  int samples = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string family = "all";
  Rational delta = Rational(1, 2);
  std::vector<Rational> v{2, 3};
  std::optional<Rational> C;          // overrides the frozen intersection constant
  std::optional<Rational> phi_lower;  // optional lower bound on Phi(q)/|q|
};

struct VerifyReport {
  std::string lemma;
  bool pass = true;
  std::uint64_t checked = 0, failures = 0;
  std::vector<std::string> counterexamples;
  Json details = Json::object();

  void fail(const std::string& what) {
    pass = false;
    ++failures;
    if (counterexamples.size() < 10) counterexamples.push_back(what);
  }
};

/// Frozen per-column constants for mu(B' n B')/(eps eps'), monic degree <= 3, r <= 3.
inline std::optional<Rational> frozen_1d_constant(std::uint32_t k) {
  if (k == 2) return Rational(3, 4);
  if (k == 3) return Rational(8, 9);
  return std::nullopt;
}

/// Frozen constant for mu(B'' n B'')/(eps eps') over F_2[X]^2.
inline Rational frozen_big_m_constant() { return 1; }

namespace detail {

inline Rational rational_pow(const Rational& x, std::size_t e) {
  Rational out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= x;
  return out;
}

inline std::vector<Polynomial> polys_between(const FieldSpec& f, int dmin, int dmax, bool monic) {
  std::vector<Polynomial> out;
  for (int d = dmin; d <= dmax; ++d) for_each_poly(f, d, monic, [&](const Polynomial& p) { out.push_back(p); });
  return out;
}

inline std::vector<PolyVector> vectors_between(const FieldSpec& f, std::size_t m, int dmin, int dmax) {
  std::vector<PolyVector> out;
  for (int d = dmin; d <= dmax; ++d) for_each_vector(f, m, d, [&](const PolyVector& q) { out.push_back(q); });
  return out;
}

inline bool associates(const PolyVector& a, const PolyVector& b) {
  const FieldSpec& f = a.field();
  for (Rep c = 1; c < f.k(); ++c) {
    bool same = true;
    for (std::size_t i = 0; i < a.m() && same; ++i) same = a[i] * Polynomial::constant(f, c) == b[i];
    if (same) return true;
  }
  return false;
}

/// Runs check(i) for i in [0, total) in chunks and folds the per-chunk reports in order.
template <class Fn>
void run_indexed(VerifyReport& rep, std::uint64_t total, unsigned threads, Fn check) {
  const auto parts = map_chunks<VerifyReport>(total, threads, [&](const ChunkRange& c) {
    VerifyReport r;
    for (std::uint64_t i = c.begin; i < c.end; ++i) check(i, r);
    return r;
  });
  for (const auto& p : parts) {
    rep.checked += p.checked;
    rep.failures += p.failures;
    rep.pass = rep.pass && p.pass;
    for (const auto& s : p.counterexamples)
      if (rep.counterexamples.size() < 10) rep.counterexamples.push_back(s);
  }
}

inline SetFamily family_from_name(const std::string& name, const FieldSpec& f, std::size_t m) {
  if (name == "all") return SetFamily::all_nonzero(f, m);
  if (name == "monic") return SetFamily::monic_coords(f, m);
  if (name == "lacunary") return SetFamily::lacunary(f, m, 2);
  throw DomainError("unknown family \"" + name + "\" (expected all, monic or lacunary)");
}

}  // namespace detail

inline VerifyReport verify_independence(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  const auto qs = detail::vectors_between(f, p.m, 0, p.degmax);
  detail::run_indexed(rep, qs.size(), p.threads, [&](std::uint64_t i, VerifyReport& r) {
    for (std::size_t j = i + 1; j < qs.size(); ++j) {
      if (!linearly_independent(qs[i], qs[j])) continue;
      for (std::int64_t a = 1; a <= p.rmax; ++a)
        for (std::int64_t b = 1; b <= p.rmax; ++b) {
          const auto sa = make_B(qs[i], a), sb = make_B(qs[j], b);
          const auto mu = measure_intersection(sa, sb, p.n, sufficient_depth({sa, sb}));
          ++r.checked;
          if (mu != closed_form_B(p.k, a + b, p.n))
            r.fail(qs[i].str() + " " + qs[j].str() + " r=" + std::to_string(a) + "," + std::to_string(b) + ": " + mu.str());
        }
    }
  });
  return rep;
}

inline VerifyReport verify_measure(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  const auto qs = detail::vectors_between(f, p.m, 0, p.degmax);
  std::uint64_t brute_checked = 0;
  for (const auto& q : qs)
    for (std::int64_t r = 0; r <= p.rmax; ++r) {
      const auto s = make_B(q, r);
      const auto T = sufficient_depth({s});
      const auto mu = measure_of({s}, p.n, T);
      ++rep.checked;
      if (mu != closed_form_B(p.k, r, p.n)) rep.fail(q.str() + " r=" + std::to_string(r) + ": " + mu.str());
      if (p.m * p.n * static_cast<std::size_t>(T) <= static_cast<std::size_t>(p.brute_T) && p.k == 2) {
        ++brute_checked;
        if (brute::measure({s}, p.n, T) != mu) rep.fail(q.str() + " r=" + std::to_string(r) + ": enumeration disagrees");
      }
    }
  rep.details["enumeration_checked"] = brute_checked;
  return rep;
}

inline VerifyReport verify_1d_measure(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  const auto qs = detail::polys_between(f, 0, p.degmax, false);
  std::uint64_t brute_checked = 0;
  for (const auto& q : qs)
    for (std::int64_t r = 1; r <= p.rmax; ++r)
      for (int n = 1; n <= std::max(1, p.nmax); ++n) {
        const auto nn = static_cast<std::size_t>(n);
        const auto s = make_B_prime(q, r);
        const auto T = sufficient_depth({s});
        const auto mu = measure_of({s}, nn, T);
        ++rep.checked;
        if (mu != closed_form_B_prime(q, r, nn))
          rep.fail(q.str() + " r=" + std::to_string(r) + " n=" + std::to_string(n) + ": " + mu.str());
        if (n == 1 && T <= p.brute_T && std::pow(double(p.k), double(T)) <= 65536.0) {
          ++brute_checked;
          if (brute::measure({s}, 1, T) != mu) rep.fail(q.str() + " r=" + std::to_string(r) + ": enumeration disagrees");
        }
      }
  rep.details["enumeration_checked"] = brute_checked;
  return rep;
}

inline VerifyReport verify_phi(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  const auto qs = detail::polys_between(f, 1, p.degmax, true);
  Rational lo = 2, hi = 0;
  std::string argmin;
  for (const auto& q : qs) {
    const BigInt phi = totient(q);
    ++rep.checked;
    if (phi != brute::totient(q)) rep.fail(q.str() + ": product formula " + phi.str() + " vs " + brute::totient(q).str());
    const Rational ratio(phi, big_pow(p.k, static_cast<std::uint64_t>(q.degree())));
    if (ratio < lo) {
      lo = ratio;
      argmin = q.str();
    }
    hi = std::max(hi, ratio);
  }
  rep.details["min_ratio"] = rational_string(lo);
  rep.details["argmin"] = argmin;
  rep.details["max_ratio"] = rational_string(hi);
  if (p.phi_lower) {
    rep.details["required_lower"] = rational_string(*p.phi_lower);
    if (lo < *p.phi_lower) rep.fail("Phi(" + argmin + ")/|q| = " + rational_string(lo) + " < " + rational_string(*p.phi_lower));
  }
  return rep;
}

/// Largest mu(A n A')/(eps eps')^n over pairs from `sets`; fails when it
/// exceeds C^n.
inline void intersection_ratio(VerifyReport& rep, const std::vector<ResonantSet>& sets, std::size_t n, unsigned threads,
                               const std::optional<Rational>& C, const std::function<bool(std::size_t, std::size_t)>& skip) {
  const std::uint32_t k = sets.front().q.field().k();
  std::optional<Rational> bound;
  if (C) bound = detail::rational_pow(*C, n);
  struct Worst {
    Rational value = 0;
    std::string where;
    VerifyReport violations;
  };
  const auto parts = map_chunks<Worst>(sets.size(), threads, [&](const ChunkRange& c) {
    Worst w;
    for (std::uint64_t i = c.begin; i < c.end; ++i)
      for (std::size_t j = 0; j < sets.size(); ++j) {
        if (skip(i, j)) continue;
        const auto mu = measure_intersection(sets[i], sets[j], n, sufficient_depth({sets[i], sets[j]}));
        const Rational ratio = mu.to_rational() * Rational(big_pow(k, static_cast<std::uint64_t>((sets[i].r + sets[j].r) * n)));
        const std::string where =
            sets[i].q.str() + " r=" + std::to_string(sets[i].r) + " / " + sets[j].q.str() + " r=" + std::to_string(sets[j].r);
        ++w.violations.checked;
        if (bound && ratio > *bound) w.violations.fail(where + ": ratio " + rational_string(ratio) + " > " + rational_string(*bound));
        if (ratio > w.value) {
          w.value = ratio;
          w.where = where;
        }
      }
    return w;
  });
  Rational worst = 0;
  std::string where;
  for (const auto& part : parts) {
    rep.checked += part.violations.checked;
    rep.failures += part.violations.failures;
    rep.pass = rep.pass && part.violations.pass;
    for (const auto& ce : part.violations.counterexamples)
      if (rep.counterexamples.size() < 10) rep.counterexamples.push_back(ce);
    if (part.value > worst) {
      worst = part.value;
      where = part.where;
    }
  }
  rep.details["max_ratio"] = rational_string(worst);
  rep.details["argmax"] = where;
  rep.details["constant"] = C ? Json(rational_string(*C)) : Json(nullptr);
}

inline VerifyReport verify_1d_intersection(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  std::vector<ResonantSet> sets;
  for (const auto& q : detail::polys_between(f, 1, p.degmax, true))
    for (std::int64_t r = 1; r <= p.rmax; ++r) sets.push_back(make_B_prime(q, r));
  auto C = p.C;
  if (!C && p.degmax <= 3 && p.rmax <= 3) C = frozen_1d_constant(p.k);
  intersection_ratio(rep, sets, p.n, p.threads, C, [&](std::size_t i, std::size_t j) { return sets[i].q == sets[j].q; });
  return rep;
}

inline VerifyReport verify_big_m_measure(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  for (const auto& q : detail::vectors_between(f, p.m, 0, p.degmax))
    for (std::int64_t r = 1; r <= p.rmax; ++r) {
      const auto s = make_B_dprime(q, r);
      const auto mu = measure_of({s}, p.n, sufficient_depth({s}));
      ++rep.checked;
      const auto top = closed_form_B(p.k, r, p.n);
      const Polynomial g = q.content();
      const Rational c1 =
          detail::rational_pow(Rational(unit_count(g), big_pow(p.k, static_cast<std::uint64_t>(std::max(0, g.degree())))), p.n);
      if (mu != closed_form_B_dprime(q, r, p.n)) rep.fail(q.str() + " r=" + std::to_string(r) + ": " + mu.str());
      if (mu > top || mu.to_rational() < c1 * top.to_rational()) rep.fail(q.str() + " r=" + std::to_string(r) + ": outside bounds");
    }
  return rep;
}

inline VerifyReport verify_big_m_intersection(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  std::vector<ResonantSet> sets;
  for (const auto& q : detail::vectors_between(f, std::max<std::size_t>(p.m, 2), 0, p.degmax))
    for (std::int64_t r = 1; r <= p.rmax; ++r) sets.push_back(make_B_dprime(q, r));
  auto C = p.C;
  if (!C && p.k == 2 && p.degmax <= 3 && p.rmax <= 3) C = frozen_big_m_constant();
  intersection_ratio(rep, sets, p.n, p.threads, C,
                     [&](std::size_t i, std::size_t j) { return detail::associates(sets[i].q, sets[j].q); });
  return rep;
}

inline VerifyReport verify_counting_N(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  const auto qs = detail::polys_between(f, 1, p.degmax, true);
  detail::run_indexed(rep, qs.size(), p.threads, [&](std::uint64_t i, VerifyReport& r) {
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (i == j) continue;
      for (std::int64_t a = 1; a <= p.rmax; ++a)
        for (std::int64_t b = 1; b <= p.rmax; ++b) {
          const auto res = count_N(PolyVector({qs[i]}), PolyVector({qs[j]}), a, b, p.n);
          ++r.checked;
          if (!res.within_bound)
            r.fail(qs[i].str() + " / " + qs[j].str() + " r=" + std::to_string(a) + "," + std::to_string(b) + ": N=" +
                   res.count.str() + " > " + rational_string(res.bound));
        }
    }
  });
  return rep;
}

inline VerifyReport verify_large_blocks(const VerifyParams& p) {
  VerifyReport rep;
  const auto S = detail::family_from_name(p.family, FieldSpec::of_size(p.k), p.m);
  const auto vS = S.oracle_v();
  if (!vS) throw DomainError("family has no closed-form v(S)");
  const auto w = large_blocks_witnesses(S, *vS, p.delta, p.N_max);
  rep.checked = static_cast<std::uint64_t>(p.N_max + 1);
  rep.details["witnesses"] = w;
  if (w.empty() || 2 * w.back() < p.N_max) rep.fail("no witness in the upper half of [0, N_max]");
  return rep;
}

inline VerifyReport verify_exponents_eq(const VerifyParams& p) {
  VerifyReport rep;
  const auto S = detail::family_from_name(p.family, FieldSpec::of_size(p.k), p.m);
  const auto v = v_of_S(S, p.N_max);
  const auto g = gamma_of_S(S, p.N_max);
  rep.checked = 1;
  rep.details["v_estimate"] = v.value;
  rep.details["gamma_estimate"] = g.value;
  if (const auto o = S.oracle_v()) {
    rep.details["oracle"] = rational_string(*o);
    if (std::abs(v.value - static_cast<double>(*o)) > 0.1) rep.fail("v(S) estimate off the oracle by more than 0.1");
  }
  if (std::abs(v.value - g.value) > 0.1) rep.fail("|gamma(S) - v(S)| > 0.1");
  return rep;
}

inline VerifyReport verify_compare_exponents(const VerifyParams& p) {
  VerifyReport rep;
  const auto S = SetFamily::all_nonzero(FieldSpec::of_size(p.k), p.m);
  auto rows = Json::array();
  for (const auto& v : p.v) {
    const auto psi = ApproxFunction::power(v);
    const auto sup = delta_sup(psi, p.n, S, arithmetic_grid(0, 8, Rational(1, 2)), p.N_max);
    const auto eta = eta_of_psi(psi, S, p.n, p.N_max);
    const double nn = static_cast<double>(p.n);
    ++rep.checked;
    if (std::min(sup.value.value, nn) + 0.05 < std::min(eta.value, nn)) rep.fail("v=" + rational_string(v) + ": delta < eta");
    if (sup.value.exact && eta.exact && *sup.value.exact != *eta.exact) rep.fail("v=" + rational_string(v) + ": exact values differ");
    const auto split = split_S_prime_and_Svtheta(psi, S, p.n, eta.exact ? *eta.exact : Rational(1), Rational(1, 4), p.N_max);
    if (!split.covers) rep.fail("v=" + rational_string(v) + ": S' and S(v, theta) do not cover");
    rows.push_back({{"v", rational_string(v)},
                    {"delta", sup.value.value},
                    {"delta_exact", sup.value.exact ? rational_string(*sup.value.exact) : ""},
                    {"eta", eta.value},
                    {"eta_exact", eta.exact ? rational_string(*eta.exact) : ""},
                    {"covers", split.covers}});
  }
  rep.details["rows"] = rows;
  return rep;
}

inline VerifyReport verify_inclusion_eq20(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  std::uint64_t trivial = 0;
  for (int N = 1; N <= p.degmax; ++N) {
    const std::int64_t rho_q = N >= 2 ? rho(N, RhoSpec{p.k, Rational(static_cast<long long>(p.m)), p.delta, p.n}).exponent : -1;
    for_each_vector(f, p.m, N, [&](const PolyVector& q) {
      for (std::int64_t rho_exp = rho_q - 2; rho_exp <= rho_q; ++rho_exp)
        for (std::int64_t T = 1; T <= -rho_exp + N + 1; ++T) {
          const auto r = check_inclusion_eq20(q, N, rho_exp, T);
          ++rep.checked;
          if (r.trivial) ++trivial;
          if (!r.holds) rep.fail(q.str() + " rho=k^" + std::to_string(rho_exp) + " T=" + std::to_string(T));
        }
    });
  }
  rep.details["trivial"] = trivial;
  return rep;
}

inline VerifyReport verify_scaling(const VerifyParams& p) {
  VerifyReport rep;
  const auto f = FieldSpec::of_size(p.k);
  for (int i = 0; i < p.samples; ++i) {
    CounterRng rng(p.seed, static_cast<std::uint64_t>(i));
    const std::int64_t R = 2 + static_cast<std::int64_t>(rng.below(3));
    std::vector<Rep> d(p.m * p.n * static_cast<std::size_t>(R));
    for (auto& x : d) x = static_cast<Rep>(rng.below(p.k));
    const auto c = LaurentMatrix::from_digits(f, p.m, p.n, R, d);
    for (std::int64_t r0 = 0; r0 <= 3; ++r0) {
      const auto s = scale_measure_check(c, R, r0);
      ++rep.checked;
      if (!s.holds) rep.fail("sample " + std::to_string(i) + " r0=" + std::to_string(r0) + ": " + s.scaled.str() + " vs " + s.expected.str());
    }
  }
  return rep;
}

using VerifyFn = std::function<VerifyReport(const VerifyParams&)>;

inline const std::map<std::string, VerifyFn>& verify_registry() {
  static const std::map<std::string, VerifyFn> registry{
      {"independence", verify_independence},
      {"measure", verify_measure},
      {"1D-measure", verify_1d_measure},
      {"1D-intersection", verify_1d_intersection},
      {"phi", verify_phi},
      {"big-m-measure", verify_big_m_measure},
      {"big-m-intersection", verify_big_m_intersection},
      {"counting-N", verify_counting_N},
      {"large-blocks", verify_large_blocks},
      {"exponents-eq", verify_exponents_eq},
      {"compare-exponents", verify_compare_exponents},
      {"inclusion-eq20", verify_inclusion_eq20},
      {"scaling", verify_scaling},
  };
  return registry;
}

inline VerifyReport run_verify(const std::string& lemma, const VerifyParams& p) {
  const auto& reg = verify_registry();
  const auto it = reg.find(lemma);
  if (it == reg.end()) throw DomainError("unknown lemma \"" + lemma + "\"");
  VerifyReport rep = it->second(p);
  rep.lemma = lemma;
  return rep;
}

}  // namespace ffdioph
