#pragma once

// JSON views of the library's reports. Exact rationals are strings "p/q",
// k-adic measures carry both the pair (num, exp) and the string "num/k^exp".

#include <json.hpp>

#include "ffdioph/boxcount.hpp"
#include "ffdioph/dimension.hpp"
#include "ffdioph/exponents.hpp"
#include "ffdioph/stochastic.hpp"
#include "ffdioph/verify.hpp"

namespace ffdioph::json {

using Json = nlohmann::ordered_json;

inline Json rational(const Rational& r) { return rational_string(r); }

inline Json rational(const std::optional<Rational>& r) { return r ? Json(rational_string(*r)) : Json(nullptr); }

inline Json measure(const KadicMeasure& m) {
  return Json{{"num", m.num().str()}, {"exp", m.exp()}, {"str", m.str()}};
}

inline Json measure(const std::optional<KadicMeasure>& m) { return m ? measure(*m) : Json(nullptr); }

inline Json estimate(const Estimate& e) {
  return Json{{"value", e.value},
              {"exact", rational(e.exact)},
              {"converged", e.converged},
              {"window", {e.window_lo, e.window_hi}},
              {"note", e.note}};
}

inline Json verdict(const DimensionVerdict& d) {
  return Json{{"regime", regime_name(d.regime)}, {"dim", rational(d.dim)}, {"m", d.m},
              {"n", d.n},                        {"vS", rational(d.vS)},   {"lambda", rational(d.lambda)},
              {"eta", rational(d.eta)}};
}

inline Json cover(const CoverReport& c) {
  Json blocks = Json::array();
  for (const auto& b : c.blocks) blocks.push_back({{"N", b.N}, {"q_count", b.q_count.str()}, {"log_term", b.log_term}});
  return Json{{"s", rational(c.s)},
              {"lambda", rational(c.lambda)},
              {"eps", rational(c.eps)},
              {"eps_used", rational(c.eps_used)},
              {"vS", rational(c.vS)},
              {"threshold", rational(c.threshold)},
              {"eq4_holds", c.eq4_holds},
              {"exponent", rational(c.exponent)},
              {"converges", c.converges},
              {"M", c.M},
              {"blocks", blocks},
              {"log_tail_sums", c.log_tail_sums},
              {"tail_decreasing", c.tail_decreasing},
              {"terms_growing", c.terms_growing}};
}

inline Json consistency(const ConsistencyReport& c) {
  return Json{{"thm1", verdict(c.thm1)}, {"thm2", verdict(c.thm2)}, {"vS", estimate(c.vS)}, {"eta", estimate(c.eta)},
              {"exact", c.exact},        {"agree", c.agree},        {"gap", c.gap}};
}

inline Json moments(const MomentReport& r) {
  Json out{{"t", r.t},
           {"N_t", r.N_t},
           {"n", r.n},
           {"rho", {{"power", rational(r.rho.power)}, {"raw", r.rho.raw}, {"exponent", r.rho.exponent}, {"capped", r.rho.capped}}},
           {"block_size", r.block_size},
           {"T", r.T},
           {"E", measure(r.E)},
           {"E2", measure(r.E2)},
           {"variance", measure(r.variance)},
           {"zero_measure", measure(r.zero_measure)},
           {"C", rational(r.C)},
           {"variance_bound", r.variance_bound},
           {"pair_bound", r.pair_bound},
           {"zero_bound", r.zero_bound}};
  if (r.samples > 0)
    out["monte_carlo"] = Json{{"samples", r.samples},           {"seed", r.seed},
                              {"mean", r.mean},                 {"second", r.second},
                              {"std_error", r.std_error},       {"zero_freq", r.zero_freq},
                              {"zero_std_error", r.zero_std_error}, {"mean_within", r.mean_within},
                              {"zero_within", r.zero_within}};
  return out;
}

inline Json boxcount(const BoxCountReport& r, const std::vector<CutoffSensitivity>& sens) {
  Json series = Json::array();
  for (const auto& row : r.series) series.push_back({{"T", row.T}, {"survivors", row.survivors.str()}, {"estimate", row.estimate}});
  Json s = Json::array();
  for (const auto& c : sens) s.push_back({{"J", c.J}, {"estimate", c.estimate}});
  return Json{{"q_count", r.q_count},
              {"prediction", rational(r.prediction)},
              {"regime", r.regime ? Json(regime_name(*r.regime)) : Json(nullptr)},
              {"gap", r.gap},
              {"decreasing_from", r.decreasing_from},
              {"above_prediction", r.above_prediction},
              {"series", series},
              {"cutoff_sensitivity", s}};
}

inline Json verify(const VerifyReport& r) {
  return Json{{"lemma", r.lemma},
              {"pass", r.pass},
              {"checked", r.checked},
              {"failures", r.failures},
              {"counterexamples", r.counterexamples},
              {"details", r.details}};
}

}  // namespace ffdioph::json
