#pragma once

// Box counting at finite coefficient depth: a depth-T cylinder of U survives
// when it contains some A with ||qA|| < psi(q) for a q in S with
// J_min <= deg q <= J. log_k(#survivors)/T is compared with the dimension
// formula. The union is finite, so the count overestimates: the tail of the
// limsup is replaced by the blocks that match depth T.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffdioph/cylinder.hpp"
#include "ffdioph/dimension.hpp"
#include "ffdioph/errors.hpp"
#include "ffdioph/exponents.hpp"
#include "ffdioph/parallel.hpp"

namespace ffdioph {

/// ceil(T/(1 + lambda)) + margin: the smallest J whose neighbourhoods of
/// radius k^(-J(1+lambda)) are no coarser than depth T, plus a margin.
inline int choose_cutoff(int T, const Rational& lambda, int margin = 1) {
  if (lambda <= 0) throw DomainError("choose_cutoff needs lambda > 0");
  if (T < 1) throw DomainError("depth T must be positive");
  const BigInt c = ceil_rational(Rational(T) / (1 + lambda));
  return std::max(1, static_cast<int>(c)) + margin;
}

enum class BoxMode { EXHAUSTIVE, PROPAGATE };

struct BoxCountRun {
  SetFamily S;
  ApproxFunction psi;
  std::size_t n = 1;
  int T = 1;
  int J = 1;
  int J_min = 1;
  BoxMode mode = BoxMode::PROPAGATE;
  unsigned threads = 1;
  int exhaustive_bits = 26;
  std::uint64_t max_survivors = std::uint64_t(1) << 24;
};

struct BoxRow {
  int T = 0;
  BigInt survivors;
  double estimate = 0;
};

struct BoxCountReport {
  std::vector<BoxRow> series;  // T' = 1 .. T
  std::size_t q_count = 0;     // members of S in the degree window with psi != 0
  std::optional<Rational> prediction;
  std::optional<Regime> regime;
  double gap = 0;              // estimate(T) - prediction
  bool decreasing_from = false;
  bool above_prediction = false;
};

namespace detail {

struct SurvivalTest {
  std::vector<std::vector<FkVector>> forms;  // per q: rows over one column's m*T digits
  bool everything = false;                   // some q imposes no condition
};

inline SurvivalTest survival_forms(const std::vector<std::pair<PolyVector, std::int64_t>>& qs, std::int64_t T) {
  SurvivalTest st;
  for (const auto& [q, R] : qs) {
    if (R <= 0) {
      st.everything = true;
      return st;
    }
    auto rows = meets_condition(q, R, T, T + q.max_degree() + R + 1);
    if (rows.empty()) {
      st.everything = true;
      return st;
    }
    st.forms.push_back(std::move(rows));
  }
  return st;
}

/// Digits of a depth-T prefix: entry (i, j), digit t at ((i n + j) T + t - 1).
inline bool survives(const FieldSpec& f, const SurvivalTest& st, const std::vector<Rep>& a, std::size_t m, std::size_t n,
                     std::int64_t T) {
  if (st.everything) return true;
  const auto uT = static_cast<std::size_t>(T);
  for (const auto& rows : st.forms) {
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j)
      for (const auto& row : rows) {
        Rep acc = 0;
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t t = 0; t < uT; ++t) {
            const Rep c = row[i * uT + t];
            if (c) acc = f.add(acc, f.mul(c, a[(i * n + j) * uT + t]));
          }
        if (acc) {
          ok = false;
          break;
        }
      }
    if (ok) return true;
  }
  return false;
}

inline std::vector<Rep> extend(const std::vector<Rep>& parent, std::uint64_t child, std::uint32_t k, std::size_t cells,
                               std::int64_t T) {
  const auto uT = static_cast<std::size_t>(T);
  std::vector<Rep> a(cells * (uT + 1));
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t t = 0; t < uT; ++t) a[c * (uT + 1) + t] = parent[c * uT + t];
    a[c * (uT + 1) + uT] = static_cast<Rep>(child % k);
    child /= k;
  }
  return a;
}

}  // namespace detail

/// The q of the run with their condition depth R = -log_k psi(q) (clamped at 0).
inline std::vector<std::pair<PolyVector, std::int64_t>> box_members(const BoxCountRun& run) {
  if (run.J_min < 0 || run.J < run.J_min) throw DomainError("need 0 <= J_min <= J");
  std::vector<std::pair<PolyVector, std::int64_t>> out;
  for (int d = run.J_min; d <= run.J; ++d)
    for_each_vector(run.S.field(), run.S.m(), d, [&](const PolyVector& q) {
      if (!run.S.contains(q)) return;
      const auto e = run.psi.at(q);
      if (!e) return;
      out.emplace_back(q, std::max<std::int64_t>(0, -*e));
    });
  return out;
}

inline BoxCountReport box_count(const BoxCountRun& run) {
  if (run.T < 1) throw DomainError("depth T must be positive");
  if (run.n < 1) throw DomainError("n must be at least 1");
  const FieldSpec& f = run.S.field();
  const std::uint32_t k = f.k();
  const std::size_t m = run.S.m(), n = run.n, cells = m * n;
  const double bits_per_digit = std::log2(static_cast<double>(k));
  if (run.mode == BoxMode::EXHAUSTIVE && static_cast<double>(cells) * run.T * bits_per_digit > run.exhaustive_bits)
    throw ScaleError("exhaustive box count needs mnT log2 k <= " + std::to_string(run.exhaustive_bits));
  const auto qs = box_members(run);
  BoxCountReport rep;
  rep.q_count = qs.size();

  auto estimate = [&](const BigInt& N, int T) {
    return N == 0 ? 0.0 : log_k(N, k) / static_cast<double>(T);
  };

  if (run.mode == BoxMode::EXHAUSTIVE) {
    for (int T = 1; T <= run.T; ++T) {
      const auto st = detail::survival_forms(qs, T);
      std::uint64_t total = 1;
      for (std::size_t i = 0; i < cells * static_cast<std::size_t>(T); ++i) total *= k;
      const auto counts = map_chunks<std::uint64_t>(total, run.threads, [&](const ChunkRange& c) {
        std::vector<Rep> a(cells * static_cast<std::size_t>(T));
        std::uint64_t hits = 0;
        for (std::uint64_t idx = c.begin; idx < c.end; ++idx) {
          std::uint64_t rest = idx;
          for (auto& d : a) {
            d = static_cast<Rep>(rest % k);
            rest /= k;
          }
          if (detail::survives(f, st, a, m, n, T)) ++hits;
        }
        return hits;
      });
      BigInt N = 0;
      for (auto c : counts) N += c;
      rep.series.push_back({T, N, estimate(N, T)});
    }
  } else {
    std::uint64_t children = 1;
    for (std::size_t i = 0; i < cells; ++i) children *= k;
    std::vector<std::vector<Rep>> level{std::vector<Rep>{}};
    for (int T = 1; T <= run.T; ++T) {
      const auto st = detail::survival_forms(qs, T);
      const auto parts = map_chunks<std::vector<std::vector<Rep>>>(level.size(), run.threads, [&](const ChunkRange& c) {
        std::vector<std::vector<Rep>> out;
        for (std::uint64_t p = c.begin; p < c.end; ++p)
          for (std::uint64_t ch = 0; ch < children; ++ch) {
            auto a = detail::extend(level[p], ch, k, cells, T - 1);
            if (detail::survives(f, st, a, m, n, T)) out.push_back(std::move(a));
          }
        return out;
      });
      std::vector<std::vector<Rep>> next;
      for (auto& part : parts)
        for (auto& a : part) next.push_back(std::move(a));
      if (next.size() > run.max_survivors)
        throw ScaleError("box count exceeded " + std::to_string(run.max_survivors) + " survivors at depth " +
                         std::to_string(T));
      level = std::move(next);
      const BigInt N = level.size();
      rep.series.push_back({T, N, estimate(N, T)});
    }
  }

  const SetFamily& support = effective_support(run.psi, run.S);
  const auto vS = support.oracle_v();
  const auto lambda = run.psi.oracle_lambda();
  if (vS && lambda && *lambda >= 0) {
    const auto verdict = theorem1_verdict(m, n, *vS, *lambda);
    rep.prediction = verdict.dim;
    rep.regime = verdict.regime;
    rep.gap = rep.series.back().estimate - static_cast<double>(verdict.dim);
  }
  return rep;
}

/// Whether the estimates for T' in [from, T] decrease strictly and stay at or
/// above the prediction.
inline void mark_approach(BoxCountReport& rep, int from) {
  if (!rep.prediction) return;
  const double pred = static_cast<double>(*rep.prediction);
  bool dec = true, above = true;
  for (const auto& row : rep.series) {
    if (row.T < from) continue;
    above = above && row.estimate >= pred;
    if (row.T > from && row.estimate >= rep.series[static_cast<std::size_t>(row.T - 2)].estimate) dec = false;
  }
  rep.decreasing_from = dec;
  rep.above_prediction = above;
}

struct CutoffSensitivity {
  int J = 0;
  double estimate = 0;
};

/// Final-depth estimates with the whole window shifted by -1, 0, +1.
inline std::vector<CutoffSensitivity> cutoff_sensitivity(const BoxCountRun& run) {
  std::vector<CutoffSensitivity> out;
  for (int shift : {-1, 0, 1}) {
    BoxCountRun r = run;
    r.J += shift;
    r.J_min += shift;
    if (r.J_min < 0) continue;
    out.push_back({r.J, box_count(r).series.back().estimate});
  }
  return out;
}

/// Default window for a run at depth T: the single block J = ceil(T/(1 + lambda)).
inline BoxCountRun default_run(SetFamily S, ApproxFunction psi, std::size_t n, int T) {
  const auto lambda = psi.oracle_lambda();
  if (!lambda) throw DomainError("psi has no closed-form lambda; pass J explicitly");
  const int J = choose_cutoff(T, *lambda, 0);
  return BoxCountRun{std::move(S), std::move(psi), n, T, J, J};
}

}  // namespace ffdioph
