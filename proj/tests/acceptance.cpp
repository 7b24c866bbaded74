// Acceptance run: one PASS/FAIL line per criterion. Usage:
//   acceptance <path to ffdioph cli> [--only N]
// Exit status is 0 only when every selected criterion passes.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ffdioph/boxcount.hpp"
#include "ffdioph/brute_force.hpp"
#include "ffdioph/dimension.hpp"
#include "ffdioph/stochastic.hpp"
#include "ffdioph/verify.hpp"

using namespace ffdioph;

namespace {

// Pinned tolerances and limits.
constexpr double kTotientSeconds = 10;
constexpr double kMomentSeconds = 60;
constexpr double kBoxSeconds = 120;
constexpr double kExponentTol = 0.1;
constexpr double kEtaTol = 0.05;
constexpr double kBoxTol = 0.15;
constexpr int kMonteCarloSamples = 10000;
constexpr std::uint64_t kMonteCarloSeed = 2024;

const FieldSpec F2 = FieldSpec::of_size(2);

struct Outcome {
  bool pass = true;
  std::string detail;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

Outcome check_totient() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::uint64_t checked = 0;
  for (std::uint32_t k : {2u, 3u}) {
    VerifyParams p;
    p.k = k;
    p.degmax = 6;
    p.threads = workers();
    const auto rep = run_verify("phi", p);
    checked += rep.checked;
    if (!rep.pass) {
      o.pass = false;
      o.detail += "product formula mismatch for k=" + std::to_string(k) + "; ";
    }
    if (k == 2) {
      const Rational lo = parse_rational(rep.details["min_ratio"].get<std::string>());
      if (lo < Rational(1, 4)) {
        o.pass = false;
        o.detail += "min Phi(q)/|q| = " + rational_string(lo) + " at " + rep.details["argmin"].get<std::string>() +
                    " is below 1/4; ";
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= kTotientSeconds) o.pass = false;
  o.detail += std::to_string(checked) + " monic q with exact product formula; " + fmt(secs, 2) + " s";
  return o;
}

Outcome check_one_d_measure() {
  Outcome o;
  std::uint64_t checked = 0, enumerated = 0;
  for (std::uint32_t k : {2u, 3u}) {
    VerifyParams p;
    p.k = k;
    p.degmax = 4;
    p.rmax = 4;
    p.nmax = 2;
    p.brute_T = 8;
    const auto rep = run_verify("1D-measure", p);
    checked += rep.checked;
    if (k == 2) enumerated = rep.details["enumeration_checked"].get<std::uint64_t>();
    if (!rep.pass) {
      o.pass = false;
      o.detail += rep.counterexamples.front() + "; ";
    }
  }
  if (enumerated == 0) o.pass = false;
  o.detail += std::to_string(checked) + " exact closed-form matches, " + std::to_string(enumerated) +
              " enumeration cross-checks (k=2, n=1, T<=8)";
  return o;
}

Outcome check_independence() {
  VerifyParams p;
  p.m = 2;
  p.degmax = 2;
  p.rmax = 3;
  p.threads = workers();
  const auto rep = run_verify("independence", p);
  return {rep.pass && rep.checked > 0,
          std::to_string(rep.checked) + " independent pairs with mu(B n B') = mu(B) mu(B'), " + std::to_string(rep.failures) +
              " violations"};
}

Outcome check_intersections() {
  Outcome o;
  VerifyParams p;
  p.degmax = 3;
  p.rmax = 3;
  p.threads = workers();
  const auto one = run_verify("1D-intersection", p);
  p.m = 2;
  const auto big = run_verify("big-m-intersection", p);
  p.m = 1;
  const auto count = run_verify("counting-N", p);
  o.pass = one.pass && big.pass && count.pass;
  o.detail = "1D max ratio " + one.details["max_ratio"].get<std::string>() + " (frozen " +
             one.details["constant"].get<std::string>() + "), F_2[X]^2 max ratio " +
             big.details["max_ratio"].get<std::string>() + " (frozen " + big.details["constant"].get<std::string>() +
             "), N(q,q') within bound on " + std::to_string(count.checked) + " pairs, " + std::to_string(count.failures) +
             " violations";
  return o;
}

Outcome check_moments() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const auto S = SetFamily::all_nonzero(F2, 1);
  MomentOptions opt;
  opt.C = std::max(*frozen_1d_constant(2), frozen_big_m_constant());
  opt.threads = workers();
  std::string rows;
  for (int N : {3, 4, 5}) {
    auto rep = nu_exact_moments(S, 0, N, opt);
    nu_monte_carlo(S, rep, kMonteCarloSamples, kMonteCarloSeed, opt.threads);
    const bool ok = rep.variance_bound && rep.mean_within && rep.zero_within;
    o.pass = o.pass && ok;
    rows += "N=" + std::to_string(N) + " E=" + rep.E->str() + " var=" + rep.variance->str() + " mc=" + fmt(rep.mean) + "+-" +
            fmt(rep.std_error) + (ok ? "" : " (violated)") + "; ";
  }
  const double secs = seconds_since(t0);
  if (secs >= kMomentSeconds) o.pass = false;
  o.detail = rows + "C=" + rational_string(opt.C) + ", " + fmt(secs, 2) + " s";
  return o;
}

Outcome check_exponent_coherence() {
  Outcome o;
  std::string rows;
  for (std::size_t m : {1u, 2u}) {
    const auto S = SetFamily::all_nonzero(F2, m);
    const auto v = v_of_S(S, 12);
    const auto g = gamma_of_S(S, 12);
    const double vm = static_cast<double>(m);
    if (std::abs(v.value - vm) > kExponentTol || std::abs(g.value - v.value) > kExponentTol) o.pass = false;
    rows += "m=" + std::to_string(m) + " v=" + fmt(v.value) + " gamma=" + fmt(g.value) + "; ";
    for (std::size_t n : {1u, 2u})
      for (int pv : {2, 3}) {
        const auto eta = eta_of_psi(ApproxFunction::power(pv), S, n, 12);
        const double expected = static_cast<double>(m + n) / (pv + 1);
        if (std::abs(eta.value - expected) > kEtaTol) {
          o.pass = false;
          rows += "eta(m=" + std::to_string(m) + ", n=" + std::to_string(n) + ", v=" + std::to_string(pv) + ")=" + fmt(eta.value) +
                  " vs " + fmt(expected) + "; ";
        }
      }
  }
  o.detail = rows + "eta within " + fmt(kEtaTol, 2) + " of (m+n)/(v+1) for m,n in {1,2}, v in {2,3}";
  return o;
}

Outcome check_dimension_calculators() {
  Outcome o;
  int agree = 0, verdicts = 0, covers = 0;
  const auto ex = theorem1_verdict(1, 1, 1, 3);
  if (ex.dim != Rational(1, 2) || ex.regime != Regime::DIMENSION) o.pass = false;
  for (std::size_t m : {1u, 2u})
    for (std::size_t n : {1u, 2u}) {
      const Rational mm(static_cast<long long>(m)), nn(static_cast<long long>(n));
      const auto S = SetFamily::all_nonzero(F2, m);
      for (Rational v = mm / nn; v <= 4; v += Rational(1, 2)) {
        const auto c = consistency_check(S, v, n, 12);
        if (!(c.exact && c.agree && c.thm1.dim == c.thm2.dim)) {
          o.pass = false;
          o.detail += "thm1/thm2 differ at m=" + std::to_string(m) + " n=" + std::to_string(n) + " v=" + rational_string(v) + "; ";
        }
        ++agree;
      }
      for (long long a = 0; a <= 4 * static_cast<long long>(m); ++a)
        for (long long b = 0; b <= 16; ++b) {
          const Rational vS(a, 4), lambda(b, 4);
          const auto d = theorem1_verdict(m, n, vS, lambda);
          if ((d.regime == Regime::FULL_MEASURE) != (nn * lambda < vS)) o.pass = false;
          ++verdicts;
        }
    }
  for (std::size_t m : {1u, 2u}) {
    const auto S = SetFamily::all_nonzero(F2, m);
    const Rational mm(static_cast<long long>(m));
    for (long long si = 1; si <= 5; ++si)
      for (long long li = 0; li < 4; ++li) {
        const Rational s = mm * Rational(si, 5), lambda = Rational(1, 2) + Rational(li);
        const auto rep = s_length(S, 1, mm, lambda, Rational(1, 8), s, 1, 24);
        if (rep.converges != rep.eq4_holds) {
          o.pass = false;
          o.detail += "s-length flag wrong at m=" + std::to_string(m) + " s=" + rational_string(s) + " lambda=" +
                      rational_string(lambda) + "; ";
        }
        ++covers;
      }
  }
  o.detail += std::to_string(agree) + " exact thm1 = thm2 cases, " + std::to_string(verdicts) + " verdicts, " +
              std::to_string(covers) + " s-length grid points (20 per m)";
  return o;
}

Outcome check_box_count_surrogate() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  for (int v : {2, 3}) {
    auto run = default_run(SetFamily::all_nonzero(F2, 1), ApproxFunction::power(v), 1, 14);
    run.threads = workers();
    auto rep = box_count(run);
    mark_approach(rep, 8);
    const bool ok = rep.prediction && std::abs(rep.gap) <= kBoxTol && rep.decreasing_from && rep.above_prediction;
    o.pass = o.pass && ok;
    o.detail += "v=" + std::to_string(v) + " estimate " + fmt(rep.series.back().estimate) + " vs " +
                (rep.prediction ? rational_string(*rep.prediction) : "?") + (rep.decreasing_from ? ", decreasing" : ", not decreasing") +
                (rep.above_prediction ? " from above" : " crosses below") + " on T=8..14; ";
  }
  const double secs = seconds_since(t0);
  if (secs >= kBoxSeconds) o.pass = false;
  o.detail += fmt(secs, 2) + " s";
  return o;
}

Outcome check_inclusion_and_scaling() {
  Outcome o;
  std::uint64_t checked = 0, trivial = 0;
  for (std::size_t m : {1u, 2u}) {
    VerifyParams p;
    p.m = m;
    p.degmax = 5;
    const auto rep = run_verify("inclusion-eq20", p);
    checked += rep.checked;
    trivial += rep.details["trivial"].get<std::uint64_t>();
    if (!rep.pass) {
      o.pass = false;
      o.detail += rep.counterexamples.front() + "; ";
    }
  }
  std::uint64_t scaled = 0;
  for (std::size_t m : {1u, 2u}) {
    VerifyParams p;
    p.m = m;
    p.n = m;
    p.samples = 100;
    p.seed = 7;
    const auto rep = run_verify("scaling", p);
    scaled += rep.checked;
    o.pass = o.pass && rep.pass;
  }
  o.detail += std::to_string(checked) + " inclusion checks (" + std::to_string(trivial) + " trivial), " + std::to_string(scaled) +
              " scaling identities on 100 cylinders per shape";
  return o;
}

std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  status = pclose(pipe);
  return out;
}

Outcome check_determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) return {false, "no CLI path given"};
  const std::vector<std::string> commands{
      "verify 1D-measure --degmax 3",
      "verify independence --m 2 --degmax 1 --rmax 2",
      "verify scaling --m 2 --samples 20 --seed 3",
      "measure --q [[1,1],[0,1]] --r 2 --n 2",
      "exponents vS --m 2 --Nmax 10",
      "exponents eta --v 3 --n 2",
      "dimension thm1 --m 1 --n 1 --vS 1 --lambda 3",
      "dimension thm2 --m 2 --n 1 --eta 3/5",
      "dimension slength --lambda 3 --s 3/5 --Nmax 12",
      "dimension consistency --m 2 --v 4",
      "stochastic moments --Nt 4 --samples 3000 --seed 11",
      "stochastic borel-cantelli --v 1/2 --hi 4",
      "boxcount --v 2 --T 10",
  };
  const auto dir = std::filesystem::temp_directory_path();
  int identical = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    int s1 = 0, s4 = 0, sc = 0;
    const std::string base = "\"" + cli + "\" " + commands[i];
    const std::string a = run_capture(base + " --threads 1", s1);
    const std::string b = run_capture(base + " --threads 4", s4);
    const auto cfg = dir / ("ffdioph_acceptance_" + std::to_string(i) + ".json");
    { std::ofstream(cfg) << a; }
    // Rerun from the echo alone: its command path plus the file as --config.
    std::string path;
    try {
      path = nlohmann::json::parse(a).at("command").get<std::string>();
    } catch (const std::exception&) {
    }
    const std::string c = run_capture("\"" + cli + "\" " + path + " --config \"" + cfg.string() + "\" --threads 4", sc);
    std::filesystem::remove(cfg);
    if (s1 != 0 || s4 != 0 || sc != 0 || a != b || a != c || a.empty()) {
      o.pass = false;
      o.detail += "\"" + commands[i] + "\" differs or failed; ";
    } else {
      ++identical;
    }
  }
  o.detail += std::to_string(identical) + "/" + std::to_string(commands.size()) +
              " commands byte-identical across --threads 1, --threads 4 and a rerun from the config echo";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else {
      cli = a;
    }
  }
  using Check = std::function<Outcome()>;
  const std::vector<std::pair<std::string, Check>> criteria{
      {"totient", Check(check_totient)},
      {"1D-measure", Check(check_one_d_measure)},
      {"independence", Check(check_independence)},
      {"intersection constants", Check(check_intersections)},
      {"moments", Check(check_moments)},
      {"exponent coherence", Check(check_exponent_coherence)},
      {"dimension calculators", Check(check_dimension_calculators)},
      {"box-count surrogate", Check(check_box_count_surrogate)},
      {"inclusion and scaling", Check(check_inclusion_and_scaling)},
      {"determinism", Check([cli] { return check_determinism(cli); })},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << (i + 1) << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << ": " << o.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
