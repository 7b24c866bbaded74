#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffdioph/json_io.hpp"

using namespace ffdioph;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

struct Common {
  std::uint32_t k = 2;
  std::size_t m = 1, n = 1;
  std::string family = "all";
  int base = 2;
  std::string degrees, alphas, members;
  std::string psi = "power";
  std::string v = "2", a = "0", table;
  bool restrict_psi = false;
  int N_max = 12;
};

struct Globals {
  std::optional<unsigned> threads;
  std::string format = "json";
  std::string config;
  std::string output;
};

void add_field(CLI::App* c, Common& o) {
  c->add_option("--k", o.k, "field size (prime power)");
}

void add_family(CLI::App* c, Common& o) {
  c->add_option("--m", o.m, "rows of A");
  c->add_option("--family,--S", o.family, "all | monic | lacunary | pattern | explicit")
      ->check(CLI::IsMember({"all", "monic", "lacunary", "pattern", "explicit"}));
  c->add_option("--base", o.base, "lacunary base");
  c->add_option("--degrees", o.degrees, "lacunary degree list, e.g. 2,5,9");
  c->add_option("--alphas", o.alphas, "degree pattern fractions, e.g. 1,1/2");
  c->add_option("--members", o.members, "explicit members as JSON, e.g. [[[1,1]],[[0,1]]]");
}

void add_psi(CLI::App* c, Common& o) {
  c->add_option("--psi", o.psi, "power | powerlog | table")->check(CLI::IsMember({"power", "powerlog", "table"}));
  c->add_option("--v", o.v, "exponent of |q|^-v");
  c->add_option("--a", o.a, "log exponent for powerlog");
  c->add_option("--table", o.table, "JSON object block -> exponent or null");
  c->add_flag("--restrict", o.restrict_psi, "restrict psi to S");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Json parse_json_arg(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DomainError(what + " is not valid JSON: " + e.what());
  }
}

Polynomial poly_from_json(const FieldSpec& f, const Json& j) {
  if (!j.is_array()) throw DomainError("a polynomial is a JSON array of coefficients, lowest degree first");
  std::vector<Rep> c;
  for (const auto& x : j) {
    if (!x.is_number_unsigned() || x.get<std::uint64_t>() >= f.k())
      throw DomainError("polynomial coefficient out of range for " + f.describe());
    c.push_back(static_cast<Rep>(x.get<std::uint64_t>()));
  }
  return Polynomial(f, std::move(c));
}

// [c0, c1, ...] is a single coordinate; [[...], [...]] a vector.
PolyVector vector_from_json(const FieldSpec& f, const Json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("q must be a non-empty JSON array");
  if (!j.front().is_array()) return PolyVector({poly_from_json(f, j)});
  std::vector<Polynomial> e;
  for (const auto& x : j) e.push_back(poly_from_json(f, x));
  return PolyVector(std::move(e));
}

SetFamily make_family(const Common& o) {
  const auto f = FieldSpec::of_size(o.k);
  if (o.family == "all") return SetFamily::all_nonzero(f, o.m);
  if (o.family == "monic") return SetFamily::monic_coords(f, o.m);
  if (o.family == "lacunary") {
    if (o.degrees.empty()) return SetFamily::lacunary(f, o.m, o.base);
    std::vector<int> d;
    for (const auto& s : split_list(o.degrees)) d.push_back(std::stoi(s));
    return SetFamily::lacunary_list(f, o.m, d);
  }
  if (o.family == "pattern") {
    std::vector<Rational> al;
    for (const auto& s : split_list(o.alphas)) al.push_back(parse_rational(s));
    return SetFamily::degree_pattern(f, al);
  }
  const Json j = parse_json_arg(o.members, "--members");
  if (!j.is_array()) throw DomainError("--members must be a JSON array of vectors");
  std::vector<PolyVector> qs;
  for (const auto& q : j) qs.push_back(vector_from_json(f, q));
  return SetFamily::explicit_list(f, o.m, qs);
}

ApproxFunction make_psi(const Common& o, const SetFamily& S) {
  ApproxFunction psi = ApproxFunction::power(parse_rational(o.v));
  if (o.psi == "powerlog") psi = ApproxFunction::power_log(parse_rational(o.v), parse_rational(o.a));
  if (o.psi == "table") {
    const Json j = parse_json_arg(o.table, "--table");
    if (!j.is_object()) throw DomainError("--table must be a JSON object");
    std::map<int, std::optional<std::int64_t>> t;
    for (const auto& [key, val] : j.items()) {
      if (!val.is_null() && !val.is_number_integer()) throw DomainError("--table values must be integers or null");
      t[std::stoi(key)] = val.is_null() ? std::nullopt : std::optional<std::int64_t>(val.get<std::int64_t>());
    }
    psi = ApproxFunction::table(t);
  }
  return o.restrict_psi ? ApproxFunction::restricted(psi, S) : psi;
}

// Every option of the leaf command except help, in declaration order.
Json config_echo(const CLI::App* leaf) {
  Json cfg = Json::object();
  for (const CLI::Option* opt : leaf->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    if (opt->get_expected_max() == 0) {
      cfg[name] = opt->count() > 0 && opt->as<bool>();
      continue;
    }
    const auto& res = opt->results();
    std::string value = res.empty() ? opt->get_default_str() : res.back();
    cfg[name] = value.empty() ? Json(nullptr) : Json(value);
  }
  return cfg;
}

std::string command_path(const CLI::App* leaf) {
  std::string path;
  for (const CLI::App* a = leaf; a && a->get_parent(); a = a->get_parent()) path = a->get_name() + (path.empty() ? "" : " " + path);
  return path;
}

const CLI::App* leaf_of(const CLI::App& app) {
  const CLI::App* cur = &app;
  for (;;) {
    const auto subs = cur->get_subcommands();
    if (subs.empty()) return cur;
    cur = subs.front();
  }
}

// Folds a JSON config file into the argument list: keys become --key value,
// flags --key, and command-line values win over the file. A top-level
// "config" object (the echo of an earlier run) is accepted as well.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw CLI::ValidationError("--config", "malformed JSON in " + path + ": " + e.what());
  }
  if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
  if (!j.is_object()) throw CLI::ValidationError("--config", "schema error: top level must be a JSON object");
  auto given = [&](const std::string& key) {
    for (const auto& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  for (const auto& [key, val] : j.items()) {
    if (key == "config" || given(key) || val.is_null()) continue;
    if (val.is_boolean()) {
      if (val.get<bool>()) args.push_back("--" + key);
      continue;
    }
    if (val.is_object()) throw CLI::ValidationError("--config", "schema error: key \"" + key + "\" must be a scalar or array");
    args.push_back("--" + key);
    args.push_back(val.is_string() ? val.get<std::string>() : val.dump());
  }
  return args;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_null()) return "";
  return csv_escape(v.dump());
}

struct Output {
  Json result = Json::object();
  // Table for --format csv: header plus rows.
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
  int code = kOk;
};

// Scalars of a flat object as a two-column table.
void key_value_rows(Output& out, const Json& obj) {
  out.header = {"key", "value"};
  for (const auto& [key, val] : obj.items())
    if (!val.is_object() && !val.is_array()) out.rows.push_back({key, val});
}

void emit(const Output& out, const Json& echo, const std::string& command, const Globals& g) {
  std::ostringstream s;
  if (g.format == "csv") {
    s << "# " << command << " " << echo.dump() << "\n";
    for (std::size_t i = 0; i < out.header.size(); ++i) s << (i ? "," : "") << out.header[i];
    s << "\n";
    for (const auto& row : out.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << csv_cell(row[i]);
      s << "\n";
    }
  } else {
    Json doc{{"command", command}, {"config", echo}};
    for (const auto& [key, val] : out.result.items()) doc[key] = val;
    s << doc.dump(2) << "\n";
  }
  if (g.output.empty()) {
    std::cout << s.str();
  } else {
    std::ofstream f(g.output);
    if (!f) throw DomainError("cannot write " + g.output);
    f << s.str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric Diophantine approximation over F_k((X^-1)) at desk scale", "ffdioph"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  Globals g;
  Common c;
  app.add_option("--threads", g.threads, "worker threads (default: FFDIOPH_THREADS, else 1)");
  app.add_option("--format", g.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", g.config, "JSON file of option values");
  app.add_option("--output", g.output, "write to a file instead of stdout");

  // verify
  VerifyParams vp;
  std::string lemma, v_list = "2,3", delta_s = "1/2", C_s, phi_lower_s;
  auto* verify = app.add_subcommand("verify", "exhaustive lemma checks");
  {
    std::string names;
    for (const auto& [name, fn] : verify_registry()) names += (names.empty() ? "" : ", ") + name;
    verify->add_option("lemma,--lemma", lemma, "one of: " + names)->required();
  }
  verify->add_option("--k", vp.k);
  verify->add_option("--m", vp.m);
  verify->add_option("--n", vp.n);
  verify->add_option("--degmax", vp.degmax);
  verify->add_option("--rmax", vp.rmax);
  verify->add_option("--nmax", vp.nmax, "largest n for 1D-measure");
  verify->add_option("--Nmax", vp.N_max);
  verify->add_option("--brute-T", vp.brute_T, "enumeration cross-check depth");
  verify->add_option("--samples", vp.samples);
  verify->add_option("--seed", vp.seed);
  verify->add_option("--family", vp.family);
  verify->add_option("--delta", delta_s);
  verify->add_option("--v", v_list, "comma separated exponents");
  verify->add_option("--C", C_s, "intersection constant override");
  verify->add_option("--phi-lower", phi_lower_s, "required lower bound on Phi(q)/|q|");

  // measure
  std::string q_s, kind = "B";
  std::int64_t r = 1;
  std::optional<std::int64_t> depth;
  auto* measure = app.add_subcommand("measure", "exact Haar measure of B, B' or B''");
  add_field(measure, c);
  measure->add_option("--q", q_s, "JSON coefficients, e.g. [1,1] or [[1,1],[0,1]]")->required();
  measure->add_option("--kind", kind, "B | Bprime | Bdprime")->check(CLI::IsMember({"B", "Bprime", "Bdprime"}));
  measure->add_option("--r", r, "epsilon = k^-r");
  measure->add_option("--n", c.n);
  measure->add_option("--T", depth, "coefficient depth (default: sufficient)");

  // exponents
  std::string quantity;
  std::string grid_hi = "8", grid_step = "1/2";
  auto* exponents = app.add_subcommand("exponents", "exponent estimators");
  exponents->add_option("quantity,--quantity", quantity, "vS | gamma | lambda | eta | delta | blocks | witnesses")
      ->required()
      ->check(CLI::IsMember({"vS", "gamma", "lambda", "eta", "delta", "blocks", "witnesses"}));
  add_field(exponents, c);
  add_family(exponents, c);
  add_psi(exponents, c);
  exponents->add_option("--n", c.n);
  exponents->add_option("--Nmax", c.N_max);
  exponents->add_option("--delta", delta_s, "witness slack for 'witnesses'");
  exponents->add_option("--grid-hi", grid_hi, "upper end of the v-grid for 'delta'");
  exponents->add_option("--grid-step", grid_step);

  // dimension
  std::string vS_s, lambda_s, eta_s, eps_s = "1/8", s_s;
  int M = 0;
  auto* dimension = app.add_subcommand("dimension", "dimension formulas");
  dimension->require_subcommand(1);
  auto* thm1 = dimension->add_subcommand("thm1", "Hausdorff dimension from v(S) and lambda(psi)");
  thm1->add_option("--m", c.m);
  thm1->add_option("--n", c.n);
  thm1->add_option("--vS", vS_s)->required();
  thm1->add_option("--lambda", lambda_s)->required();
  auto* thm2 = dimension->add_subcommand("thm2", "Hausdorff dimension from eta(psi)");
  thm2->add_option("--m", c.m);
  thm2->add_option("--n", c.n);
  thm2->add_option("--eta", eta_s)->required();
  auto* slength = dimension->add_subcommand("slength", "s-length of the natural cover");
  add_field(slength, c);
  add_family(slength, c);
  slength->add_option("--n", c.n);
  slength->add_option("--vS", vS_s, "default: closed form of the family");
  slength->add_option("--lambda", lambda_s)->required();
  slength->add_option("--eps", eps_s);
  slength->add_option("--s", s_s)->required();
  slength->add_option("--M", M);
  slength->add_option("--Nmax", c.N_max);
  auto* consistency = dimension->add_subcommand("consistency", "both theorems on |q|^-v restricted to S");
  add_field(consistency, c);
  add_family(consistency, c);
  consistency->add_option("--n", c.n);
  consistency->add_option("--v", c.v);
  consistency->add_option("--Nmax", c.N_max);

  // stochastic
  int t = 1;
  std::optional<int> N_t;
  std::uint64_t samples = 0, seed = 1;
  std::string bc_lo = "1", bc_hi = "5";
  auto* stochastic = app.add_subcommand("stochastic", "moments of the counting variable");
  stochastic->require_subcommand(1);
  auto* moments = stochastic->add_subcommand("moments", "exact moments and Monte Carlo");
  add_field(moments, c);
  add_family(moments, c);
  moments->add_option("--n", c.n);
  moments->add_option("--t", t, "index into the large-block witnesses N >= 2");
  moments->add_option("--Nt", N_t, "block degree (overrides --t)");
  moments->add_option("--delta", delta_s);
  moments->add_option("--vS", vS_s, "default: closed form of the family");
  moments->add_option("--C", C_s, "constant in the variance bound");
  moments->add_option("--Nmax", c.N_max, "search range for witnesses");
  moments->add_option("--samples", samples);
  moments->add_option("--seed", seed);
  auto* bc = stochastic->add_subcommand("borel-cantelli", "(sum mu)^2 / sum sum mu(intersection) for |q|^-v");
  add_field(bc, c);
  add_family(bc, c);
  bc->add_option("--n", c.n);
  bc->add_option("--v", c.v);
  bc->add_option("--lo", bc_lo);
  bc->add_option("--hi", bc_hi);

  // boxcount
  int T = 10, from = 8;
  std::optional<int> J, J_min;
  std::string mode = "propagate";
  auto* box = app.add_subcommand("boxcount", "box-counting surrogate of the dimension");
  add_field(box, c);
  add_family(box, c);
  add_psi(box, c);
  box->add_option("--n", c.n);
  box->add_option("--T", T);
  box->add_option("--J", J, "largest deg q (default: ceil(T/(1+lambda)))");
  box->add_option("--Jmin", J_min, "smallest deg q (default: J)");
  box->add_option("--from", from, "first depth of the approach check");
  box->add_option("--mode", mode)->check(CLI::IsMember({"propagate", "exhaustive"}));

  try {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    args = merge_config(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const CLI::App* leaf = leaf_of(app);
  const std::string command = command_path(leaf);
  Output out;
  try {
    const unsigned threads = resolve_threads(g.threads);
    if (*verify) {
      vp.threads = threads;
      vp.delta = parse_rational(delta_s);
      vp.v.clear();
      for (const auto& s : split_list(v_list)) vp.v.push_back(parse_rational(s));
      if (!C_s.empty()) vp.C = parse_rational(C_s);
      if (!phi_lower_s.empty()) vp.phi_lower = parse_rational(phi_lower_s);
      const auto rep = run_verify(lemma, vp);
      out.result = json::verify(rep);
      out.header = {"lemma", "pass", "checked", "failures", "counterexample"};
      out.rows.push_back({rep.lemma, rep.pass, rep.checked, rep.failures, ""});
      for (const auto& ce : rep.counterexamples) out.rows.push_back({rep.lemma, rep.pass, rep.checked, rep.failures, ce});
      out.code = rep.pass ? kOk : kFailed;
    } else if (*measure) {
      const auto f = FieldSpec::of_size(c.k);
      const PolyVector q = vector_from_json(f, parse_json_arg(q_s, "--q"));
      ResonantSet s = make_B(q, r);
      if (kind == "Bprime") {
        if (q.m() != 1) throw DomainError("B' needs a single polynomial");
        s = make_B_prime(q[0], r);
      }
      if (kind == "Bdprime") s = make_B_dprime(q, r);
      const std::int64_t TT = depth ? *depth : sufficient_depth({s});
      const auto mu = measure_of({s}, c.n, TT);
      const auto closed = kind == "B" ? closed_form_B(c.k, r, c.n) : closed_form_coprime(s, c.n);
      out.result = {{"q", q.str()}, {"T", TT}, {"measure", json::measure(mu)}, {"closed_form", json::measure(closed)},
                    {"matches", mu == closed}};
      out.header = {"kind", "q", "r", "n", "T", "num", "exp", "measure", "closed_form"};
      out.rows.push_back({kind, q.str(), r, c.n, TT, mu.num().str(), mu.exp(), mu.str(), closed.str()});
    } else if (*exponents) {
      const auto S = make_family(c);
      const auto psi = make_psi(c, S);
      const SetFamily ambient = c.restrict_psi ? SetFamily::all_nonzero(S.field(), S.m()) : S;
      if (quantity == "blocks") {
        Json rows = Json::array();
        out.header = {"N", "count", "cumulative"};
        for (const auto& b : block_counts(S, c.N_max)) {
          rows.push_back({{"N", b.N}, {"count", b.count.str()}, {"cumulative", b.cumulative.str()}});
          out.rows.push_back({b.N, b.count.str(), b.cumulative.str()});
        }
        out.result = {{"family", S.describe()}, {"blocks", rows}};
      } else if (quantity == "witnesses") {
        const auto vS = S.oracle_v();
        if (!vS) throw DomainError("family has no closed-form v(S)");
        const auto w = large_blocks_witnesses(S, *vS, parse_rational(delta_s), c.N_max);
        out.result = {{"family", S.describe()}, {"witnesses", w}};
        out.header = {"N"};
        for (int N : w) out.rows.push_back({N});
      } else {
        Estimate e;
        Json extra = Json::object();
        if (quantity == "vS") e = v_of_S(S, c.N_max);
        if (quantity == "gamma") e = gamma_of_S(S, c.N_max);
        if (quantity == "lambda") e = lambda_of_psi(psi, ambient, c.N_max);
        if (quantity == "eta") e = eta_of_psi(psi, ambient, c.n, c.N_max);
        if (quantity == "delta") {
          const auto d = delta_sup(psi, c.n, ambient, arithmetic_grid(0, parse_rational(grid_hi), parse_rational(grid_step)), c.N_max);
          e = d.value;
          extra["argmax"] = json::rational(d.argmax);
        }
        out.result = {{"family", S.describe()}, {"psi", psi.describe()}, {"estimate", json::estimate(e)}};
        for (const auto& [key, val] : extra.items()) out.result[key] = val;
        out.header = {"quantity", "value", "exact", "converged"};
        out.rows.push_back({quantity, e.value, json::rational(e.exact), e.converged});
      }
    } else if (*thm1 || *thm2) {
      const auto d = *thm1 ? theorem1_verdict(c.m, c.n, parse_rational(vS_s), parse_rational(lambda_s))
                           : theorem2_verdict(c.m, c.n, parse_rational(eta_s));
      out.result = json::verdict(d);
      key_value_rows(out, out.result);
    } else if (*slength) {
      const auto S = make_family(c);
      Rational vS;
      if (!vS_s.empty()) {
        vS = parse_rational(vS_s);
      } else if (const auto o = S.oracle_v()) {
        vS = *o;
      } else {
        throw DomainError("family has no closed-form v(S); pass --vS");
      }
      const auto rep = s_length(S, c.n, vS, parse_rational(lambda_s), parse_rational(eps_s), parse_rational(s_s), M, c.N_max);
      out.result = json::cover(rep);
      out.header = {"N", "q_count", "log_term"};
      for (const auto& b : rep.blocks) out.rows.push_back({b.N, b.q_count.str(), b.log_term});
    } else if (*consistency) {
      const auto rep = consistency_check(make_family(c), parse_rational(c.v), c.n, c.N_max);
      out.result = json::consistency(rep);
      out.header = {"route", "regime", "dim"};
      out.rows.push_back({"thm1", regime_name(rep.thm1.regime), rational_string(rep.thm1.dim)});
      out.rows.push_back({"thm2", regime_name(rep.thm2.regime), rational_string(rep.thm2.dim)});
    } else if (*moments) {
      const auto S = make_family(c);
      MomentOptions opt;
      opt.n = c.n;
      opt.delta = parse_rational(delta_s);
      if (!vS_s.empty()) opt.vS = parse_rational(vS_s);
      if (!C_s.empty()) opt.C = parse_rational(C_s);
      opt.threads = threads;
      int block = 0;
      if (N_t) {
        block = *N_t;
      } else {
        const auto vS = opt.vS ? opt.vS : S.oracle_v();
        if (!vS) throw DomainError("family has no closed-form v(S); pass --vS or --Nt");
        std::vector<int> w;
        for (int N : large_blocks_witnesses(S, *vS, opt.delta, c.N_max))
          if (N >= 2) w.push_back(N);
        if (t < 1 || static_cast<std::size_t>(t) > w.size())
          throw DomainError("--t must lie in 1.." + std::to_string(w.size()) + " for --Nmax " + std::to_string(c.N_max));
        block = w[static_cast<std::size_t>(t - 1)];
      }
      auto rep = nu_exact_moments(S, t, block, opt);
      if (samples > 0) nu_monte_carlo(S, rep, samples, seed, threads);
      out.result = json::moments(rep);
      Json flat = out.result;
      if (out.result.contains("monte_carlo"))
        for (const auto& [key, val] : out.result["monte_carlo"].items()) flat[key] = val;
      for (const char* key : {"E", "E2", "variance", "zero_measure"})
        flat[key] = out.result[key].is_null() ? Json(nullptr) : out.result[key]["str"];
      key_value_rows(out, flat);
    } else if (*bc) {
      const auto S = make_family(c);
      const auto events = power_events(S, parse_rational(c.v), std::stoi(bc_lo), std::stoi(bc_hi));
      const auto ratio = borel_cantelli_ratio(events, c.n, threads);
      out.result = {{"family", S.describe()}, {"events", events.size()}, {"ratio", json::rational(ratio)}};
      key_value_rows(out, out.result);
    } else if (*box) {
      const auto S = make_family(c);
      const auto psi = make_psi(c, S);
      const SetFamily ambient = c.restrict_psi ? SetFamily::all_nonzero(S.field(), S.m()) : S;
      BoxCountRun run = J ? BoxCountRun{ambient, psi, c.n, T, *J, *J} : default_run(ambient, psi, c.n, T);
      run.J_min = J_min ? *J_min : run.J;
      run.mode = mode == "exhaustive" ? BoxMode::EXHAUSTIVE : BoxMode::PROPAGATE;
      run.threads = threads;
      auto rep = box_count(run);
      mark_approach(rep, std::min(from, T));
      const auto sens = cutoff_sensitivity(run);
      out.result = json::boxcount(rep, sens);
      out.result["J"] = run.J;
      out.result["J_min"] = run.J_min;
      out.header = {"T", "survivors", "estimate", "prediction"};
      for (const auto& row : rep.series)
        out.rows.push_back({row.T, row.survivors.str(), row.estimate, json::rational(rep.prediction)});
    }
    emit(out, config_echo(leaf), command, g);
  } catch (const ScaleError& e) {
    std::cerr << "scale error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << "\n";
    return kUsage;
  }
  return out.code;
}
