#include "dini/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "dini/analysis.hpp"
#include "dini/functionals.hpp"

namespace dini {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"trace",  "monotone", "three-sphere", "order",
                                              "domain", "ledger",   "solve"};
  return names;
}

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json unwrap_config(const json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  if (j.contains("config") && j.contains("command") && j["config"].is_object()) return j["config"];
  return j;
}

namespace {

// Reads cfg[key], inserting the default when absent so the emitted config is complete.
// Returns a copy: insertions into an ordered object invalidate references.
json with_default(json& cfg, const std::string& key, const json& fallback) {
  if (!cfg.contains(key)) cfg[key] = fallback;
  return cfg[key];
}

Vec2 point_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw DomainError(what + " must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> numbers_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw DomainError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw DomainError(what + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// ---------------------------------------------------------------- solve

std::function<double(Vec2)> data_function(const json& spec, bool& exact) {
  std::string kind = get_string(spec, "kind", "zero");
  exact = true;
  if (kind == "zero") return [](Vec2) { return 0.0; };
  if (kind == "imz") {
    int k = get_int(spec, "kappa", 2);
    if (k < 1) throw DomainError("imz data needs kappa >= 1");
    return [k](Vec2 x) { return std::pow(std::complex<double>(x.x, -x.y), k).imag(); };
  }
  if (kind == "product") return [](Vec2 x) { return x.x * x.y; };
  if (kind == "depth") {
    exact = false;
    double scale = get_number(spec, "scale", 1.0);
    return [scale](Vec2 x) { return -x.y / scale; };
  }
  throw DomainError("unknown data kind '" + kind + "'");
}

struct SolveRun {
  FdResult result;
  json chart_spec;
  CoefficientField coeff;
  Potential potential;
  double max_error = -1.0;  // only when the data is an exact solution
};

SolveRun run_solve(json& spec) {
  if (!spec.is_object()) throw DomainError("solve spec must be an object");
  SolveRun run;
  run.chart_spec = with_default(spec, "domain", json{{"kind", "flat"}, {"R0", 1.0}});
  FdProblem prob;
  prob.chart = chart_from_json(run.chart_spec);
  prob.half_width = with_default(spec, "half_width", 0.5).get<double>();
  prob.depth = with_default(spec, "depth", 0.5).get<double>();
  prob.h = with_default(spec, "h", prob.half_width / 32.0).get<double>();
  run.coeff = coefficients_from_json(with_default(spec, "coefficients", json{{"kind", "identity"}}));
  run.potential = potential_from_json(with_default(spec, "potential", json{{"kind", "zero"}}));
  prob.coeff = run.coeff;
  prob.potential = run.potential;
  bool exact = false;
  prob.data = data_function(with_default(spec, "data", json{{"kind", "imz"}, {"kappa", 2}}), exact);
  FdOptions opts;
  opts.tol = with_default(spec, "tol", 1e-10).get<double>();
  run.result = fd_solve(prob, opts);
  // Exactness only holds for solutions of the homogeneous constant-coefficient problem.
  if (exact && prob.potential.M <= 1.0 && get_string(spec["potential"], "kind", "zero") == "zero")
    run.max_error = grid_max_error(*run.result.grid, prob.data);
  return run;
}

// ---------------------------------------------------------------- cases

struct Case {
  std::string name;
  SolutionField field;
  CoefficientField coeff;
  Vec2 anchor;
  bool boundary = false;
  double r0 = 0.0;
  double window = 1.0;
  int kappa = -1;
  bool grid = false;
};

Case resolve_case(json& cfg) {
  if (!cfg.contains("case")) throw DomainError("config needs a 'case'");
  json& c = cfg["case"];
  Case out;
  if (c.is_string()) {
    CatalogEntry e = catalog_lookup(c.get<std::string>());
    out.name = e.name;
    out.field = e.field;
    out.coeff = e.coeff;
    out.anchor = e.anchor;
    out.boundary = e.boundary_anchor;
    out.r0 = e.r0;
    out.window = e.window;
    out.kappa = e.kappa;
  } else if (c.is_object() && c.contains("solve")) {
    json spec = c["solve"];
    SolveRun run = run_solve(spec);
    c["solve"] = spec;
    out.name = get_string(c, "name", "fd_solution");
    out.field = grid_solution(run.result.grid, run.potential, out.name);
    out.coeff = run.coeff;
    out.boundary = true;
    out.window = std::min(c["solve"]["half_width"].get<double>(), c["solve"]["depth"].get<double>());
    out.r0 = out.window / 4.0;
    out.grid = true;
  } else if (c.is_object() && c.contains("grid")) {
    if (!c["grid"].is_string()) throw DomainError("case.grid must be a file path");
    auto g = grid_from_json(read_json_file(c["grid"].get<std::string>()));
    out.name = get_string(c, "name", "grid_field");
    Potential V = potential_from_json(c.value("potential", json{{"kind", "zero"}}));
    out.coeff = coefficients_from_json(c.value("coefficients", json{{"kind", "identity"}}));
    out.window = std::min(-g->xi0(), -g->t0());
    out.field = grid_solution(g, V, out.name);
    out.boundary = true;
    out.r0 = out.window / 4.0;
    out.grid = true;
  } else {
    throw DomainError("case must be a catalog name or an object with 'solve' or 'grid'");
  }
  if (cfg.contains("anchor")) out.anchor = point_from_json(cfg["anchor"], "anchor");
  cfg["anchor"] = {out.anchor.x, out.anchor.y};
  return out;
}

Probe case_probe(json& cfg, const Case& cs) {
  Probe p = make_probe(cs.field, cs.coeff, cs.anchor, default_alpha(cs.field));
  if (cfg.contains("alpha") && !cfg["alpha"].is_null()) p.alpha = get_number(cfg, "alpha");
  cfg["alpha"] = p.alpha;
  json q = with_default(cfg, "quadrature", json::object());
  p.quad.angular = get_int(q, "angular", p.quad.angular);
  p.quad.radial = get_int(q, "radial", p.quad.radial);
  p.quad.tol = get_number(q, "tol", p.quad.tol);
  if (p.quad.angular < 8 || p.quad.radial < 2 || !(p.quad.tol > 0.0))
    throw DomainError("quadrature needs angular >= 8, radial >= 2, tol > 0");
  p.quad.max_angular = std::max(p.quad.max_angular, p.quad.angular);
  p.quad.max_radial = std::max(p.quad.max_radial, p.quad.radial);
  q["angular"] = p.quad.angular;
  q["radial"] = p.quad.radial;
  q["tol"] = p.quad.tol;
  cfg["quadrature"] = q;
  // A = I everywhere needs no frame.
  if (cs.coeff.name == "identity") p.waive_normalization = true;
  return p;
}

std::vector<double> resolve_radii(json& cfg, const Case& cs, const json& fallback) {
  const json spec = with_default(cfg, "radii", fallback);
  std::vector<double> r;
  if (spec.is_array()) {
    r = numbers_from_json(spec, "radii");
  } else if (spec.is_object() && spec.contains("grid")) {
    const json& g = spec["grid"];
    double a = get_number(g, "min"), b = get_number(g, "max");
    int n = get_int(g, "count", 16);
    if (!(a > 0.0 && b > a && n >= 2)) throw DomainError("radii.grid needs 0 < min < max, count >= 2");
    for (int i = 0; i < n; ++i) r.push_back(a * std::pow(b / a, double(i) / (n - 1)));
  } else if (spec.is_object() && spec.contains("dyadic")) {
    const json& d = spec["dyadic"];
    double r0 = get_number(d, "r0", std::min(0.5, 0.5 * cs.window));
    int n = get_int(d, "count", 8);
    if (!(r0 > 0.0) || n < 1) throw DomainError("radii.dyadic needs r0 > 0, count >= 1");
    for (int i = n - 1; i >= 0; --i) r.push_back(std::ldexp(r0, -i));
  } else {
    throw DomainError("radii must be an array, {grid:{...}} or {dyadic:{...}}");
  }
  for (size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) throw DomainError("radii must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("radii must be increasing");
    if (r[i] > cs.window) throw DomainError("radius " + fmt_num(r[i]) + " exceeds the case window");
  }
  return r;
}

json base_report(const std::string& command, const std::string& case_name, const json& cfg) {
  json rep;
  rep["case"] = case_name;
  rep["command"] = command;
  rep["config"] = cfg;
  rep["constants"] = json::object();
  rep["pass"] = false;
  rep["witnesses"] = json::array();
  return rep;
}

// ---------------------------------------------------------------- commands

CommandOutput cmd_trace(json cfg) {
  Case cs = resolve_case(cfg);
  Probe p = case_probe(cfg, cs);
  auto radii = resolve_radii(cfg, cs, json{{"dyadic", {{"count", 8}}}});
  FrequencyTrace t = frequency_trace(p, radii);
  std::ostringstream csv;
  csv << "r,H,I,N,valid\n";
  bool all = t.converged;
  for (size_t i = 0; i < radii.size(); ++i) {
    csv << fmt_num(t.radii[i]) << ',' << fmt_num(t.H[i]) << ',' << fmt_num(t.I[i]) << ','
        << fmt_num(t.N[i]) << ',' << (t.valid[i] ? 1 : 0) << '\n';
    all = all && t.valid[i];
  }
  CommandOutput out;
  out.report = base_report("trace", cs.name, cfg);
  out.report["constants"] = {{"alpha", t.alpha},
                             {"M", std::max(1.0, cs.field.potential.M)},
                             {"angular", t.angular},
                             {"radial", t.radial},
                             {"converged", t.converged}};
  out.report["pass"] = all;
  out.files.emplace_back("trace.csv", csv.str());
  return out;
}

CommandOutput cmd_monotone(json cfg) {
  Case cs = resolve_case(cfg);
  Probe p = case_probe(cfg, cs);
  auto radii = resolve_radii(
      cfg, cs, json{{"grid", {{"min", 0.01}, {"max", std::min(0.3, 0.3 * cs.window)}, {"count", 16}}}});
  double slack = with_default(cfg, "slack", cs.grid ? 1e-4 : 1e-8).get<double>();
  double box = with_default(cfg, "box", 1e3).get<double>();
  const double M = std::max(1.0, cs.field.potential.M);
  FrequencyTrace t = frequency_trace(p, radii);
  MonotonicityReport m = fit_monotonicity(t, M, slack, box);
  std::ostringstream csv;
  csv << "r,N,adjusted\n";
  for (size_t i = 0; i < radii.size(); ++i) {
    double adj = std::exp(m.C1 * radii[i]) * (t.N[i] + m.C2 * M * radii[i] * radii[i]);
    csv << fmt_num(radii[i]) << ',' << fmt_num(t.N[i]) << ',' << fmt_num(adj) << '\n';
  }
  CommandOutput out;
  out.report = base_report("monotone", cs.name, cfg);
  out.report["constants"] = {{"M", M},
                             {"alpha", p.alpha},
                             {"C1", m.C1},
                             {"C2", m.C2},
                             {"max_violation", m.max_violation},
                             {"violation_at_zero", m.violation_at_zero},
                             {"valid_radii", m.valid_radii}};
  for (auto [c1, c2] : m.pareto)
    out.report["witnesses"].push_back({{"name", "pareto"}, {"C1", c1}, {"C2", c2}});
  out.report["pass"] = m.pass;
  out.files.emplace_back("monotone.csv", csv.str());
  return out;
}

json three_sphere_json(const std::string& kind, const ThreeSphereReport& r) {
  return {{"name", kind},
          {"r1", r.r1},
          {"r2", r.r2},
          {"r3", r.r3},
          {"alpha", r.a},
          {"beta", r.b},
          {"exponent_sum", r.b / (r.a + r.b) + r.a / (r.a + r.b)},
          {"Cbar", r.Cbar},
          {"CO", r.CO},
          {"C", r.C},
          {"Cprime", r.Cprime},
          {"Cstar", r.Cstar},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"C_needed", r.C_needed},
          {"C_pred", r.C_pred},
          {"bridge", r.bridge},
          {"sup", {r.sup1, r.sup2, r.sup3}},
          {"pass", r.pass}};
}

CommandOutput cmd_three_sphere(json cfg) {
  Case cs = resolve_case(cfg);
  Probe p = case_probe(cfg, cs);
  const json triples = with_default(cfg, "triples", json{{0.05, 0.1, 0.3}, {0.02, 0.06, 0.25}});
  if (!triples.is_array() || triples.empty()) throw DomainError("triples must be a nonempty array");
  std::vector<std::array<double, 3>> tr;
  double lo = HUGE_VAL, hi = 0.0;
  for (const auto& t : triples) {
    auto v = numbers_from_json(t, "triple");
    if (v.size() != 3) throw DomainError("each triple must be [r1, r2, r3]");
    if (v[2] > cs.window) throw DomainError("r3 exceeds the case window");
    tr.push_back({v[0], v[1], v[2]});
    lo = std::min(lo, v[0] / 4.0);
    hi = std::max(hi, v[2]);
  }
  const double M = std::max(1.0, cs.field.potential.M);
  double slack = with_default(cfg, "slack", cs.grid ? 1e-4 : 1e-8).get<double>();
  std::vector<double> radii;
  for (int i = 0; i < 16; ++i) radii.push_back(lo * std::pow(hi / lo, i / 15.0));
  MonotonicityReport m = fit_monotonicity(frequency_trace(p, radii), M, slack);
  MonotoneFit fit{m.C1, m.C2};
  CommandOutput out;
  out.report = base_report("three-sphere", cs.name, cfg);
  out.report["constants"] = {{"M", M}, {"alpha", p.alpha}, {"C1", m.C1}, {"C2", m.C2}};
  std::ostringstream csv;
  csv << "kind,r1,r2,r3,lhs,rhs,C_needed,pass\n";
  bool pass = m.pass;
  for (const auto& t : tr) {
    ThreeSphereReport h = three_sphere_H(p, t[0], t[1], t[2], fit);
    ThreeSphereReport s = three_sphere_sup(p, t[0], t[1], t[2], fit);
    for (const auto& [kind, r] : {std::pair{"H", &h}, std::pair{"sup", &s}}) {
      out.report["witnesses"].push_back(three_sphere_json(kind, *r));
      csv << kind << ',' << fmt_num(r->r1) << ',' << fmt_num(r->r2) << ',' << fmt_num(r->r3) << ','
          << fmt_num(r->lhs) << ',' << fmt_num(r->rhs) << ',' << fmt_num(r->C_needed) << ','
          << (r->pass ? 1 : 0) << '\n';
      pass = pass && r->pass;
    }
  }
  out.report["pass"] = pass;
  out.files.emplace_back("three_sphere.csv", csv.str());
  return out;
}

std::vector<CatalogEntry> resolve_family(const json& f) {
  std::vector<CatalogEntry> fam;
  if (f.is_array()) {
    for (const auto& n : f) {
      if (!n.is_string()) throw DomainError("family list must hold catalog names");
      fam.push_back(catalog_lookup(n.get<std::string>()));
    }
    return fam;
  }
  std::string kind = get_string(f, "kind", "disk_eigen");
  if (!f.contains("kappa") || !f["kappa"].is_array()) throw DomainError("family needs a kappa list");
  int m = get_int(f, "m", 1);
  for (const auto& k : f["kappa"]) {
    if (!k.is_number_integer()) throw DomainError("family kappa values must be integers");
    int kap = k.get<int>();
    if (kind == "disk_eigen") fam.push_back(catalog_disk_eigen(kap, m));
    else if (kind == "homogeneous") fam.push_back(catalog_homogeneous(kap));
    else throw DomainError("unknown family kind '" + kind + "'");
  }
  return fam;
}

CommandOutput cmd_order(json cfg) {
  int q_max = with_default(cfg, "q_max", 6).get<int>();
  CommandOutput out;
  if (cfg.contains("family")) {
    auto fam = resolve_family(cfg["family"]);
    ScanReport s = order_vs_M_scan(fam, q_max);
    std::ostringstream csv;
    csv << "kappa,M,sqrtM,fitted_order,ratio\n";
    bool finite = true;
    for (const auto& r : s.rows) {
      csv << r.kappa << ',' << fmt_num(r.M) << ',' << fmt_num(r.sqrtM) << ','
          << fmt_num(r.fitted_order) << ',' << fmt_num(r.ratio) << '\n';
      out.report["witnesses"].push_back(
          {{"name", r.name}, {"kappa", r.kappa}, {"fitted_order", r.fitted_order}, {"ratio", r.ratio}});
      finite = finite && std::isfinite(r.ratio);
    }
    json w = out.report["witnesses"];
    out.report = base_report("order", "family", cfg);
    out.report["witnesses"] = w;
    out.report["constants"] = {{"max_ratio", s.max_ratio}, {"q_max", q_max}};
    out.report["pass"] = finite;
    out.files.emplace_back("order_scan.csv", csv.str());
    return out;
  }
  Case cs = resolve_case(cfg);
  Probe p = case_probe(cfg, cs);
  double r0 = with_default(cfg, "r0", cs.r0).get<double>();
  std::unique_ptr<DiniDomain> dom;
  double c2 = 0.0;
  if (cfg.contains("domain")) {
    dom = std::make_unique<DiniDomain>(chart_from_json(cfg["domain"]));
    c2 = growth_factor_slope(dom->K1(), dom->k());
  }
  OrderEstimate e = dyadic_iteration(p, r0, q_max, dom.get(), c2);
  std::ostringstream csv;
  csv << "r,G\n";
  for (size_t i = 0; i < e.radii.size(); ++i) csv << fmt_num(e.radii[i]) << ',' << fmt_num(e.G[i]) << '\n';
  out.report = base_report("order", cs.name, cfg);
  out.report["constants"] = {{"alpha", e.alpha},       {"M", e.M},
                             {"slope", e.slope},       {"intercept", e.intercept},
                             {"residual", e.residual}, {"fitted_order", e.fitted_order},
                             {"Cbar_fit", e.Cbar_fit}, {"K0", e.K0},
                             {"ratio", e.ratio},       {"usable_scales", e.G.size()}};
  if (cs.kappa >= 0) out.report["constants"]["known_order"] = cs.kappa;
  out.report["pass"] = e.pass;
  out.files.emplace_back("order.csv", csv.str());
  return out;
}

CommandOutput cmd_domain(json cfg) {
  const json dspec = with_default(cfg, "domain", json{{"kind", "flat"}, {"R0", 1.0}});
  BoundaryChart chart = chart_from_json(dspec);
  CoefficientField A = coefficients_from_json(with_default(cfg, "coefficients", json{{"kind", "identity"}}));
  double K1 = std::pow(A.lambda, -1.5) * A.K;
  int levels = with_default(cfg, "levels", 12).get<int>();
  int samples = with_default(cfg, "samples", 512).get<int>();
  unsigned long long seed = with_default(cfg, "seed", 0).get<unsigned long long>();
  if (levels < 1 || samples < 16) throw DomainError("domain needs levels >= 1 and samples >= 16");
  DiniDomain d(chart, K1);
  ChartCheck cc = check_chart(chart, 2000, seed);
  CommandOutput out;
  out.report = base_report("domain", chart.name, cfg);
  out.report["constants"] = {{"R0_effective", d.R0_effective()}, {"binding", d.binding_constraint()},
                             {"K1", K1},
                             {"k", d.k()},
                             {"cap", d.cap()},
                             {"max_modulus_ratio", cc.max_modulus_ratio},
                             {"max_slope_factor", cc.max_slope_factor}};
  out.report["witnesses"].push_back({{"name", "chart"}, {"pass", cc.pass}});
  bool pass = cc.pass;
  std::ostringstream csv;
  csv << "r,Lambda,star_min,star_max,gen_min,pass\n";
  for (int i = 0; i < levels; ++i) {
    double r = std::ldexp(d.R0_effective(), -i);
    MarginReport s = star_shape_margin(d, r, samples);
    GeneralizedMargin g = generalized_star_margin(d, A, r, samples);
    bool ok = s.pass && g.pass;
    pass = pass && ok;
    csv << fmt_num(r) << ',' << fmt_num(d.lambda_of(r)) << ',' << fmt_num(s.min) << ','
        << fmt_num(s.max) << ',' << fmt_num(g.min) << ',' << (ok ? 1 : 0) << '\n';
  }
  out.report["pass"] = pass;
  out.files.emplace_back("domain.csv", csv.str());
  return out;
}

CommandOutput cmd_ledger(json cfg) {
  double lambda = with_default(cfg, "lambda", 1.0).get<double>();
  double K = with_default(cfg, "K", 0.0).get<double>();
  const json dspec = with_default(cfg, "domain", json{{"kind", "flat"}, {"R0", 1.0}});
  unsigned long long seed = with_default(cfg, "seed", 0).get<unsigned long long>();
  int ppb = with_default(cfg, "points_per_ball", 400).get<int>();
  ConstantsLedger L = constants_ledger(lambda, K, chart_from_json(dspec), seed, ppb);
  CommandOutput out;
  out.report = base_report("ledger", "ledger", cfg);
  json chain = json::object();
  const char* names[4] = {"r", "r'", "r''", "r'''"};
  for (int i = 0; i < 4; ++i) chain[names[i]] = {L.chain[i][0], L.chain[i][1], L.chain[i][2]};
  out.report["constants"] = {{"n", L.n},
                             {"lambda", L.lambda},
                             {"K", L.K},
                             {"K1", L.K1},
                             {"K2", L.K2},
                             {"k", L.k},
                             {"R0_effective", L.R0_effective},
                             {"Lambda_R0", L.lambda_R0},
                             {"cap", L.cap},
                             {"binding", L.binding},
                             {"c1", L.c1},
                             {"c2", L.c2},
                             {"c3", L.c3},
                             {"c4", L.c4},
                             {"Ctilde", L.Ctilde},
                             {"f_slope", L.f_slope},
                             {"K0", L.K0},
                             {"radii", L.radii},
                             {"chain_at_R0", chain}};
  std::ostringstream csv;
  csv << "display,r,worst,pass\n";
  for (const auto& c : L.checks) {
    out.report["witnesses"].push_back(
        {{"name", c.display}, {"r", c.r}, {"worst_margin", c.worst}, {"pass", c.pass}});
    csv << c.display << ',' << fmt_num(c.r) << ',' << fmt_num(c.worst) << ',' << (c.pass ? 1 : 0) << '\n';
  }
  out.report["pass"] = L.pass;
  out.files.emplace_back("ledger.csv", csv.str());
  return out;
}

CommandOutput cmd_solve(json cfg) {
  json spec = with_default(cfg, "solve", json::object());
  SolveRun run = run_solve(spec);
  cfg["solve"] = spec;
  CommandOutput out;
  out.report = base_report("solve", "fd_solution", cfg);
  out.report["constants"] = {{"iterations", run.result.iterations},
                             {"residual", run.result.residual},
                             {"nx", run.result.grid->nx()},
                             {"ny", run.result.grid->ny()},
                             {"h", run.result.grid->h()}};
  if (run.max_error >= 0.0) out.report["constants"]["max_error"] = run.max_error;
  out.report["pass"] = run.result.residual <= spec["tol"].get<double>();
  std::ostringstream csv;
  csv << "iteration,residual\n";
  for (size_t i = 0; i < run.result.history.size(); ++i)
    csv << i << ',' << fmt_num(run.result.history[i]) << '\n';
  out.files.emplace_back("solve.csv", csv.str());
  out.files.emplace_back("grid.json", grid_to_json(*run.result.grid, run.chart_spec).dump() + "\n");
  return out;
}

}  // namespace

CommandOutput run_command(const std::string& command, const json& config) {
  json cfg = unwrap_config(config);
  try {
    if (command == "trace") return cmd_trace(cfg);
    if (command == "monotone") return cmd_monotone(cfg);
    if (command == "three-sphere") return cmd_three_sphere(cfg);
    if (command == "order") return cmd_order(cfg);
    if (command == "domain") return cmd_domain(cfg);
    if (command == "ledger") return cmd_ledger(cfg);
    if (command == "solve") return cmd_solve(cfg);
  } catch (const json::exception& e) {
    // Wrong JSON types surface here; they are config problems.
    throw DomainError(std::string("config: ") + e.what());
  }
  throw DomainError("unknown command '" + command + "'");
}

}  // namespace dini
