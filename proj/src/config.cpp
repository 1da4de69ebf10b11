#include "hardy/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <cmath>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

using nlohmann::json;

const std::set<std::string> kContextKeys{"group", "norm", "function", "path", "quad", "calculus"};

// Collects issues while reading typed fields.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

  void issue(const std::string& where, const std::string& what) {
    issues_.push_back(where.empty() ? what : where + ": " + what);
  }

  bool object(const json& j, const std::string& where) {
    if (j.is_object()) return true;
    issue(where, "expected an object");
    return false;
  }

  void keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) issue(where, "unknown key '" + k + "'");
  }

  void number(const json& j, const char* key, const std::string& where, double& out) {
    if (!j.contains(key)) return;
    if (j[key].is_number()) out = j[key].get<double>();
    else issue(where + "." + key, "expected a number");
  }

  void number(const json& j, const char* key, const std::string& where, std::optional<double>& out) {
    if (!j.contains(key)) return;
    if (j[key].is_number()) out = j[key].get<double>();
    else issue(where + "." + key, "expected a number");
  }

  template <class Int>
  void integer(const json& j, const char* key, const std::string& where, Int& out) {
    if (!j.contains(key)) return;
    const json& v = j[key];
    if (v.is_number_integer() && (std::is_signed_v<Int> || v.get<long long>() >= 0)) out = v.get<Int>();
    else issue(where + "." + key, std::is_signed_v<Int> ? "expected an integer" : "expected a non-negative integer");
  }

  void boolean(const json& j, const char* key, const std::string& where, bool& out) {
    if (!j.contains(key)) return;
    if (j[key].is_boolean()) out = j[key].get<bool>();
    else issue(where + "." + key, "expected true or false");
  }

  void string(const json& j, const char* key, const std::string& where, std::string& out) {
    if (!j.contains(key)) return;
    if (j[key].is_string()) out = j[key].get<std::string>();
    else issue(where + "." + key, "expected a string");
  }

  void numbers(const json& j, const char* key, const std::string& where, std::vector<double>& out) {
    if (!j.contains(key)) return;
    const json& v = j[key];
    if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
      issue(where + "." + key, "expected an array of numbers");
      return;
    }
    out = v.get<std::vector<double>>();
  }

  // A real number or a [re, im] pair.
  bool complex_value(const json& v, const std::string& where, std::complex<double>& out) {
    if (v.is_number()) {
      out = v.get<double>();
      return true;
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      out = {v[0].get<double>(), v[1].get<double>()};
      return true;
    }
    issue(where, "expected a number or a [re, im] pair");
    return false;
  }

 private:
  std::vector<std::string>& issues_;
};

json merge_context(const json& base, const json& job) {
  json ctx = base;
  for (const auto& key : kContextKeys) {
    if (!job.contains(key)) continue;
    if (ctx.contains(key) && ctx[key].is_object() && job[key].is_object()) ctx[key].merge_patch(job[key]);
    else ctx[key] = job[key];
  }
  return ctx;
}

void parse_angular(Reader& rd, const json& arr, const std::string& where, std::vector<AngularTerm>& out) {
  if (!arr.is_array()) {
    rd.issue(where, "expected an array of terms");
    return;
  }
  out.clear();
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const json& t = arr[i];
    if (!rd.object(t, w)) continue;
    rd.keys(t, w, {"coeff", "coord", "power"});
    AngularTerm term;
    if (t.contains("coeff")) rd.complex_value(t["coeff"], w + ".coeff", term.coeff);
    rd.integer(t, "coord", w, term.coord);
    term.power = term.coord >= 0 ? 1 : 0;
    rd.integer(t, "power", w, term.power);
    if (term.power < 0) rd.issue(w + ".power", "must be >= 0");
    out.push_back(term);
  }
}

std::optional<JobContext> parse_context(Reader& rd, const json& ctx, const std::string& where) {
  JobContext c;
  bool ok = true;
  auto fail = [&](const std::string& w, const std::string& what) {
    rd.issue(w, what);
    ok = false;
  };

  if (ctx.contains("group")) {
    const json& g = ctx["group"];
    if (rd.object(g, where + ".group")) {
      rd.keys(g, where + ".group", {"weights"});
      rd.numbers(g, "weights", where + ".group", c.weights);
    } else {
      ok = false;
    }
  }
  std::optional<DilationGroup> group;
  try {
    group = c.group();
  } catch (const Error& e) {
    fail(where + ".group", e.what());
  }

  if (ctx.contains("norm")) {
    const json& n = ctx["norm"];
    if (rd.object(n, where + ".norm")) {
      rd.keys(n, where + ".norm", {"kind", "kappa", "c"});
      std::string kind = to_string(c.norm.kind);
      rd.string(n, "kind", where + ".norm", kind);
      try {
        c.norm.kind = norm_kind_from_string(kind);
      } catch (const Error& e) {
        fail(where + ".norm.kind", e.what());
      }
      rd.number(n, "kappa", where + ".norm", c.norm.kappa);
      rd.number(n, "c", where + ".norm", c.norm.c);
    } else {
      ok = false;
    }
  }

  if (ctx.contains("function")) {
    const json& f = ctx["function"];
    const std::string w = where + ".function";
    if (rd.object(f, w)) {
      rd.keys(f, w, {"kind", "a", "b", "degree", "gamma", "p", "eps", "cutoffs", "center", "radius",
                     "angular"});
      FunctionConfig& fc = c.function;
      rd.string(f, "kind", w, fc.kind);
      rd.number(f, "a", w, fc.a);
      rd.number(f, "b", w, fc.b);
      rd.integer(f, "degree", w, fc.degree);
      rd.number(f, "gamma", w, fc.gamma);
      rd.number(f, "p", w, fc.p);
      rd.number(f, "eps", w, fc.eps);
      rd.numbers(f, "cutoffs", w, fc.cutoffs);
      rd.numbers(f, "center", w, fc.center);
      rd.number(f, "radius", w, fc.radius);
      if (f.contains("angular")) parse_angular(rd, f["angular"], w + ".angular", fc.angular);
    } else {
      ok = false;
    }
  }

  if (ctx.contains("path")) {
    const json& p = ctx["path"];
    if (p == "separable") c.path = EvalPath::Separable;
    else if (p == "general") c.path = EvalPath::General;
    else if (p != "auto") fail(where + ".path", "expected \"separable\", \"general\" or \"auto\"");
  }

  std::optional<double> tol;
  if (ctx.contains("quad")) {
    const json& q = ctx["quad"];
    const std::string w = where + ".quad";
    if (rd.object(q, w)) {
      rd.keys(q, w, {"radial_order", "radial_panels", "cubature_points", "annulus_lambda", "mc_samples", "tol", "seed"});
      rd.integer(q, "radial_order", w, c.quadrature.radial_order);
      rd.integer(q, "radial_panels", w, c.quadrature.radial_panels);
      rd.integer(q, "cubature_points", w, c.quadrature.cubature_points_per_dim);
      rd.number(q, "annulus_lambda", w, c.quadrature.annulus_lambda);
      rd.integer(q, "mc_samples", w, c.quadrature.mc_samples);
      rd.number(q, "tol", w, tol);
      c.explicit_seed = q.contains("seed");
      rd.integer(q, "seed", w, c.quadrature.seed);
    } else {
      ok = false;
    }
  }

  if (ctx.contains("calculus")) {
    const json& m = ctx["calculus"];
    const std::string w = where + ".calculus";
    if (rd.object(m, w)) {
      rd.keys(m, w, {"mode", "h", "order", "richardson"});
      std::string mode = "fd";
      rd.string(m, "mode", w, mode);
      if (mode == "analytic") c.calculus.mode = RadialOperatorMethod::Mode::Analytic;
      else if (mode == "fd") c.calculus.mode = RadialOperatorMethod::Mode::FiniteDifference;
      else fail(w + ".mode", "expected \"fd\" or \"analytic\"");
      rd.number(m, "h", w, c.calculus.h);
      rd.integer(m, "order", w, c.calculus.order);
      rd.boolean(m, "richardson", w, c.calculus.richardson);
    } else {
      ok = false;
    }
  }
  try {
    c.calculus.validate();
  } catch (const Error& e) {
    fail(where + ".calculus", e.what());
  }

  if (!group) return std::nullopt;
  try {
    (void)c.build_norm();
  } catch (const Error& e) {
    fail(where + ".norm", e.what());
  }
  std::optional<TestFunction> fn;
  try {
    fn = c.build_function();
  } catch (const Error& e) {
    fail(where + ".function", e.what());
  }
  if (fn) {
    if (c.path == EvalPath::Separable && !fn->is_separable())
      fail(where + ".path", "the separable path needs a separable function");
    const EvalPath path = c.resolved_path();
    c.quadrature.target_tol = tol.value_or(path == EvalPath::Separable ? 1e-8 : 1e-4);
    if (path == EvalPath::General && c.calculus.mode == RadialOperatorMethod::Mode::Analytic && !fn->is_separable())
      fail(where + ".calculus.mode", "analytic derivatives need a separable function");
  }
  try {
    c.quadrature.validate();
  } catch (const Error& e) {
    fail(where + ".quad", e.what());
  }
  if (!ok) return std::nullopt;
  return c;
}

// Derivative orders the context can supply along the chosen path.
int available_order(const JobContext& c) {
  const TestFunction f = c.build_function();
  const bool analytic = c.resolved_path() == EvalPath::Separable ||
                        c.calculus.mode == RadialOperatorMethod::Mode::Analytic;
  return analytic ? f.profile().max_order() : Jet::kCapacity - 1;
}

void parse_identity(Reader& rd, const json& base, const json& j, const std::string& where, RunConfig& out) {
  if (!rd.object(j, where)) return;
  std::set<std::string> allowed{"id", "p", "alpha", "k", "R", "z", "require_inequality"};
  allowed.insert(kContextKeys.begin(), kContextKeys.end());
  rd.keys(j, where, allowed);
  IdentityJobConfig cfg;
  std::string id;
  if (!j.contains("id")) {
    rd.issue(where, "missing 'id'");
    return;
  }
  rd.string(j, "id", where, id);
  try {
    cfg.job.kind = identity_kind_from_string(id);
  } catch (const Error& e) {
    rd.issue(where + ".id", e.what());
    return;
  }
  rd.number(j, "p", where, cfg.job.p);
  rd.number(j, "alpha", where, cfg.job.alpha);
  rd.integer(j, "k", where, cfg.job.k);
  rd.numbers(j, "R", where, cfg.job.radii);
  rd.boolean(j, "require_inequality", where, cfg.job.require_inequality);
  if (j.contains("z")) rd.complex_value(j["z"], where + ".z", cfg.z);

  if (cfg.job.kind == IdentityKind::ComplexReduction) {
    try {
      check_preconditions(cfg.job, 0.0);
    } catch (const Error& e) {
      rd.issue(where, e.what());
    }
    out.identities.push_back(cfg);
    return;
  }
  const auto ctx = parse_context(rd, merge_context(base, j), where);
  if (!ctx) return;
  cfg.context = *ctx;
  const double Q = ctx->group().homogeneous_dimension();
  try {
    check_preconditions(cfg.job, Q);
    const int need = required_order(cfg.job);
    if (need > available_order(*ctx))
      throw CapabilityError("needs radial derivatives up to order " + std::to_string(need) +
                            ", the function provides " + std::to_string(available_order(*ctx)));
    if (cfg.job.require_inequality && cfg.job.kind == IdentityKind::WeightedL2) {
      try {
        (void)weighted_constant(Q, cfg.job.alpha);
      } catch (const DegenerateConstantError& e) {
        throw DegenerateConstantError(std::string("degenerate constant: ") + e.what());
      }
    }
    if (cfg.job.require_inequality && cfg.job.kind == IdentityKind::HigherOrder) {
      try {
        (void)higher_order_constant(Q, cfg.job.k, cfg.job.alpha);
      } catch (const DegenerateConstantError& e) {
        throw DegenerateConstantError(std::string("degenerate constant: ") + e.what());
      }
    }
    if (cfg.job.kind == IdentityKind::HardyLp && cfg.job.p != 2.0 && !ctx->build_function().is_real())
      throw ArgumentError("HardyLp with p != 2 needs a real-valued function");
  } catch (const Error& e) {
    rd.issue(where, e.what());
  }
  out.identities.push_back(cfg);
}

void parse_optimize(Reader& rd, const json& j, const std::string& where, SharpnessJobConfig& cfg) {
  if (!rd.object(j, where)) return;
  rd.keys(j, where, {"family", "bounds", "start", "max_iterations", "size_tolerance", "initial_step"});
  OptimizeConfig oc;
  rd.string(j, "family", where, oc.family);
  std::size_t dim = 0;
  if (oc.family == "plateau") {
    double t_lo = 1.0, t_hi = 3.0;
    if (!cfg.deltas.empty() && cfg.deltas.front() > 0.0 && cfg.deltas.back() > 0.0) {
      t_lo = std::min(t_lo, -std::log10(cfg.deltas.front()));
      t_hi = std::max(t_hi, -std::log10(cfg.deltas.back()));
    }
    oc.bounds = {{t_lo, t_hi}};
    dim = 1;
  } else if (oc.family == "bump") {
    oc.bounds = {{0.1, 1.0}, {1.5, 10.0}};
    dim = 2;
  } else {
    rd.issue(where + ".family", "expected \"plateau\" or \"bump\"");
    return;
  }
  if (j.contains("bounds")) {
    const json& b = j["bounds"];
    bool good = b.is_array() && b.size() == dim;
    if (good)
      for (const auto& e : b) good = good && e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number();
    if (!good) {
      rd.issue(where + ".bounds", "expected " + std::to_string(dim) + " [lo, hi] pairs");
    } else {
      for (std::size_t i = 0; i < dim; ++i) oc.bounds[i] = {b[i][0].get<double>(), b[i][1].get<double>()};
    }
  }
  for (std::size_t i = 0; i < oc.bounds.size(); ++i)
    if (!(oc.bounds[i][0] <= oc.bounds[i][1])) rd.issue(where + ".bounds", "lower bound above upper bound");
  if (oc.family == "plateau" && !(oc.bounds[0][0] > std::log10(2.0)))
    rd.issue(where + ".bounds", "plateau parameter -log10(delta) must exceed log10(2)");
  if (oc.family == "bump" && !(oc.bounds[0][0] > 0.0)) rd.issue(where + ".bounds", "bump a must stay positive");
  for (const auto& b : oc.bounds) oc.start.push_back(0.5 * (b[0] + b[1]));
  if (j.contains("start")) {
    std::vector<double> s;
    rd.numbers(j, "start", where, s);
    if (s.size() != dim) rd.issue(where + ".start", "expected " + std::to_string(dim) + " values");
    else oc.start = s;
  }
  rd.integer(j, "max_iterations", where, oc.options.max_iterations);
  rd.number(j, "size_tolerance", where, oc.options.size_tolerance);
  rd.number(j, "initial_step", where, oc.options.initial_step);
  if (oc.options.max_iterations < 1) rd.issue(where + ".max_iterations", "must be >= 1");
  if (!(oc.options.size_tolerance > 0.0)) rd.issue(where + ".size_tolerance", "must be > 0");
  if (!(oc.options.initial_step > 0.0)) rd.issue(where + ".initial_step", "must be > 0");
  cfg.optimize = oc;
}

void parse_sharpness(Reader& rd, const json& base, const json& j, const std::string& where, RunConfig& out) {
  if (!rd.object(j, where)) return;
  std::set<std::string> allowed{"inequality", "p", "alpha", "k", "deltas", "optimize"};
  allowed.insert(kContextKeys.begin(), kContextKeys.end());
  rd.keys(j, where, allowed);
  SharpnessJobConfig cfg;
  if (!j.contains("inequality")) {
    rd.issue(where, "missing 'inequality'");
    return;
  }
  std::string name;
  rd.string(j, "inequality", where, name);
  try {
    cfg.inequality = inequality_kind_from_string(name);
  } catch (const Error& e) {
    rd.issue(where + ".inequality", e.what());
    return;
  }
  rd.number(j, "p", where, cfg.params.p);
  rd.number(j, "alpha", where, cfg.params.alpha);
  rd.integer(j, "k", where, cfg.params.k);
  rd.numbers(j, "deltas", where, cfg.deltas);
  if (cfg.deltas.empty()) rd.issue(where + ".deltas", "needs at least one value");
  for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
    if (!(cfg.deltas[i] > 0.0 && cfg.deltas[i] < 0.5)) rd.issue(where + ".deltas", "values must lie in (0, 0.5)");
    if (i > 0 && !(cfg.deltas[i] < cfg.deltas[i - 1])) rd.issue(where + ".deltas", "must be strictly decreasing");
  }
  if (j.contains("optimize")) parse_optimize(rd, j["optimize"], where + ".optimize", cfg);
  const auto ctx = parse_context(rd, merge_context(base, j), where);
  if (!ctx) return;
  cfg.context = *ctx;
  try {
    check_preconditions(cfg.inequality, ctx->group().homogeneous_dimension(), cfg.params);
  } catch (const Error& e) {
    rd.issue(where, e.what());
  }
  out.sharpness.push_back(cfg);
}

}  // namespace

DilationGroup JobContext::group() const { return make_group(weights); }

QuasiNorm JobContext::build_norm() const {
  const DilationGroup g = group();
  switch (norm.kind) {
    case NormKind::Anisotropic: return norm.kappa ? QuasiNorm::anisotropic(g, *norm.kappa) : QuasiNorm::anisotropic(g);
    case NormKind::Koranyi: return QuasiNorm::koranyi(g, norm.c);
    case NormKind::Euclidean: return QuasiNorm::euclidean(g);
  }
  throw ConfigurationError("unknown norm kind");
}

TestFunction JobContext::build_function() const {
  const FunctionConfig& f = function;
  const std::size_t n = weights.size();
  for (const auto& t : f.angular)
    if (t.coord >= static_cast<int>(n))
      throw ConfigurationError("angular coordinate " + std::to_string(t.coord) + " exceeds the group dimension");
  const AngularPart u = f.angular.empty() ? AngularPart::constant(1.0) : AngularPart(f.angular);
  if (f.kind == "bump") return TestFunction::separable(make_bump(f.a, f.b), u);
  if (f.kind == "poly") return TestFunction::separable(make_poly_cutoff(f.a, f.b, f.degree), u);
  if (f.kind == "plateau") {
    if (f.cutoffs.size() != 4) throw ConfigurationError("plateau cutoffs need four values");
    return TestFunction::separable(make_plateau(f.gamma, {f.cutoffs[0], f.cutoffs[1], f.cutoffs[2], f.cutoffs[3]}), u);
  }
  if (f.kind == "extremizer") {
    if (f.cutoffs.size() != 4) throw ConfigurationError("extremizer cutoffs need four values");
    const double Q = group().homogeneous_dimension();
    return TestFunction::separable(
        make_extremizer(Q, f.p, f.eps, {f.cutoffs[0], f.cutoffs[1], f.cutoffs[2], f.cutoffs[3]}), u);
  }
  if (f.kind == "offcenter") {
    if (f.center.size() != n) throw ConfigurationError("offcenter center needs " + std::to_string(n) + " coordinates");
    return make_offcenter_bump(f.center, f.radius);
  }
  throw ConfigurationError("unknown function kind '" + f.kind + "' (bump, poly, plateau, extremizer, offcenter)");
}

EvalPath JobContext::resolved_path() const {
  if (path) return *path;
  return function.kind == "offcenter" ? EvalPath::General : EvalPath::Separable;
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Both: return "both";
  }
  return "?";
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "both") return OutputFormat::Both;
  throw ConfigurationError("unknown output format '" + s + "' (json, csv, both)");
}

RunConfig parse_config(const nlohmann::json& j) {
  std::vector<std::string> issues;
  Reader rd(issues);
  RunConfig cfg;
  if (!rd.object(j, "config")) throw ValidationError(issues);
  std::set<std::string> allowed{"identities", "sharpness", "output", "seed", "workers"};
  allowed.insert(kContextKeys.begin(), kContextKeys.end());
  rd.keys(j, "config", allowed);

  rd.integer(j, "seed", "config", cfg.seed);
  rd.integer(j, "workers", "config", cfg.workers);
  if (cfg.workers < 1) rd.issue("config.workers", "must be >= 1");
  if (j.contains("output")) {
    const json& o = j["output"];
    if (rd.object(o, "output")) {
      rd.keys(o, "output", {"dir", "format"});
      rd.string(o, "dir", "output", cfg.output_dir);
      std::string format = to_string(cfg.format);
      rd.string(o, "format", "output", format);
      try {
        cfg.format = output_format_from_string(format);
      } catch (const Error& e) {
        rd.issue("output.format", e.what());
      }
    }
  }

  json base = json::object();
  for (const auto& key : kContextKeys)
    if (j.contains(key)) base[key] = j[key];
  // Validate the shared context once so its problems are not repeated per job.
  std::vector<std::string> shared_issues;
  Reader shared(shared_issues);
  parse_context(shared, base, "config");
  issues.insert(issues.end(), shared_issues.begin(), shared_issues.end());
  if (!shared_issues.empty()) throw ValidationError(issues);

  for (const char* list : {"identities", "sharpness"}) {
    if (!j.contains(list)) continue;
    if (!j[list].is_array()) {
      rd.issue(list, "expected an array");
      continue;
    }
    for (std::size_t i = 0; i < j[list].size(); ++i) {
      const std::string where = std::string(list) + "[" + std::to_string(i) + "]";
      if (std::string(list) == "identities") parse_identity(rd, base, j[list][i], where, cfg);
      else parse_sharpness(rd, base, j[list][i], where, cfg);
    }
  }
  if (!issues.empty()) throw ValidationError(issues);
  apply_seed(cfg, cfg.seed, false);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError({"config is not valid JSON: " + std::string(e.what())});
  }
  return parse_config(j);
}

void apply_seed(RunConfig& config, std::uint64_t seed, bool force) {
  config.seed = seed;
  auto set = [&](JobContext& c) {
    if (force || !c.explicit_seed) c.quadrature.seed = seed;
    if (force) c.explicit_seed = true;
  };
  for (auto& job : config.identities) set(job.context);
  for (auto& job : config.sharpness) set(job.context);
}

nlohmann::json to_json(const JobContext& c) {
  json j;
  j["group"] = {{"weights", c.weights}};
  json norm{{"kind", to_string(c.norm.kind)}};
  if (c.norm.kind == NormKind::Anisotropic) norm["kappa"] = c.build_norm().parameter();
  if (c.norm.kind == NormKind::Koranyi) norm["c"] = c.norm.c;
  j["norm"] = norm;
  const FunctionConfig& f = c.function;
  json fn{{"kind", f.kind}};
  if (f.kind == "bump" || f.kind == "poly") {
    fn["a"] = f.a;
    fn["b"] = f.b;
  }
  if (f.kind == "poly") fn["degree"] = f.degree;
  if (f.kind == "plateau") fn["gamma"] = f.gamma;
  if (f.kind == "extremizer") {
    fn["p"] = f.p;
    fn["eps"] = f.eps;
  }
  if (f.kind == "plateau" || f.kind == "extremizer") fn["cutoffs"] = f.cutoffs;
  if (f.kind == "offcenter") {
    fn["center"] = f.center;
    fn["radius"] = f.radius;
  }
  if (f.kind != "offcenter") {
    json ang = json::array();
    for (const auto& t : f.angular) {
      json term{{"coeff", json::array({t.coeff.real(), t.coeff.imag()})}, {"coord", t.coord}, {"power", t.power}};
      ang.push_back(term);
    }
    fn["angular"] = ang;
  }
  j["function"] = fn;
  j["path"] = to_string(c.resolved_path());
  const QuadratureSpec& q = c.quadrature;
  j["quad"] = {{"radial_order", q.radial_order},
               {"radial_panels", q.radial_panels},
               {"cubature_points", q.cubature_points_per_dim},
               {"annulus_lambda", q.annulus_lambda},
               {"mc_samples", q.mc_samples},
               {"tol", q.target_tol},
               {"seed", q.seed}};
  const bool analytic = c.calculus.mode == RadialOperatorMethod::Mode::Analytic;
  j["calculus"] = {{"mode", analytic ? "analytic" : "fd"},
                   {"h", c.calculus.h},
                   {"order", c.calculus.order},
                   {"richardson", c.calculus.richardson}};
  return j;
}

nlohmann::json to_json(const RunConfig& config) {
  json j;
  j["seed"] = config.seed;
  j["workers"] = config.workers;
  j["output"] = {{"dir", config.output_dir}, {"format", to_string(config.format)}};
  json ids = json::array();
  for (const auto& c : config.identities) {
    json e = c.job.kind == IdentityKind::ComplexReduction ? json::object() : to_json(c.context);
    e["id"] = to_string(c.job.kind);
    for (const auto& [k, v] : job_params(c.job)) e[k] = k == "k" ? json(c.job.k) : json(v);
    if (!c.job.radii.empty()) e["R"] = c.job.radii;
    if (c.job.kind == IdentityKind::ComplexReduction) e["z"] = json::array({c.z.real(), c.z.imag()});
    if (c.job.require_inequality) e["require_inequality"] = true;
    ids.push_back(e);
  }
  j["identities"] = ids;
  json sh = json::array();
  for (const auto& c : config.sharpness) {
    json e = to_json(c.context);
    e.erase("function");
    e["inequality"] = to_string(c.inequality);
    switch (c.inequality) {
      case InequalityKind::Hardy: e["p"] = c.params.p; break;
      case InequalityKind::Weighted: e["alpha"] = c.params.alpha; break;
      case InequalityKind::HigherOrder:
        e["alpha"] = c.params.alpha;
        e["k"] = c.params.k;
        break;
      case InequalityKind::Rellich: break;
    }
    e["deltas"] = c.deltas;
    if (c.optimize) {
      json b = json::array();
      for (const auto& pair : c.optimize->bounds) b.push_back(json::array({pair[0], pair[1]}));
      e["optimize"] = {{"family", c.optimize->family},
                       {"bounds", b},
                       {"start", c.optimize->start},
                       {"max_iterations", c.optimize->options.max_iterations},
                       {"size_tolerance", c.optimize->options.size_tolerance},
                       {"initial_step", c.optimize->options.initial_step}};
    }
    sh.push_back(e);
  }
  j["sharpness"] = sh;
  return j;
}

}  // namespace hardy
