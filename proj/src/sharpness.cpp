#include "hardy/sharpness.hpp"

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "hardy/errors.hpp"
#include "hardy/identities.hpp"

namespace hardy {

namespace {

using cd = std::complex<double>;
using Jets = std::span<const cd>;

constexpr double kPenalty = 1e6;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double apow(cd z, double p) {
  const double a = std::abs(z);
  return a == 0.0 ? 0.0 : std::pow(a, p);
}

std::unique_ptr<Evaluator> quotient_evaluator(const QuasiNorm& norm, const TestFunction& f, int order,
                                              const QuadratureSpec& spec, EvalPath path,
                                              const RadialOperatorMethod& method) {
  // Numerator and denominator share one homogeneity degree, so sphere factors cancel.
  if (path == EvalPath::Separable && f.is_separable())
    return std::make_unique<SeparableEvaluator>(f, norm, spec, order, false);
  return std::make_unique<CubatureEvaluator>(f, norm, spec, order, method);
}

}  // namespace

std::string to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::Hardy: return "Hardy";
    case InequalityKind::Weighted: return "Weighted";
    case InequalityKind::Rellich: return "Rellich";
    case InequalityKind::HigherOrder: return "HigherOrder";
  }
  return "?";
}

InequalityKind inequality_kind_from_string(const std::string& name) {
  for (auto k : {InequalityKind::Hardy, InequalityKind::Weighted, InequalityKind::Rellich, InequalityKind::HigherOrder})
    if (to_string(k) == name) return k;
  throw ConfigurationError("unknown inequality '" + name + "'");
}

double target_constant(InequalityKind kind, double Q, const InequalityParams& params) {
  switch (kind) {
    case InequalityKind::Hardy: return hardy_constant(Q, params.p);
    case InequalityKind::Weighted:
      if (Q < 3.0) throw DomainError("Q ≥ 3 required, got Q = " + fmt(Q));
      return weighted_constant(Q, params.alpha);
    case InequalityKind::Rellich: return rellich_constant(Q);
    case InequalityKind::HigherOrder:
      if (Q < 3.0) throw DomainError("Q ≥ 3 required, got Q = " + fmt(Q));
      return higher_order_constant(Q, params.k, params.alpha);
  }
  return 0.0;
}

void check_preconditions(InequalityKind kind, double Q, const InequalityParams& params) {
  if (kind == InequalityKind::HigherOrder && (params.k < 1 || params.k > 4))
    throw ArgumentError("k must lie in [1, 4] for the plateau family, got " + std::to_string(params.k));
  if (!std::isfinite(params.alpha)) throw ArgumentError("alpha must be finite");
  (void)target_constant(kind, Q, params);
}

int required_order(InequalityKind kind, const InequalityParams& params) {
  switch (kind) {
    case InequalityKind::Rellich: return 2;
    case InequalityKind::HigherOrder: return params.k;
    default: return 1;
  }
}

double extremal_exponent(InequalityKind kind, double Q, const InequalityParams& params) {
  switch (kind) {
    case InequalityKind::Hardy: return -(Q - params.p) / params.p;
    case InequalityKind::Weighted: return params.alpha - (Q - 2.0) / 2.0;
    case InequalityKind::Rellich: return -(Q - 4.0) / 2.0;
    case InequalityKind::HigherOrder: return params.k - Q / 2.0 + params.alpha;
  }
  return 0.0;
}

std::optional<double> rayleigh_quotient(InequalityKind kind, const Evaluator& ev, const InequalityParams& params) {
  const double Q = ev.homogeneous_dimension();
  const int need = required_order(kind, params);
  if (ev.order() < need)
    throw CapabilityError("the quotient needs radial derivatives up to order " + std::to_string(need));
  double num = 0.0, den = 0.0, root = 2.0;
  switch (kind) {
    case InequalityKind::Hardy: {
      const double p = params.p;
      root = p;
      num = ev.integrate([&](double r, Jets d, cd) { return apow(d[0] / r, p); }, p).value;
      den = ev.integrate([&](double, Jets d, cd) { return apow(d[1], p); }, p).value;
      break;
    }
    case InequalityKind::Weighted: {
      const double a = params.alpha;
      num = ev.integrate([&](double r, Jets d, cd) { return std::norm(d[0]) * std::pow(r, -2.0 * a - 2.0); }, 2).value;
      den = ev.integrate([&](double r, Jets d, cd) { return std::norm(d[1]) * std::pow(r, -2.0 * a); }, 2).value;
      break;
    }
    case InequalityKind::Rellich:
      num = ev.integrate([&](double r, Jets d, cd) { return std::norm(d[0] / (r * r)); }, 2).value;
      den = ev.integrate([&](double r, Jets d, cd) { return std::norm(d[2] + (Q - 1.0) * d[1] / r); }, 2).value;
      break;
    case InequalityKind::HigherOrder: {
      const double a = params.alpha;
      const int k = params.k;
      num = ev.integrate([&](double r, Jets d, cd) { return std::norm(d[0]) * std::pow(r, -2.0 * (k + a)); }, 2).value;
      den = ev.integrate([&](double r, Jets d, cd) { return std::norm(d[k]) * std::pow(r, -2.0 * a); }, 2).value;
      break;
    }
  }
  if (!(den > 0.0) || !std::isfinite(num) || !std::isfinite(den)) return std::nullopt;
  const double q = std::pow(num / den, 1.0 / root);
  if (!std::isfinite(q)) return std::nullopt;
  return q;
}

std::optional<double> rayleigh_quotient(InequalityKind kind, const QuasiNorm& norm, const TestFunction& f,
                                        const InequalityParams& params, const QuadratureSpec& spec, EvalPath path,
                                        const RadialOperatorMethod& method) {
  if (f.is_zero()) return std::nullopt;
  const auto ev = quotient_evaluator(norm, f, required_order(kind, params), spec, path, method);
  return rayleigh_quotient(kind, *ev, params);
}

Cutoffs sweep_cutoffs(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw ArgumentError("delta must lie in (0, 0.5), got " + fmt(delta));
  return {delta * delta * delta, delta, 1.0 / delta, 1.0 / (delta * delta * delta)};
}

TestFunction plateau_extremizer(InequalityKind kind, double Q, const InequalityParams& params, double delta) {
  return TestFunction::separable(make_plateau(extremal_exponent(kind, Q, params), sweep_cutoffs(delta)),
                                 AngularPart::constant(1.0));
}

std::string SharpnessCurve::params_string() const {
  std::string s;
  for (const auto& [k, v] : params) s += (s.empty() ? "" : ";") + k + "=" + fmt(v);
  return s;
}

void to_json(nlohmann::json& j, const SharpnessCurve& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.points) {
    nlohmann::json e{{"delta", p.delta}, {"reliable", p.reliable}};
    e["quotient"] = p.reliable ? nlohmann::json(p.quotient) : nlohmann::json(nullptr);
    e["gap"] = p.reliable ? nlohmann::json(p.gap) : nlohmann::json(nullptr);
    if (!p.error.empty()) e["error"] = p.error;
    pts.push_back(e);
  }
  j = nlohmann::json{{"inequality", to_string(c.inequality)},
                     {"params", c.params},
                     {"points", pts},
                     {"target", c.target},
                     {"best_quotient", c.best_quotient},
                     {"best_gap", c.best_gap},
                     {"monotone", c.monotone},
                     {"below_target", c.below_target},
                     {"pass", c.pass},
                     {"tolerance", c.tolerance}};
  if (!c.notes.empty()) j["notes"] = c.notes;
}

void from_json(const nlohmann::json& j, SharpnessCurve& c) {
  c = SharpnessCurve{};
  c.inequality = inequality_kind_from_string(j.at("inequality").get<std::string>());
  c.params = j.at("params").get<std::map<std::string, double>>();
  for (const auto& e : j.at("points")) {
    SharpnessPoint p;
    p.delta = e.at("delta").get<double>();
    p.reliable = e.at("reliable").get<bool>();
    p.quotient = e.at("quotient").is_null() ? std::numeric_limits<double>::quiet_NaN() : e["quotient"].get<double>();
    p.gap = e.at("gap").is_null() ? std::numeric_limits<double>::quiet_NaN() : e["gap"].get<double>();
    p.error = e.value("error", std::string{});
    c.points.push_back(p);
  }
  c.target = j.at("target").get<double>();
  c.best_quotient = j.at("best_quotient").get<double>();
  c.best_gap = j.at("best_gap").get<double>();
  c.monotone = j.at("monotone").get<bool>();
  c.below_target = j.at("below_target").get<bool>();
  c.pass = j.at("pass").get<bool>();
  c.tolerance = j.value("tolerance", 0.0);
  if (j.contains("notes")) c.notes = j["notes"].get<std::vector<std::string>>();
}

SharpnessCurve sharpness_sweep(InequalityKind kind, const QuasiNorm& norm, const InequalityParams& params,
                               const std::vector<double>& deltas, const QuadratureSpec& spec) {
  const double Q = norm.group().homogeneous_dimension();
  check_preconditions(kind, Q, params);
  if (deltas.empty()) throw ArgumentError("the sweep needs at least one delta");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] < 0.5)) throw ArgumentError("delta must lie in (0, 0.5), got " + fmt(deltas[i]));
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw ArgumentError("delta list must be strictly decreasing");
  }
  SharpnessCurve c;
  c.inequality = kind;
  switch (kind) {
    case InequalityKind::Hardy: c.params = {{"p", params.p}}; break;
    case InequalityKind::Weighted: c.params = {{"alpha", params.alpha}}; break;
    case InequalityKind::Rellich: break;
    case InequalityKind::HigherOrder: c.params = {{"alpha", params.alpha}, {"k", static_cast<double>(params.k)}}; break;
  }
  c.target = target_constant(kind, Q, params);
  c.tolerance = 10.0 * spec.target_tol;
  c.best_quotient = 0.0;
  bool any = false, all_reliable = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (double delta : deltas) {
    SharpnessPoint pt;
    pt.delta = delta;
    try {
      const auto q = rayleigh_quotient(kind, norm, plateau_extremizer(kind, Q, params, delta), params, spec);
      if (!q) throw IntegrationError("quotient is not finite");
      pt.quotient = *q;
      pt.gap = c.target - *q;
    } catch (const Error& e) {
      pt.reliable = false;
      pt.quotient = pt.gap = std::numeric_limits<double>::quiet_NaN();
      pt.error = e.what();
    }
    if (pt.reliable) {
      if (pt.quotient < prev - c.tolerance * c.target) c.monotone = false;
      if (pt.quotient > c.target * (1.0 + c.tolerance)) c.below_target = false;
      prev = std::max(prev, pt.quotient);
      if (!any || pt.quotient > c.best_quotient) c.best_quotient = pt.quotient;
      any = true;
    } else {
      all_reliable = false;
    }
    c.points.push_back(pt);
  }
  c.best_gap = any ? c.target - c.best_quotient : std::numeric_limits<double>::quiet_NaN();
  if (!all_reliable) c.notes.push_back("some points are unreliable; see their error field");
  c.pass = any && all_reliable && c.monotone && c.below_target;
  return c;
}

ProfileFamily bump_family(double a_lo, double a_hi, double b_lo, double b_hi, double a0, double b0) {
  if (!(a_lo > 0.0 && a_lo <= a_hi && b_lo <= b_hi)) throw ArgumentError("bump family bounds are inconsistent");
  ProfileFamily fam;
  fam.name = "bump";
  fam.lower = {a_lo, b_lo};
  fam.upper = {a_hi, b_hi};
  fam.start = {a0, b0};
  fam.make = [](std::span<const double> x) {
    if (!(x[0] > 0.0 && x[0] < x[1])) throw ArgumentError("bump needs 0 < a < b");
    return TestFunction::separable(make_bump(x[0], x[1]), AngularPart::constant(1.0));
  };
  fam.probes = {fam.start};
  return fam;
}

ProfileFamily plateau_family(InequalityKind kind, double Q, const InequalityParams& params, double t_lo, double t_hi,
                             const std::vector<double>& probe_deltas) {
  if (!(t_lo > std::log10(2.0) && t_lo <= t_hi)) throw ArgumentError("plateau family needs log10(2) < t_lo <= t_hi");
  ProfileFamily fam;
  fam.name = "plateau";
  fam.lower = {t_lo};
  fam.upper = {t_hi};
  fam.start = {0.5 * (t_lo + t_hi)};
  fam.make = [=](std::span<const double> x) {
    return plateau_extremizer(kind, Q, params, std::pow(10.0, -x[0]));
  };
  for (double d : probe_deltas) fam.probes.push_back({-std::log10(d)});
  fam.probes.push_back(fam.start);
  return fam;
}

ProfileFamily fixed_family(TestFunction f, std::string name) {
  ProfileFamily fam;
  fam.name = std::move(name);
  fam.make = [f](std::span<const double>) { return f; };
  fam.probes = {{}};
  return fam;
}

namespace {

struct SearchState {
  InequalityKind kind;
  const QuasiNorm* norm;
  const InequalityParams* params;
  const ProfileFamily* family;
  const QuadratureSpec* spec;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  int evaluations = 0;
  int rejected = 0;

  double value(std::span<const double> x) {
    ++evaluations;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] >= family->lower[i] && x[i] <= family->upper[i])) {
        ++rejected;
        return kPenalty;
      }
    }
    std::optional<double> q;
    try {
      q = rayleigh_quotient(kind, *norm, family->make(x), *params, *spec);
    } catch (const Error&) {
      q.reset();
    }
    if (!q) {
      ++rejected;
      return kPenalty;
    }
    if (*q > best) {
      best = *q;
      best_x.assign(x.begin(), x.end());
    }
    return -*q;
  }
};

double simplex_objective(const gsl_vector* v, void* data) {
  auto* s = static_cast<SearchState*>(data);
  std::vector<double> x(v->size);
  for (std::size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
  return s->value(x);
}

}  // namespace

OptimizeResult optimize_constant(InequalityKind kind, const QuasiNorm& norm, const InequalityParams& params,
                                 const ProfileFamily& family, const QuadratureSpec& spec,
                                 const OptimizeOptions& options) {
  const double Q = norm.group().homogeneous_dimension();
  check_preconditions(kind, Q, params);
  const std::size_t m = family.dim();
  if (m > 4) throw ArgumentError("profile families may have at most 4 parameters");
  if (family.upper.size() != m || family.start.size() != m || !family.make)
    throw ArgumentError("profile family '" + family.name + "' is malformed");
  if (options.max_iterations < 1 || !(options.size_tolerance > 0.0))
    throw ArgumentError("optimizer needs max_iterations >= 1 and size_tolerance > 0");

  SearchState st{kind, &norm, &params, &family, &spec, -std::numeric_limits<double>::infinity(), {}, 0, 0};
  for (const auto& probe : family.probes)
    if (probe.size() == m) st.value(probe);

  OptimizeResult res;
  res.target = target_constant(kind, Q, params);
  if (m > 0) {
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(m), gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(m), gsl_vector_free);
    for (std::size_t i = 0; i < m; ++i) {
      gsl_vector_set(x.get(), i, family.start[i]);
      const double side = family.upper[i] - family.lower[i];
      gsl_vector_set(step.get(), i, side > 0.0 ? options.initial_step * side : 1e-3);
    }
    gsl_multimin_function fn{&simplex_objective, m, &st};
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> solver(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, m), gsl_multimin_fminimizer_free);
    gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), step.get());
    for (int it = 0; it < options.max_iterations; ++it) {
      res.iterations = it + 1;
      if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
      const double size = gsl_multimin_fminimizer_size(solver.get());
      if (gsl_multimin_test_size(size, options.size_tolerance) == GSL_SUCCESS) {
        res.converged = true;
        break;
      }
    }
  } else {
    res.converged = true;
  }
  if (!std::isfinite(st.best)) throw IntegrationError("no admissible point in profile family '" + family.name + "'");
  res.best_quotient = st.best;
  res.best_params = st.best_x;
  res.gap = res.target - res.best_quotient;
  res.evaluations = st.evaluations;
  res.rejected = st.rejected;
  return res;
}

}  // namespace hardy
