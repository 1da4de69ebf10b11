#include "hardy/identities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

using cd = std::complex<double>;
using Jets = std::span<const cd>;

constexpr double kFloor = 1e-30;
constexpr double kZeroCoefficient = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double apow(double x, double p) {
  const double a = std::abs(x);
  return a == 0.0 ? 0.0 : std::pow(a, p);
}

double apow(cd z, double p) {
  const double a = std::abs(z);
  return a == 0.0 ? 0.0 : std::pow(a, p);
}

struct Context {
  const Evaluator& ev;
  IdentityReport report;
  double Q;

  Context(const Evaluator& e, IdentityKind kind) : ev(e), Q(e.homogeneous_dimension()) {
    report.identity = kind;
    report.tolerance = 10.0 * e.spec().target_tol;
    report.path = to_string(e.path());
  }

  double integrate(double degree, const JetExpr& expr, std::optional<double> R = std::nullopt) {
    const RealEstimate est = ev.integrate(expr, degree, R);
    report.quad_error += est.error;
    return est.value;
  }

  void need_order(int k) const {
    if (ev.order() < k)
      throw CapabilityError("evaluator carries radial derivatives up to order " + std::to_string(ev.order()) +
                            ", this check needs " + std::to_string(k));
  }

  // a ≤ C·b in squared/powered form, allowing for quadrature tolerance.
  void inequality(double smaller, double larger) {
    report.inequality_checked = true;
    report.inequality_holds = smaller <= larger * (1.0 + report.tolerance) + kFloor;
  }

  void degenerate(const DegenerateConstantError& e, bool required) {
    report.inequality_checked = false;
    const std::string msg = std::string("degenerate constant: ") + e.what();
    if (required) {
      report.error = msg;
      report.inequality_holds = false;
    } else {
      report.notes.push_back(msg + "; inequality skipped, identity still checked");
    }
  }

  IdentityReport finish(bool identity_residual = true) {
    IdentityReport& r = report;
    if (identity_residual) r.abs_residual = std::abs(r.lhs - r.rhs);
    r.rel_residual = r.abs_residual / std::max({std::abs(r.lhs), std::abs(r.rhs), kFloor});
    bool ok = r.rel_residual < r.tolerance;
    for (double rem : r.remainders) ok = ok && rem >= -10.0 * r.tolerance;
    if (r.inequality_holds.has_value()) ok = ok && *r.inequality_holds;
    r.pass = ok && std::isfinite(r.lhs) && std::isfinite(r.rhs);
    return r;
  }
};

void require_p_below_q(double p, double Q) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1, got " + fmt(p));
  if (!(p < Q)) throw DomainError("p must be below Q = " + fmt(Q) + ", got " + fmt(p));
}

// Weight x^{p−2} on [0, 1].
const Rule1D& jacobi_reference(double p) {
  thread_local std::map<double, Rule1D> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, gauss_jacobi(4, 0.0, 1.0, 0.0, p - 2.0)).first;
  return it->second;
}

// ∫_0^S s^{p−2}(c + σ s) ds, exact for the linear factor.
double jacobi_linear(double S, double c, double sigma, double p) {
  if (S <= 0.0) return 0.0;
  const Rule1D& ref = jacobi_reference(p);
  double s = 0.0;
  for (std::size_t i = 0; i < ref.x.size(); ++i) s += ref.w[i] * (c + sigma * S * ref.x[i]);
  return std::pow(S, p - 1.0) * s;
}

bool even_integer(double p) { return p == std::floor(p) && std::fmod(p, 2.0) == 0.0; }

// ∫ over one sub-interval between zeros of |cos(θ−φ)|^p, with Jacobi weights at zero endpoints.
double abs_cos_pow_panel(double lo, double hi, bool lo_zero, bool hi_zero, double phi, double p) {
  const double a = hi_zero ? p : 0.0, b = lo_zero ? p : 0.0;
  const Rule1D rule = gauss_jacobi(32, lo, hi, a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double t = rule.x[i];
    double v = apow(std::cos(t - phi), p);
    if (a > 0.0) v /= std::pow(hi - t, a);
    if (b > 0.0) v /= std::pow(t - lo, b);
    s += rule.w[i] * v;
  }
  return s;
}

// ∫_{−π}^{π} |cos(θ−φ)|^p dθ split at the zeros.
double abs_cos_pow_integral(double phi, double p) {
  const double pi = std::numbers::pi;
  std::vector<double> zeros;
  for (int k = -3; k <= 3; ++k) {
    const double z = phi + pi / 2 + k * pi;
    if (z > -pi && z < pi) zeros.push_back(z);
  }
  std::sort(zeros.begin(), zeros.end());
  std::vector<double> edges{-pi};
  edges.insert(edges.end(), zeros.begin(), zeros.end());
  edges.push_back(pi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] - edges[i] <= 0.0) continue;
    total += abs_cos_pow_panel(edges[i], edges[i + 1], i > 0, i + 2 < edges.size(), phi, p);
  }
  return total;
}

}  // namespace

std::string to_string(IdentityKind kind) {
  switch (kind) {
    case IdentityKind::HardyLp: return "HardyLp";
    case IdentityKind::HardyL2: return "HardyL2";
    case IdentityKind::WeightedL2: return "WeightedL2";
    case IdentityKind::Rellich: return "Rellich";
    case IdentityKind::HigherOrder: return "HigherOrder";
    case IdentityKind::Uncertainty: return "Uncertainty";
    case IdentityKind::LogHardy: return "LogHardy";
    case IdentityKind::IbpFormula: return "IbpFormula";
    case IdentityKind::ComplexReduction: return "ComplexReduction";
  }
  return "?";
}

IdentityKind identity_kind_from_string(const std::string& name) {
  for (auto k : {IdentityKind::HardyLp, IdentityKind::HardyL2, IdentityKind::WeightedL2, IdentityKind::Rellich,
                 IdentityKind::HigherOrder, IdentityKind::Uncertainty, IdentityKind::LogHardy,
                 IdentityKind::IbpFormula, IdentityKind::ComplexReduction})
    if (to_string(k) == name) return k;
  throw ConfigurationError("unknown identity '" + name + "'");
}

int required_order(const IdentityJob& job) {
  switch (job.kind) {
    case IdentityKind::Rellich: return 2;
    case IdentityKind::HigherOrder: return job.k;
    case IdentityKind::ComplexReduction: return 0;
    default: return 1;
  }
}

void check_preconditions(const IdentityJob& job, double Q) {
  switch (job.kind) {
    case IdentityKind::HardyLp:
    case IdentityKind::Uncertainty:
    case IdentityKind::IbpFormula: require_p_below_q(job.p, Q); break;
    case IdentityKind::HardyL2:
    case IdentityKind::WeightedL2:
      if (Q < 3.0) throw DomainError("Q ≥ 3 required, got Q = " + fmt(Q));
      if (!std::isfinite(job.alpha)) throw ArgumentError("alpha must be finite");
      break;
    case IdentityKind::Rellich:
      if (Q < 5.0) throw DomainError("Q ≥ 5 required, got Q = " + fmt(Q));
      break;
    case IdentityKind::HigherOrder:
      if (Q < 3.0) throw DomainError("Q ≥ 3 required, got Q = " + fmt(Q));
      if (job.k < 1) throw ArgumentError("k must be >= 1");
      if (job.k >= Jet::kCapacity) throw CapabilityError("k must be <= " + std::to_string(Jet::kCapacity - 1));
      if (!std::isfinite(job.alpha)) throw ArgumentError("alpha must be finite");
      break;
    case IdentityKind::LogHardy:
      if (!(job.p > 1.0)) throw DomainError("p must exceed 1, got " + fmt(job.p));
      if (job.radii.empty()) throw ArgumentError("log-Hardy needs at least one R");
      for (double R : job.radii)
        if (!(R > 0.0) || !std::isfinite(R)) throw ArgumentError("R must be positive, got " + fmt(R));
      break;
    case IdentityKind::ComplexReduction:
      if (!(job.p >= 1.0)) throw DomainError("p must be >= 1, got " + fmt(job.p));
      break;
  }
}

std::map<std::string, double> job_params(const IdentityJob& job) {
  switch (job.kind) {
    case IdentityKind::HardyLp:
    case IdentityKind::Uncertainty:
    case IdentityKind::IbpFormula:
    case IdentityKind::LogHardy:
    case IdentityKind::ComplexReduction: return {{"p", job.p}};
    case IdentityKind::WeightedL2: return {{"alpha", job.alpha}};
    case IdentityKind::HigherOrder: return {{"alpha", job.alpha}, {"k", static_cast<double>(job.k)}};
    default: return {};
  }
}

std::string IdentityReport::params_string() const {
  std::string s;
  for (const auto& [k, v] : params) {
    if (!s.empty()) s += ';';
    s += k + "=" + fmt(v);
  }
  if (!radii.empty()) {
    if (!s.empty()) s += ';';
    s += "R=";
    for (std::size_t i = 0; i < radii.size(); ++i) s += (i ? "|" : "") + fmt(radii[i]);
  }
  return s;
}

void to_json(nlohmann::json& j, const IdentityReport& r) {
  nlohmann::json params = r.params;
  if (!r.radii.empty()) params["R"] = r.radii;
  j = nlohmann::json{{"identity", to_string(r.identity)},
                     {"params", params},
                     {"terms", r.terms},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"abs_residual", r.abs_residual},
                     {"rel_residual", r.rel_residual},
                     {"remainders", r.remainders},
                     {"pass", r.pass},
                     {"quad_error", r.quad_error},
                     {"tolerance", r.tolerance},
                     {"inequality_checked", r.inequality_checked},
                     {"path", r.path}};
  j["inequality_holds"] = r.inequality_holds ? nlohmann::json(*r.inequality_holds) : nlohmann::json(nullptr);
  j["constant"] = r.constant ? nlohmann::json(*r.constant) : nlohmann::json(nullptr);
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.notes.empty()) j["notes"] = r.notes;
}

void from_json(const nlohmann::json& j, IdentityReport& r) {
  r = IdentityReport{};
  r.identity = identity_kind_from_string(j.at("identity").get<std::string>());
  for (const auto& [k, v] : j.at("params").items()) {
    if (k == "R") r.radii = v.get<std::vector<double>>();
    else r.params[k] = v.get<double>();
  }
  r.terms = j.at("terms").get<std::map<std::string, double>>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.abs_residual = j.at("abs_residual").get<double>();
  r.rel_residual = j.at("rel_residual").get<double>();
  r.remainders = j.at("remainders").get<std::vector<double>>();
  r.pass = j.at("pass").get<bool>();
  r.quad_error = j.at("quad_error").get<double>();
  r.tolerance = j.value("tolerance", 0.0);
  r.inequality_checked = j.value("inequality_checked", false);
  if (j.contains("inequality_holds") && !j["inequality_holds"].is_null())
    r.inequality_holds = j["inequality_holds"].get<bool>();
  if (j.contains("constant") && !j["constant"].is_null()) r.constant = j["constant"].get<double>();
  r.path = j.value("path", std::string{});
  r.error = j.value("error", std::string{});
  if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
}

// ---- constants ----

double hardy_constant(double Q, double p) {
  require_p_below_q(p, Q);
  return p / (Q - p);
}

double weighted_constant(double Q, double alpha) {
  const double c = Q - 2.0 - 2.0 * alpha;
  if (std::abs(c) <= kZeroCoefficient)
    throw DegenerateConstantError("Q - 2 - 2*alpha = 0 at Q = " + fmt(Q) + ", alpha = " + fmt(alpha));
  return 2.0 / std::abs(c);
}

double rellich_constant(double Q) {
  if (Q < 5.0) throw DomainError("Q ≥ 5 required, got Q = " + fmt(Q));
  return 4.0 / (Q * (Q - 4.0));
}

double higher_order_constant(double Q, int k, double alpha) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  double prod = 1.0;
  for (int j = 0; j < k; ++j) {
    const double c = (Q - 2.0) / 2.0 - (alpha + j);
    if (std::abs(c) <= kZeroCoefficient)
      throw DegenerateConstantError("factor |(Q-2)/2 - (alpha+" + std::to_string(j) + ")| vanishes at Q = " +
                                    fmt(Q) + ", alpha = " + fmt(alpha) + ", k = " + std::to_string(k));
    prod *= std::abs(c);
  }
  return 1.0 / prod;
}

double log_hardy_constant(double p) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1, got " + fmt(p));
  return p / (p - 1.0);
}

// ---- pointwise pieces ----

double i_p_weight(double h, double g, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("I_p needs p > 1, got " + fmt(p));
  if (p == 2.0) return 0.5;
  const double d = h - g;
  if (d == 0.0) {
    if (g == 0.0) {
      if (p < 2.0) throw DomainError("I_p(0, 0) diverges for p < 2");
      return 0.0;
    }
    return 0.5 * (p - 1.0) * std::pow(std::abs(g), p - 2.0);
  }
  const double root = -g / d;  // ξ where ξh + (1−ξ)g = 0
  double integral = 0.0;
  if (!even_integer(p) && root >= -1.0 && root <= 2.0) {
    // |d|^{p−2} ∫₀¹ |ξ − ξ*|^{p−2} ξ dξ, measured from the root.
    if (root <= 0.0) {
      integral = jacobi_linear(1.0 - root, root, 1.0, p) - jacobi_linear(-root, root, 1.0, p);
    } else if (root >= 1.0) {
      integral = jacobi_linear(root, root, -1.0, p) - jacobi_linear(root - 1.0, root, -1.0, p);
    } else {
      integral = jacobi_linear(root, root, -1.0, p) + jacobi_linear(1.0 - root, root, 1.0, p);
    }
    integral *= std::pow(std::abs(d), p - 2.0);
  } else {
    const Rule1D rule = gauss_legendre(24, 0.0, 1.0);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double xi = rule.x[i];
      integral += rule.w[i] * apow(xi * h + (1.0 - xi) * g, p - 2.0) * xi;
    }
  }
  return std::max(0.0, (p - 1.0) * integral);
}

ReductionResidual complex_reduction_check(std::complex<double> z, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("the reduction needs p >= 1, got " + fmt(p));
  ReductionResidual r;
  const double m = std::abs(z);
  r.lhs = apow(m, p);
  if (m == 0.0) return r;
  const double norming = abs_cos_pow_integral(0.0, p);
  // Re z cosθ + Im z sinθ = |z| cos(θ − arg z).
  r.rhs = std::pow(m, p) * abs_cos_pow_integral(std::arg(z), p) / norming;
  r.abs_residual = std::abs(r.lhs - r.rhs);
  r.rel_residual = r.abs_residual / std::max({r.lhs, r.rhs, kFloor});
  return r;
}

IdentityReport complex_reduction_report(std::complex<double> z, double p, double tol) {
  const ReductionResidual res = complex_reduction_check(z, p);
  IdentityReport r;
  r.identity = IdentityKind::ComplexReduction;
  r.params = {{"p", p}, {"re", z.real()}, {"im", z.imag()}};
  r.lhs = res.lhs;
  r.rhs = res.rhs;
  r.abs_residual = res.abs_residual;
  r.rel_residual = res.rel_residual;
  r.tolerance = tol;
  r.terms = {{"abs_z_p", res.lhs}, {"averaged", res.rhs}};
  r.pass = r.rel_residual < tol;
  r.path = "1d";
  return r;
}

// ---- reporters ----

IdentityReport hardy_lp_report(const Evaluator& ev, double p) {
  Context cx(ev, IdentityKind::HardyLp);
  const double Q = cx.Q;
  require_p_below_q(p, Q);
  cx.need_order(1);
  if (p != 2.0 && !ev.function().is_real())
    throw ArgumentError("the Lp remainder identity is stated for real-valued f; use p = 2 or the reduction check");
  cx.report.params = {{"p", p}};
  const double c = p / (Q - p);
  cx.report.constant = c;
  const double U = cx.integrate(p, [&](double, Jets d, cd) { return apow(c * d[1], p); });
  const double V = cx.integrate(p, [&](double r, Jets d, cd) { return apow(d[0] / r, p); });
  double R;
  if (p == 2.0) {
    R = cx.integrate(p, [&](double r, Jets d, cd) { return std::norm(d[0] / r + c * d[1]); });
  } else {
    R = p * cx.integrate(p, [&](double r, Jets d, cd) {
      const double v = d[0].real() / r, u = -c * d[1].real();
      if (v == u) return 0.0;
      return i_p_weight(v, u, p) * (v - u) * (v - u);
    });
  }
  cx.report.terms = {{"u_norm_p", U}, {"v_norm_p", V}, {"remainder", R}};
  cx.report.lhs = U - V;
  cx.report.rhs = R;
  cx.report.remainders = {R};
  cx.inequality(V, U);
  return cx.finish();
}

IdentityReport hardy_l2_report(const Evaluator& ev) {
  Context cx(ev, IdentityKind::HardyL2);
  const double Q = cx.Q;
  if (Q < 3.0) throw DomainError("Q ≥ 3 required, got Q = " + fmt(Q));
  cx.need_order(1);
  const double c = (Q - 2.0) / 2.0;
  cx.report.constant = 1.0 / c;
  const double L = cx.integrate(2, [](double, Jets d, cd) { return std::norm(d[1]); });
  const double A = cx.integrate(2, [](double r, Jets d, cd) { return std::norm(d[0] / r); });
  const double B = cx.integrate(2, [&](double r, Jets d, cd) { return std::norm(d[1] + c * d[0] / r); });
  cx.report.terms = {{"radial_norm2", L}, {"hardy_norm2", A}, {"remainder", B}};
  cx.report.lhs = L;
  cx.report.rhs = c * c * A + B;
  cx.report.remainders = {B};
  cx.inequality(c * c * A, L);
  return cx.finish();
}

IdentityReport weighted_l2_report(const Evaluator& ev, double alpha, bool require_inequality) {
  Context cx(ev, IdentityKind::WeightedL2);
  const double Q = cx.Q;
  if (Q < 3.0) throw DomainError("Q ≥ 3 required, got Q = " + fmt(Q));
  cx.need_order(1);
  cx.report.params = {{"alpha", alpha}};
  const double c = (Q - 2.0) / 2.0 - alpha;
  const double L = cx.integrate(2, [&](double r, Jets d, cd) { return std::norm(d[1]) * std::pow(r, -2.0 * alpha); });
  const double A = cx.integrate(2, [&](double r, Jets d, cd) { return std::norm(d[0]) * std::pow(r, -2.0 * alpha - 2.0); });
  const double B = cx.integrate(2, [&](double r, Jets d, cd) {
    return std::norm(d[1] + c * d[0] / r) * std::pow(r, -2.0 * alpha);
  });
  cx.report.terms = {{"radial_norm2", L}, {"hardy_norm2", A}, {"remainder", B}};
  cx.report.lhs = L;
  cx.report.rhs = c * c * A + B;
  cx.report.remainders = {B};
  try {
    cx.report.constant = weighted_constant(Q, alpha);
    cx.inequality(c * c * A, L);
  } catch (const DegenerateConstantError& e) {
    cx.degenerate(e, require_inequality);
  }
  return cx.finish();
}

IdentityReport rellich_report(const Evaluator& ev) {
  Context cx(ev, IdentityKind::Rellich);
  const double Q = cx.Q;
  cx.report.constant = rellich_constant(Q);
  cx.need_order(2);
  const double k1 = Q * (Q - 4.0) / 4.0, k2 = (Q - 4.0) / 2.0;
  const double A = cx.integrate(2, [&](double r, Jets d, cd) {
    return std::norm(d[2] + (Q - 1.0) * d[1] / r + k1 * d[0] / (r * r));
  });
  const double B = cx.integrate(2, [&](double r, Jets d, cd) { return std::norm(d[1] / r + k2 * d[0] / (r * r)); });
  const double C = cx.integrate(2, [&](double r, Jets d, cd) { return std::norm(d[2] + (Q - 1.0) * d[1] / r); });
  const double D = cx.integrate(2, [&](double r, Jets d, cd) { return std::norm(d[0] / (r * r)); });
  cx.report.terms = {{"remainder_full", A}, {"remainder_weighted", B}, {"operator_norm2", C}, {"rellich_norm2", D}};
  cx.report.lhs = A + 2.0 * k1 * B;
  cx.report.rhs = C - k1 * k1 * D;
  cx.report.remainders = {A, B};
  cx.inequality(k1 * k1 * D, C);
  return cx.finish();
}

IdentityReport higher_order_report(const Evaluator& ev, int k, double alpha, bool require_inequality) {
  Context cx(ev, IdentityKind::HigherOrder);
  const double Q = cx.Q;
  if (Q < 3.0) throw DomainError("Q ≥ 3 required, got Q = " + fmt(Q));
  if (k < 1) throw ArgumentError("k must be >= 1");
  cx.need_order(k);
  cx.report.params = {{"alpha", alpha}, {"k", static_cast<double>(k)}};
  std::vector<double> c(k), P(k + 1, 1.0);
  for (int j = 0; j < k; ++j) {
    c[j] = (Q - 2.0) / 2.0 - (alpha + j);
    P[j + 1] = P[j] * c[j] * c[j];
  }
  const double L = cx.integrate(2, [&](double r, Jets d, cd) { return std::norm(d[k]) * std::pow(r, -2.0 * alpha); });
  const double M = cx.integrate(2, [&](double r, Jets d, cd) {
    return std::norm(d[0]) * std::pow(r, -2.0 * (k + alpha));
  });
  // Remainder l: ‖r^{−(l+α)}𝓡^{k−l}f + c_l 𝓡^{k−l−1}f / r^{l+1+α}‖².
  std::vector<double> rem(k);
  double rhs = P[k] * M;
  cx.report.terms["radial_norm2"] = L;
  cx.report.terms["main_norm2"] = M;
  for (int l = 0; l < k; ++l) {
    rem[l] = cx.integrate(2, [&](double r, Jets d, cd) {
      return std::norm(d[k - l] + c[l] * d[k - l - 1] / r) * std::pow(r, -2.0 * (l + alpha));
    });
    rhs += P[l] * rem[l];
    cx.report.terms["remainder_" + std::to_string(l)] = rem[l];
  }
  cx.report.lhs = L;
  cx.report.rhs = rhs;
  cx.report.remainders = rem;
  try {
    cx.report.constant = higher_order_constant(Q, k, alpha);
    cx.inequality(P[k] * M, L);
  } catch (const DegenerateConstantError& e) {
    cx.degenerate(e, require_inequality);
  }
  return cx.finish();
}

IdentityReport uncertainty_report(const Evaluator& ev, double p) {
  Context cx(ev, IdentityKind::Uncertainty);
  const double Q = cx.Q;
  require_p_below_q(p, Q);
  cx.need_order(1);
  cx.report.params = {{"p", p}};
  const double q = p / (p - 1.0);
  const double X = cx.integrate(p, [&](double, Jets d, cd) { return apow(d[1], p); });
  const double Y = cx.integrate(q, [&](double r, Jets d, cd) { return std::pow(r, q) * apow(d[0], q); });
  const double Z = cx.integrate(2, [](double, Jets d, cd) { return std::norm(d[0]); });
  const double k = (Q - p) / p;
  cx.report.constant = k;
  cx.report.lhs = std::pow(X, 1.0 / p) * std::pow(Y, 1.0 / q);
  cx.report.rhs = k * Z;
  cx.report.terms = {{"radial_p", X}, {"moment_q", Y}, {"mass2", Z}, {"slack", cx.report.lhs - cx.report.rhs}};
  if (p == 2.0 && Z > 0.0) cx.report.terms["product_ratio"] = X * Y / (Z * Z);
  cx.report.abs_residual = std::max(0.0, cx.report.rhs - cx.report.lhs);
  cx.inequality(cx.report.rhs, cx.report.lhs);
  return cx.finish(false);
}

IdentityReport log_hardy_report(const Evaluator& ev, double p, const std::vector<double>& radii) {
  Context cx(ev, IdentityKind::LogHardy);
  const double Q = cx.Q;
  const double C = log_hardy_constant(p);
  if (radii.empty()) throw ArgumentError("log-Hardy needs at least one R");
  for (double R : radii)
    if (!(R > 0.0) || !std::isfinite(R)) throw ArgumentError("R must be positive, got " + fmt(R));
  cx.need_order(1);
  cx.report.params = {{"p", p}};
  cx.report.radii = radii;
  cx.report.constant = C;
  const double K = cx.integrate(p, [&](double r, Jets d, cd) { return std::pow(r, p - Q) * apow(d[1], p); });
  const double rhs = C * std::pow(K, 1.0 / p);
  const auto [a, b] = ev.radial_support();
  double worst = 0.0;
  bool holds = true;
  for (double R : radii) {
    double lhs_p = cx.integrate(
        p,
        [&](double r, Jets d, cd fR) {
          if (r == R) return apow(R * d[1], p) / std::pow(R, Q);
          return apow((d[0] - fR) / std::log(R / r), p) / std::pow(r, Q);
        },
        R);
    // Outside [a, b] only f_R survives: M_R ∫ |log(R/r)|^{−p} dr/r.
    const double m = ev.orbit_moment(R, p);
    if (m > 0.0) {
      if (!(a < R && R < b)) throw IntegrationError("f_R is non-zero but R lies outside the radial support");
      lhs_p += m * (std::pow(std::log(R / a), 1.0 - p) + std::pow(std::log(b / R), 1.0 - p)) / (p - 1.0);
    }
    const double lhs = std::pow(lhs_p, 1.0 / p);
    cx.report.terms["lhs_R=" + fmt(R)] = lhs;
    worst = std::max(worst, lhs);
    holds = holds && lhs <= rhs * (1.0 + cx.report.tolerance) + kFloor;
  }
  cx.report.terms["rhs"] = rhs;
  cx.report.lhs = worst;
  cx.report.rhs = rhs;
  cx.report.abs_residual = std::max(0.0, worst - rhs);
  cx.report.inequality_checked = true;
  cx.report.inequality_holds = holds;
  cx.report.notes.push_back("lhs is the maximum over the R grid, a lower bound for the supremum over R > 0");
  return cx.finish(false);
}

IdentityReport ibp_report(const Evaluator& ev, double p) {
  Context cx(ev, IdentityKind::IbpFormula);
  const double Q = cx.Q;
  require_p_below_q(p, Q);
  cx.need_order(1);
  cx.report.params = {{"p", p}};
  const double c = p / (Q - p);
  const double L = cx.integrate(p, [&](double r, Jets d, cd) { return apow(d[0], p) / std::pow(r, p); });
  const double M = cx.integrate(p, [&](double r, Jets d, cd) {
    const double m = std::abs(d[0]);
    if (m == 0.0) return 0.0;
    return std::pow(m, p - 2.0) * (d[0] * std::conj(d[1])).real() / std::pow(r, p - 1.0);
  });
  cx.report.terms = {{"weighted_norm_p", L}, {"cross_term", M}};
  cx.report.lhs = L;
  cx.report.rhs = -c * M;
  return cx.finish();
}

IdentityReport run_identity(const Evaluator& ev, const IdentityJob& job) {
  switch (job.kind) {
    case IdentityKind::HardyLp: return hardy_lp_report(ev, job.p);
    case IdentityKind::HardyL2: return hardy_l2_report(ev);
    case IdentityKind::WeightedL2: return weighted_l2_report(ev, job.alpha, job.require_inequality);
    case IdentityKind::Rellich: return rellich_report(ev);
    case IdentityKind::HigherOrder: return higher_order_report(ev, job.k, job.alpha, job.require_inequality);
    case IdentityKind::Uncertainty: return uncertainty_report(ev, job.p);
    case IdentityKind::LogHardy: return log_hardy_report(ev, job.p, job.radii);
    case IdentityKind::IbpFormula: return ibp_report(ev, job.p);
    case IdentityKind::ComplexReduction: break;
  }
  throw ArgumentError("the complex reduction check does not take a test function");
}

IdentityReport run_identity(const QuasiNorm& norm, const TestFunction& f, const IdentityJob& job,
                            const QuadratureSpec& spec, EvalPath path, const RadialOperatorMethod& method) {
  check_preconditions(job, norm.group().homogeneous_dimension());
  const auto ev = make_evaluator(f, norm, spec, required_order(job), path, method);
  return run_identity(*ev, job);
}

}  // namespace hardy
