#include "hardy/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>

#include "hardy/errors.hpp"
#include "hardy/kernels.hpp"

namespace hardy {

namespace {

constexpr std::size_t kMaxTensorDim = 3;
constexpr std::size_t kMaxQuasiRandomDim = 6;
constexpr int kMaxDepth = 40;

// Gauss–Legendre nodes on [−1, 1], cached per order.
const Rule1D& reference_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Rule1D>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
    if (!t) throw IntegrationError("cannot build a Gauss-Legendre rule of order " + std::to_string(n));
    auto rule = std::make_unique<Rule1D>();
    rule->x.resize(n);
    rule->w.resize(n);
    for (int i = 0; i < n; ++i)
      gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &rule->x[i], &rule->w[i], t);
    gsl_integration_glfixed_table_free(t);
    slot = std::move(rule);
  }
  return *slot;
}

double panel_gauss(const RadialFn& h, double a, double b, int order, double* abs_out) {
  const Rule1D& ref = reference_legendre(order);
  const double c = 0.5 * (a + b), s = 0.5 * (b - a);
  double sum = 0.0, abs_sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double v = h(c + s * ref.x[i]);
    if (!std::isfinite(v))
      throw IntegrationError("non-finite radial integrand at r = " + std::to_string(c + s * ref.x[i]));
    sum += ref.w[i] * v;
    abs_sum += ref.w[i] * std::abs(v);
  }
  if (abs_out) *abs_out = abs_sum * s;
  return sum * s;
}

struct PanelResult {
  double value = 0.0;
  double error = 0.0;
};

PanelResult adapt(const RadialFn& h, double a, double b, double whole, int order, double eps, double floor,
                  int depth) {
  const double m = 0.5 * (a + b);
  double abs_l = 0.0, abs_r = 0.0;
  const double left = panel_gauss(h, a, m, order, &abs_l);
  const double right = panel_gauss(h, m, b, order, &abs_r);
  const double fine = left + right;
  const double diff = std::abs(fine - whole);
  if (diff <= eps * std::max(abs_l + abs_r, floor) || depth >= kMaxDepth || m <= a || m >= b)
    return {fine, diff};
  const PanelResult l = adapt(h, a, m, left, order, eps, floor, depth + 1);
  const PanelResult r = adapt(h, m, b, right, order, eps, floor, depth + 1);
  return {l.value + r.value, l.error + r.error};
}

double frac(double v) { return v - std::floor(v); }

// Root of x^{d+1} = x + 1, the generator of the R_d Kronecker sequence.
double harmonious_ratio(std::size_t d) {
  double x = 2.0;
  for (int i = 0; i < 64; ++i) x = std::pow(1.0 + x, 1.0 / static_cast<double>(d + 1));
  return x;
}

// exp(−1/(t(1−t))) at t = (i+½)/N, cut to zero where it falls below 1e-16 of its peak.
// Weighting the Kronecker average this way turns its O(1/N) error into a
// super-algebraic one for smooth integrands that vanish near the box faces.
double birkhoff_window(std::size_t i, std::size_t count) {
  const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
  const double e = 1.0 / (t * (1.0 - t));
  return e > 4.0 + 36.8 ? 0.0 : std::exp(-e);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (radial_order < 4) throw ArgumentError("quad.radial_order must be >= 4");
  if (radial_order > 128) throw ArgumentError("quad.radial_order must be <= 128");
  if (radial_panels < 1) throw ArgumentError("quad.radial_panels must be >= 1");
  if (cubature_points_per_dim < 2) throw ArgumentError("quad.cubature_points must be >= 2");
  if (!(annulus_lambda > 1.0 && annulus_lambda <= 8.0)) throw ArgumentError("quad.annulus_lambda must lie in (1, 8]");
  if (mc_samples < 16) throw ArgumentError("quad.mc_samples must be >= 16");
  if (!(target_tol > 0.0) || !std::isfinite(target_tol)) throw ArgumentError("quad.tol must be positive");
}

SupportBox SupportBox::ball(const QuasiNorm& norm, double radius, double rho0) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  const auto& g = norm.group();
  SupportBox box;
  box.rho0 = rho0;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const double h = std::pow(radius, g.weight(i)) * norm.coordinate_bound(i);
    box.lo.push_back(-h);
    box.hi.push_back(h);
  }
  return box;
}

SupportBox SupportBox::dilated(const DilationGroup& group, double factor) const {
  if (!(factor > 0.0)) throw DomainError("dilation factor must be positive");
  if (group.dim() != dim()) throw ArgumentError("box dimension does not match the group");
  SupportBox out = *this;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double s = std::pow(factor, group.weight(i));
    out.lo[i] *= s;
    out.hi[i] *= s;
  }
  out.rho0 *= factor;
  return out;
}

double SupportBox::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
  return v;
}

void SupportBox::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw ArgumentError("support box needs matching, non-empty bounds");
  for (std::size_t i = 0; i < dim(); ++i)
    if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw ArgumentError("support box interval " + std::to_string(i) + " is empty or infinite");
  if (!(rho0 >= 0.0)) throw ArgumentError("support box exclusion radius must be >= 0");
}

Rule1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ArgumentError("Gauss-Legendre order must be >= 1");
  const Rule1D& ref = reference_legendre(n);
  const double c = 0.5 * (a + b), s = 0.5 * (b - a);
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c + s * ref.x[i];
    r.w[i] = s * ref.w[i];
  }
  return r;
}

Rule1D gauss_jacobi(int n, double a, double b, double alpha, double beta) {
  if (n < 1) throw ArgumentError("Gauss-Jacobi order must be >= 1");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw ArgumentError("Gauss-Jacobi exponents must exceed -1");
  if (!(a < b)) throw ArgumentError("Gauss-Jacobi interval is empty");
  gsl_integration_fixed_workspace* ws =
      gsl_integration_fixed_alloc(gsl_integration_fixed_jacobi, static_cast<std::size_t>(n), a, b, alpha, beta);
  if (!ws) throw IntegrationError("cannot build a Gauss-Jacobi rule");
  Rule1D r;
  const double* x = gsl_integration_fixed_nodes(ws);
  const double* w = gsl_integration_fixed_weights(ws);
  r.x.assign(x, x + n);
  r.w.assign(w, w + n);
  gsl_integration_fixed_free(ws);
  return r;
}

Rule1D composite_gauss(double a, double b, int panels, int order) {
  if (panels < 1) throw ArgumentError("composite rule needs at least one panel");
  Rule1D out;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = p + 1 == panels ? b : lo + h;
    const Rule1D r = gauss_legendre(order, lo, hi);
    out.x.insert(out.x.end(), r.x.begin(), r.x.end());
    out.w.insert(out.w.end(), r.w.begin(), r.w.end());
  }
  return out;
}

RealEstimate integrate_radial(const RadialFn& h, double a, double b, std::span<const double> breakpoints,
                              const QuadratureSpec& spec) {
  if (!(a < b)) {
    if (a == b) return {};
    throw ArgumentError("radial interval must satisfy a < b");
  }
  std::vector<double> edges;
  const int n = spec.radial_panels;
  if (a > 0.0 && b / a > 4.0) {
    const double ratio = std::log(b / a) / n;
    for (int i = 0; i <= n; ++i) edges.push_back(a * std::exp(ratio * i));
  } else {
    for (int i = 0; i <= n; ++i) edges.push_back(a + (b - a) * i / n);
  }
  edges.front() = a;
  edges.back() = b;
  for (double bp : breakpoints)
    if (bp > a && bp < b) edges.push_back(bp);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const std::size_t panels = edges.size() - 1;
  std::vector<double> whole(panels), abs_whole(panels);
  double total_abs = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    whole[i] = panel_gauss(h, edges[i], edges[i + 1], spec.radial_order, &abs_whole[i]);
    total_abs += abs_whole[i];
  }
  const double eps = std::min(spec.target_tol * 1e-4, 1e-12);
  const double floor = 1e-6 * total_abs;
  std::vector<double> values(panels);
  double err = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const PanelResult r = adapt(h, edges[i], edges[i + 1], whole[i], spec.radial_order, eps, floor, 0);
    values[i] = r.value;
    err += r.error;
  }
  return {kernels::pairwise_sum(values), err};
}

CubatureRule::CubatureRule(SupportBox box, const QuadratureSpec& spec, std::optional<QuasiNorm> exclusion)
    : CubatureRule(std::move(box), spec, std::move(exclusion), spec.cubature_points_per_dim, spec.mc_samples) {}

CubatureRule::CubatureRule(SupportBox box, const QuadratureSpec& spec, std::optional<QuasiNorm> exclusion,
                           int per_dim, std::size_t samples)
    : box_(std::move(box)), spec_(spec), exclusion_(std::move(exclusion)), per_dim_(per_dim), samples_(samples) {
  build();
}

void CubatureRule::build() {
  box_.validate();
  const std::size_t n = box_.dim();
  if (n > kMaxQuasiRandomDim)
    throw CapabilityError("cubature supports at most " + std::to_string(kMaxQuasiRandomDim) +
                          " coordinates, got " + std::to_string(n));
  if (box_.rho0 > 0.0 && !exclusion_) throw ArgumentError("an exclusion radius needs a quasi-norm");
  if (exclusion_ && exclusion_->group().dim() != n) throw ArgumentError("exclusion norm dimension mismatch");
  tensor_ = n <= kMaxTensorDim;
  if (tensor_) {
    const int order = std::min(16, per_dim_);
    const int panels = std::max(1, per_dim_ / order);
    axes_.clear();
    size_ = 1;
    for (std::size_t d = 0; d < n; ++d) {
      axes_.push_back(composite_gauss(box_.lo[d], box_.hi[d], panels, order));
      size_ *= axes_.back().x.size();
    }
  } else {
    const double phi = harmonious_ratio(n);
    std::mt19937_64 rng(spec_.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    step_.resize(n);
    shift_.resize(n);
    for (std::size_t d = 0; d < n; ++d) {
      step_[d] = frac(1.0 / std::pow(phi, static_cast<double>(d + 1)));
      shift_[d] = unit(rng);
    }
    size_ = samples_;
    double total = 0.0;
    for (std::size_t i = 0; i < samples_; ++i) total += birkhoff_window(i, samples_);
    qmc_weight_ = box_.volume() / total;
  }
}

double CubatureRule::node(std::size_t i, std::span<double> x) const {
  const std::size_t n = dim();
  double w;
  if (tensor_) {
    w = 1.0;
    std::size_t rest = i;
    for (std::size_t d = n; d-- > 0;) {
      const Rule1D& ax = axes_[d];
      const std::size_t k = rest % ax.x.size();
      rest /= ax.x.size();
      x[d] = ax.x[k];
      w *= ax.w[k];
    }
  } else {
    const double j = static_cast<double>(i);
    for (std::size_t d = 0; d < n; ++d)
      x[d] = box_.lo[d] + (box_.hi[d] - box_.lo[d]) * frac(shift_[d] + frac(j * step_[d]));
    w = qmc_weight_ * birkhoff_window(i, samples_);
    if (w == 0.0) return 0.0;
  }
  if (box_.rho0 > 0.0 && (*exclusion_)(std::span<const double>(x.data(), n)) < box_.rho0) return 0.0;
  return w;
}

CubatureRule CubatureRule::coarse() const {
  return CubatureRule(box_, spec_, exclusion_, std::max(2, per_dim_ / 2), std::max<std::size_t>(16, samples_ / 2));
}

Estimate integrate_lebesgue(const PointFn& f, const SupportBox& box, const QuadratureSpec& spec,
                            std::optional<QuasiNorm> exclusion) {
  spec.validate();
  const kernels::NodeFn fn = [&](std::span<const double> x, std::span<double> out) {
    const std::complex<double> v = f(x);
    out[0] = v.real();
    out[1] = v.imag();
  };
  const CubatureRule rule(box, spec, exclusion);
  const auto fine = kernels::integrate_nodes(rule, 2, fn);
  const auto coarse = kernels::integrate_nodes(rule.coarse(), 2, fn);
  const std::complex<double> value(fine[0], fine[1]);
  return {value, std::abs(value - std::complex<double>(coarse[0], coarse[1]))};
}

ScalingResidual haar_scaling_residual(const PointFn& f, const DilationGroup& group, double lambda,
                                      const SupportBox& box, const QuadratureSpec& spec,
                                      std::optional<QuasiNorm> exclusion) {
  if (!(lambda > 0.0)) throw DomainError("scaling factor must be positive");
  const auto base = integrate_lebesgue(f, box, spec, exclusion).value;
  const PointFn scaled = [&](std::span<const double> x) {
    std::array<double, kMaxDim> y{};
    group.dilate(lambda, x, std::span<double>(y.data(), x.size()));
    return f(std::span<const double>(y.data(), x.size()));
  };
  const auto dil = integrate_lebesgue(scaled, box.dilated(group, 1.0 / lambda), spec, exclusion).value;
  const auto expected = std::pow(lambda, -group.homogeneous_dimension()) * base;
  const double diff = std::abs(dil - expected);
  if (std::abs(base) < 1e-30) return {diff, true};
  return {diff / std::abs(expected), false};
}

double annulus_window(double r, double lambda) {
  if (!(r > 1.0 && r < lambda)) return 0.0;
  const double t = std::log(r) / std::log(lambda);
  return std::exp(-1.0 / (t * (1.0 - t)));
}

std::vector<double> sphere_integrate(std::size_t count,
                                     const std::function<void(std::span<const double>, std::span<double>)>& u,
                                     const QuasiNorm& norm, const QuadratureSpec& spec) {
  spec.validate();
  const double lambda = spec.annulus_lambda;
  const double q = norm.group().homogeneous_dimension();
  const RealEstimate mass =
      integrate_radial([lambda](double r) { return annulus_window(r, lambda) / r; }, 1.0, lambda, spec);
  const std::size_t n = norm.group().dim();
  const kernels::NodeFn fn = [&](std::span<const double> x, std::span<double> out) {
    const double r = norm(x);
    const double w = annulus_window(r, lambda);
    if (w == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    std::array<double, kMaxDim> y{};
    norm.group().dilate(1.0 / r, x, std::span<double>(y.data(), n));
    u(std::span<const double>(y.data(), n), out);
    const double scale = w * std::pow(r, -q);
    for (double& v : out) v *= scale;
  };
  const CubatureRule rule(SupportBox::ball(norm, lambda, 1.0), spec, norm);
  auto sums = kernels::integrate_nodes(rule, count, fn);
  for (double& s : sums) s /= mass.value;
  return sums;
}

double sphere_integrate(const RealPointFn& u, const QuasiNorm& norm, const QuadratureSpec& spec) {
  return sphere_integrate(
      1, [&](std::span<const double> y, std::span<double> out) { out[0] = u(y); }, norm, spec)[0];
}

std::complex<double> polar_integrate(const RadialFn& g, double a, double b, const PointFn& u,
                                     const QuasiNorm& norm, const QuadratureSpec& spec) {
  if (!(a > 0.0)) throw DomainError("radial support must stay away from the origin");
  const double q = norm.group().homogeneous_dimension();
  const RealEstimate radial = integrate_radial([&](double r) { return g(r) * std::pow(r, q - 1.0); }, a, b, spec);
  if (radial.value == 0.0) return 0.0;
  const auto s = sphere_integrate(
      2,
      [&](std::span<const double> y, std::span<double> out) {
        const auto v = u(y);
        out[0] = v.real();
        out[1] = v.imag();
      },
      norm, spec);
  return radial.value * std::complex<double>(s[0], s[1]);
}

}  // namespace hardy
