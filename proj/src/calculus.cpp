#include "hardy/calculus.hpp"

#include <array>
#include <cmath>
#include <map>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

constexpr int kMaxRadialOrder = Jet::kCapacity - 1;

// Central stencil half-width giving `order` accuracy up to derivative k_max.
int stencil_half_width(int k_max, int order) { return (k_max + 1) / 2 - 1 + order / 2; }

// Weights on the integer nodes −J..J for derivatives 1..k_max, row m−1.
const std::vector<std::vector<double>>& central_weights(int half_width, int k_max) {
  thread_local std::map<std::pair<int, int>, std::vector<std::vector<double>>> cache;
  auto [it, inserted] = cache.try_emplace({half_width, k_max});
  if (inserted) {
    std::vector<double> nodes;
    for (int j = -half_width; j <= half_width; ++j) nodes.push_back(j);
    for (int m = 1; m <= k_max; ++m) it->second.push_back(fornberg_weights(m, nodes, 0.0));
  }
  return it->second;
}

void orbit_derivatives(const TestFunction& f, std::span<const double> x, double step, int half_width, int k_max,
                       const QuasiNorm& norm, std::span<std::complex<double>> out) {
  const auto& group = norm.group();
  const std::size_t n = x.size();
  std::array<std::complex<double>, 32> samples{};
  std::array<double, kMaxDim> y{};
  for (int j = -half_width; j <= half_width; ++j) {
    if (j == 0) {
      samples[half_width] = f.eval(x, norm);
      continue;
    }
    group.dilate(1.0 + j * step, x, std::span<double>(y.data(), n));
    samples[j + half_width] = f.eval(std::span<const double>(y.data(), n), norm);
  }
  const auto& w = central_weights(half_width, k_max);
  double hp = 1.0;
  for (int m = 1; m <= k_max; ++m) {
    hp *= step;
    std::complex<double> s = 0.0;
    for (int j = 0; j <= 2 * half_width; ++j) s += w[m - 1][j] * samples[j];
    out[m] = s / hp;
  }
}

}  // namespace

void RadialOperatorMethod::validate() const {
  if (mode == Mode::Analytic) return;
  if (!(h > 0.0) || !(h < 0.5)) throw ArgumentError("calculus.h must lie in (0, 0.5)");
  if (order != 2 && order != 4 && order != 6) throw ArgumentError("calculus.order must be 2, 4 or 6");
}

std::vector<double> fornberg_weights(int m, std::span<const double> nodes, double x0) {
  const int n = static_cast<int>(nodes.size());
  if (m < 0 || m >= n) throw ArgumentError("Fornberg weights need more nodes than the derivative order");
  // c[j][k]: weight of node j for derivative k.
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

void radial_jet(const TestFunction& f, std::span<const double> x, int k_max, const RadialOperatorMethod& method,
                const QuasiNorm& norm, std::span<std::complex<double>> out) {
  if (k_max < 0 || k_max > kMaxRadialOrder)
    throw CapabilityError("radial derivative order must lie in [0, " + std::to_string(kMaxRadialOrder) + "]");
  if (out.size() < static_cast<std::size_t>(k_max + 1)) throw ArgumentError("radial jet buffer too small");
  if (x.size() != norm.group().dim()) throw ArgumentError("point dimension does not match the group");
  const double r = norm(x);
  if (!(r > 0.0)) throw DomainError("the radial derivative is undefined at the origin");

  if (method.mode == RadialOperatorMethod::Mode::Analytic) {
    if (!f.is_separable()) throw CapabilityError("analytic radial derivatives need a separable function");
    if (k_max > f.profile().max_order())
      throw CapabilityError("profile " + f.profile().describe() + " provides derivatives up to order " +
                            std::to_string(f.profile().max_order()));
    if (f.is_zero()) {
      std::fill(out.begin(), out.begin() + k_max + 1, 0.0);
      return;
    }
    std::array<double, Jet::kCapacity> g{};
    f.profile().derivatives(r, k_max, g);
    std::array<double, kMaxDim> y{};
    norm.group().dilate(1.0 / r, x, std::span<double>(y.data(), x.size()));
    const std::complex<double> u = f.angular()(std::span<const double>(y.data(), x.size()));
    for (int k = 0; k <= k_max; ++k) out[k] = g[k] * u;
    return;
  }

  method.validate();
  out[0] = f.eval(x, norm);
  if (k_max == 0) return;
  const int half = stencil_half_width(k_max, method.order);
  std::array<std::complex<double>, Jet::kCapacity> coarse{}, fine{};
  orbit_derivatives(f, x, method.h, half, k_max, norm, coarse);
  if (method.richardson) {
    orbit_derivatives(f, x, 0.5 * method.h, half, k_max, norm, fine);
    const double gain = std::ldexp(1.0, method.order);
    for (int k = 1; k <= k_max; ++k) coarse[k] = (gain * fine[k] - coarse[k]) / (gain - 1.0);
  }
  double rp = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    rp *= r;
    out[k] = coarse[k] / rp;
  }
}

std::complex<double> radial_derivative(const TestFunction& f, const Point& x, int k,
                                       const RadialOperatorMethod& method, const QuasiNorm& norm) {
  if (k < 1) throw ArgumentError("radial derivative order must be >= 1");
  std::array<std::complex<double>, Jet::kCapacity> jet{};
  radial_jet(f, x.coords(), k, method, norm, jet);
  return jet[k];
}

std::complex<double> euler_apply(const TestFunction& f, const Point& x, const QuasiNorm& norm,
                                 const RadialOperatorMethod& method) {
  return norm(x) * radial_derivative(f, x, 1, method, norm);
}

double check_homogeneity(const TestFunction& f, double nu, std::span<const std::pair<Point, double>> samples,
                         const QuasiNorm& norm) {
  if (samples.empty()) throw ArgumentError("homogeneity check needs at least one sample");
  std::vector<double> diff, mag;
  double scale = 0.0;
  for (const auto& [x, lambda] : samples) {
    if (!(lambda > 0.0)) throw DomainError("homogeneity samples need lambda > 0");
    if (!(norm(x) > 0.0)) throw DomainError("homogeneity samples must avoid the origin");
    const auto fx = f.eval(x, norm);
    const auto fl = f.eval(norm.group().dilate(lambda, x), norm);
    diff.push_back(std::abs(fl - std::pow(lambda, nu) * fx));
    mag.push_back(std::abs(fx));
    scale = std::max(scale, std::abs(fx));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < diff.size(); ++i)
    worst = std::max(worst, diff[i] / std::max({mag[i], 1e-12 * scale, 1e-300}));
  return worst;
}

double commutation_residual(const TestFunction& f, double alpha, const Point& x, const QuasiNorm& norm,
                            const RadialOperatorMethod& method) {
  const double r = norm(x);
  const auto lhs = std::pow(r, -alpha) * radial_derivative(f, x, 1, method, norm);
  const TestFunction weighted = f.times_norm_power(norm, -alpha);
  const auto rhs = radial_derivative(weighted, x, 1, method, norm) + alpha * f.eval(x, norm) / std::pow(r, alpha + 1.0);
  return std::abs(lhs - rhs);
}

}  // namespace hardy
