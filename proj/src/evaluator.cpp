#include "hardy/evaluator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

constexpr int kMaxOrder = Jet::kCapacity - 1;

void check_order(int order) {
  if (order < 0 || order > kMaxOrder)
    throw CapabilityError("jet order must lie in [0, " + std::to_string(kMaxOrder) + "]");
}

}  // namespace

std::string to_string(EvalPath path) { return path == EvalPath::Separable ? "separable" : "general"; }

Evaluator::Evaluator(TestFunction f, QuasiNorm norm, QuadratureSpec spec, int order)
    : f_(std::move(f)), norm_(std::move(norm)), spec_(spec), order_(order) {
  check_order(order_);
  spec_.validate();
  support_ = f_.is_zero() ? std::pair{1.0, 1.0} : f_.radial_support(norm_);
  if (!(support_.first > 0.0) || !std::isfinite(support_.second))
    throw DomainError("test function support must be a compact subset of G without the origin");
}

// ---- separable path ----

SeparableEvaluator::SeparableEvaluator(TestFunction f, QuasiNorm norm, QuadratureSpec spec, int order,
                                       bool sphere_factors)
    : Evaluator(std::move(f), std::move(norm), spec, order), sphere_factors_(sphere_factors) {
  if (!f_.is_separable()) throw CapabilityError("the separable path needs f = g(|x|)·u(x/|x|)");
  if (f_.is_zero()) return;
  if (order_ > f_.profile().max_order())
    throw CapabilityError("profile " + f_.profile().describe() + " provides derivatives up to order " +
                          std::to_string(f_.profile().max_order()) + ", requested " + std::to_string(order_));
  breakpoints_ = f_.profile().breakpoints();
}

double SeparableEvaluator::sphere_moment(double degree) const {
  if (!sphere_factors_) return 1.0;
  {
    std::lock_guard lock(mu_);
    if (auto it = moments_.find(degree); it != moments_.end()) return it->second;
  }
  const double deg[1] = {degree};
  prepare(deg);
  std::lock_guard lock(mu_);
  return moments_.at(degree);
}

void SeparableEvaluator::prepare(std::span<const double> degrees) const {
  if (!sphere_factors_ || f_.is_zero()) return;
  std::vector<double> missing;
  {
    std::lock_guard lock(mu_);
    for (double s : degrees)
      if (!moments_.count(s) && std::find(missing.begin(), missing.end(), s) == missing.end()) missing.push_back(s);
  }
  if (missing.empty()) return;
  const AngularPart& u = f_.angular();
  const auto values = sphere_integrate(
      missing.size(),
      [&](std::span<const double> y, std::span<double> out) {
        const double m = std::abs(u(y));
        for (std::size_t i = 0; i < missing.size(); ++i) out[i] = m == 0.0 ? 0.0 : std::pow(m, missing[i]);
      },
      norm_, spec_);
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < missing.size(); ++i) moments_[missing[i]] = values[i];
}

RealEstimate SeparableEvaluator::integrate(const JetExpr& expr, double degree, std::optional<double> R) const {
  if (f_.is_zero()) return {};
  const double S = sphere_moment(degree);
  if (S == 0.0) return {};
  const RadialProfile& g = f_.profile();
  const double q = homogeneous_dimension();
  const auto [a, b] = support_;
  const std::complex<double> g_r = R ? std::complex<double>(g.value(*R)) : 0.0;
  std::vector<double> breaks = breakpoints_;
  if (R) breaks.push_back(*R);
  const int order = order_;
  const auto radial = integrate_radial(
      [&](double r) {
        std::array<double, Jet::kCapacity> d{};
        std::array<std::complex<double>, Jet::kCapacity> dc{};
        g.derivatives(r, order, d);
        for (int k = 0; k <= order; ++k) dc[k] = d[k];
        return expr(r, std::span<const std::complex<double>>(dc.data(), order + 1), g_r) * std::pow(r, q - 1.0);
      },
      a, b, breaks, spec_);
  return {radial.value * S, radial.error * std::abs(S)};
}

double SeparableEvaluator::orbit_moment(double R, double p) const {
  if (f_.is_zero()) return 0.0;
  const double g = std::abs(f_.profile().value(R));
  if (g == 0.0) return 0.0;
  return std::pow(g, p) * sphere_moment(p);
}

// ---- general path ----

CubatureEvaluator::CubatureEvaluator(TestFunction f, QuasiNorm norm, QuadratureSpec spec, int order,
                                     RadialOperatorMethod method, kernels::Exec exec)
    : Evaluator(std::move(f), std::move(norm), spec, order), method_(method), exec_(exec),
      dim_(norm_.group().dim()) {
  if (method_.mode == RadialOperatorMethod::Mode::Analytic) {
    if (!f_.is_separable()) throw CapabilityError("analytic radial derivatives need a separable function");
  } else {
    method_.validate();
  }
  if (f_.is_zero()) return;
  // The whole annulus a ≤ |x| ≤ b, so that f_R is seen wherever it lives.
  const SupportBox box = SupportBox::ball(norm_, support_.second, support_.first);
  const CubatureRule rule(box, spec_, norm_);
  fine_ = build(rule);
  const CubatureRule coarse = rule.coarse();
  if (!rule.nested()) {
    coarse_ = build(coarse);
    return;
  }
  // Same nodes, coarse weights.
  coarse_.width = fine_.width;
  std::array<double, kMaxDim> x{};
  for (std::size_t i = 0; i < fine_.size() && fine_.index[i] < coarse.size(); ++i) {
    const double w = coarse.node(fine_.index[i], std::span<double>(x.data(), dim_));
    if (w == 0.0) continue;
    coarse_.weight.push_back(w);
    coarse_.index.push_back(fine_.index[i]);
    const auto row = fine_.row(i);
    coarse_.rows.insert(coarse_.rows.end(), row.begin(), row.end());
  }
}

kernels::NodeTable CubatureEvaluator::build(const CubatureRule& rule) const {
  const std::size_t width = 1 + dim_ + 2 * static_cast<std::size_t>(order_ + 1);
  const auto [a, b] = support_;
  kernels::NodeTable full = kernels::tabulate(
      rule, width,
      [&](std::span<const double> x, std::span<double> out) {
        const double r = norm_(x);
        out[0] = r;
        std::copy(x.begin(), x.end(), out.begin() + 1);
        if (!(r >= a && r <= b)) {
          out[0] = -1.0;
          return;
        }
        std::array<std::complex<double>, Jet::kCapacity> jet{};
        radial_jet(f_, x, order_, method_, norm_, jet);
        for (int k = 0; k <= order_; ++k) {
          out[1 + dim_ + 2 * k] = jet[k].real();
          out[2 + dim_ + 2 * k] = jet[k].imag();
        }
      },
      exec_);
  kernels::NodeTable kept;
  kept.width = width;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto row = full.row(i);
    if (row[0] < 0.0) continue;
    kept.weight.push_back(full.weight[i]);
    kept.index.push_back(full.index[i]);
    kept.rows.insert(kept.rows.end(), row.begin(), row.end());
  }
  return kept;
}

double CubatureEvaluator::reduce(const kernels::NodeTable& table, const JetExpr& expr, std::optional<double> R) const {
  if (table.size() == 0) return 0.0;
  const auto& group = norm_.group();
  const std::size_t n = dim_;
  const int order = order_;
  const auto sums = kernels::reduce(
      table, 1,
      [&](std::span<const double> row, std::span<double> out) {
        const double r = row[0];
        std::array<std::complex<double>, Jet::kCapacity> d{};
        for (int k = 0; k <= order; ++k) d[k] = {row[1 + n + 2 * k], row[2 + n + 2 * k]};
        std::complex<double> f_r = 0.0;
        if (R) {
          std::array<double, kMaxDim> y{};
          group.dilate(*R / r, row.subspan(1, n), std::span<double>(y.data(), n));
          f_r = f_.eval(std::span<const double>(y.data(), n), norm_);
        }
        out[0] = expr(r, std::span<const std::complex<double>>(d.data(), order + 1), f_r);
      },
      exec_);
  return sums[0];
}

RealEstimate CubatureEvaluator::integrate(const JetExpr& expr, double degree, std::optional<double> R) const {
  (void)degree;
  if (f_.is_zero()) return {};
  const double fine = reduce(fine_, expr, R);
  const double coarse = reduce(coarse_, expr, R);
  return {fine, std::abs(fine - coarse)};
}

double CubatureEvaluator::orbit_moment(double R, double p) const {
  if (f_.is_zero()) return 0.0;
  const auto& group = norm_.group();
  const std::size_t n = dim_;
  return sphere_integrate(
      [&](std::span<const double> y) {
        std::array<double, kMaxDim> z{};
        group.dilate(R, y, std::span<double>(z.data(), n));
        const double m = std::abs(f_.eval(std::span<const double>(z.data(), n), norm_));
        return m == 0.0 ? 0.0 : std::pow(m, p);
      },
      norm_, spec_);
}

std::unique_ptr<Evaluator> make_evaluator(const TestFunction& f, const QuasiNorm& norm, const QuadratureSpec& spec,
                                          int order, EvalPath path, const RadialOperatorMethod& method) {
  if (path == EvalPath::Separable && f.is_separable())
    return std::make_unique<SeparableEvaluator>(f, norm, spec, order);
  return std::make_unique<CubatureEvaluator>(f, norm, spec, order, method);
}

}  // namespace hardy
