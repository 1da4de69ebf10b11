#pragma once

// Integral evaluation of pointwise expressions in f and its radial jet.
//
// An expression receives r = |x|, the jet d_j = (𝓡^j f)(x) for j = 0..order
// and optionally f_R(x) = f(D_{R/|x|} x). Every expression handed to an
// evaluator must be absolutely homogeneous of the stated degree s in
// (d, f_R): scaling all of them by c multiplies the value by |c|^s.
//
// Two paths implement the same contract:
//   Separable: f = g(|x|)·u(x/|x|). The integral factors into a radial
//     integral with d_j = g^{(j)}(r) and the sphere moment ∫_℘ |u|^s dσ.
//   General: the jet comes from finite differences along dilation orbits at
//     every cubature node; node values are tabulated once and reduced per
//     expression.

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hardy/calculus.hpp"
#include "hardy/kernels.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/testfuncs.hpp"

namespace hardy {

enum class EvalPath { Separable, General };

std::string to_string(EvalPath path);

using JetExpr = std::function<double(double r, std::span<const std::complex<double>> d, std::complex<double> f_r)>;

class Evaluator {
 public:
  virtual ~Evaluator() = default;

  virtual EvalPath path() const noexcept = 0;

  /// ∫_G expr dx with an error estimate. `R` enables f_R.
  virtual RealEstimate integrate(const JetExpr& expr, double degree, std::optional<double> R = std::nullopt) const = 0;

  /// ∫_℘ |f(D_R y)|^p dσ(y).
  virtual double orbit_moment(double R, double p) const = 0;

  /// Precomputes whatever the given homogeneity degrees need.
  virtual void prepare(std::span<const double> degrees) const { (void)degrees; }

  const QuasiNorm& norm() const noexcept { return norm_; }
  const TestFunction& function() const noexcept { return f_; }
  double homogeneous_dimension() const noexcept { return norm_.group().homogeneous_dimension(); }
  int order() const noexcept { return order_; }
  const QuadratureSpec& spec() const noexcept { return spec_; }
  /// supp f ⊂ {a ≤ |x| ≤ b}.
  std::pair<double, double> radial_support() const noexcept { return support_; }

 protected:
  Evaluator(TestFunction f, QuasiNorm norm, QuadratureSpec spec, int order);

  TestFunction f_;
  QuasiNorm norm_;
  QuadratureSpec spec_;
  int order_;
  std::pair<double, double> support_;
};

class SeparableEvaluator final : public Evaluator {
 public:
  /// With `sphere_factors` false every sphere moment is taken as 1, which is
  /// exact for ratios of integrals of equal degree.
  SeparableEvaluator(TestFunction f, QuasiNorm norm, QuadratureSpec spec, int order, bool sphere_factors = true);

  EvalPath path() const noexcept override { return EvalPath::Separable; }
  RealEstimate integrate(const JetExpr& expr, double degree, std::optional<double> R = std::nullopt) const override;
  double orbit_moment(double R, double p) const override;
  void prepare(std::span<const double> degrees) const override;

  /// ∫_℘ |u|^s dσ, cached per degree.
  double sphere_moment(double degree) const;

 private:
  bool sphere_factors_;
  std::vector<double> breakpoints_;
  mutable std::mutex mu_;
  mutable std::map<double, double> moments_;
};

class CubatureEvaluator final : public Evaluator {
 public:
  CubatureEvaluator(TestFunction f, QuasiNorm norm, QuadratureSpec spec, int order, RadialOperatorMethod method,
                    kernels::Exec exec = kernels::Exec::Parallel);

  EvalPath path() const noexcept override { return EvalPath::General; }
  RealEstimate integrate(const JetExpr& expr, double degree, std::optional<double> R = std::nullopt) const override;
  double orbit_moment(double R, double p) const override;

  std::size_t nodes() const noexcept { return fine_.size(); }

 private:
  kernels::NodeTable build(const CubatureRule& rule) const;
  double reduce(const kernels::NodeTable& table, const JetExpr& expr, std::optional<double> R) const;

  RadialOperatorMethod method_;
  kernels::Exec exec_;
  std::size_t dim_;
  kernels::NodeTable fine_, coarse_;
};

/// Separable path for separable f (analytic jets), General path otherwise or on request.
std::unique_ptr<Evaluator> make_evaluator(const TestFunction& f, const QuasiNorm& norm, const QuadratureSpec& spec,
                                          int order, EvalPath path,
                                          const RadialOperatorMethod& method = RadialOperatorMethod{});

}  // namespace hardy
