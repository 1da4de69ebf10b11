#pragma once

// Admissible test functions on G∖{0}: radial profiles with analytic
// derivatives, angular factors on the unit quasi-sphere, and their separable
// or general combinations.

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hardy/group.hpp"
#include "hardy/jet.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

enum class ProfileKind { SmoothBump, PolyCutoff, Plateau, Power };

std::string to_string(ProfileKind kind);

/// Two log-scale transition intervals: χ rises on [inner_lo, inner_hi],
/// equals 1 up to outer_lo and falls to 0 on [outer_lo, outer_hi].
struct Cutoffs {
  double inner_lo = 0.0;
  double inner_hi = 0.0;
  double outer_lo = 0.0;
  double outer_hi = 0.0;

  void validate() const;
};

/// The smooth step S(τ) = 1/(1 + exp(1/τ − 1/(1−τ))) as a jet in τ.
Jet smooth_step(const Jet& tau);

/// g(r) = A·base(s·r)·r^β on its support, where base is one of the kinds.
class RadialProfile {
 public:
  ProfileKind kind() const noexcept { return kind_; }

  /// Closed support [lower, upper]; Power profiles report (0, ∞).
  double lower() const noexcept { return lo_ / scale_; }
  double upper() const noexcept { return hi_ / scale_; }
  bool compact() const noexcept { return kind_ != ProfileKind::Power; }

  /// Highest derivative order available analytically.
  int max_order() const noexcept { return max_order_; }
  double power() const noexcept { return power_; }

  double value(double r) const;
  double derivative(double r, int k) const;
  /// out[j] = g^{(j)}(r) for j = 0..k_max.
  void derivatives(double r, int k_max, std::span<double> out) const;

  /// Interior radii where the profile changes regime (plateau edges).
  std::vector<double> breakpoints() const;

  /// r ↦ g(r)·r^β.
  RadialProfile times_power(double beta) const;
  /// r ↦ g(λr).
  RadialProfile rescaled(double lambda) const;

  const Cutoffs& cutoffs() const noexcept { return cutoffs_; }
  double bump_a() const noexcept { return a_; }
  double bump_b() const noexcept { return b_; }
  int degree() const noexcept { return degree_; }

  std::string describe() const;

  friend RadialProfile make_bump(double a, double b);
  friend RadialProfile make_poly_cutoff(double a, double b, int degree);
  friend RadialProfile make_plateau(double gamma, const Cutoffs& cutoffs);
  friend RadialProfile make_power(double nu);

 private:
  RadialProfile() = default;
  double base_value(double s) const;
  Jet base_jet(double s, int order) const;

  ProfileKind kind_ = ProfileKind::SmoothBump;
  int max_order_ = 0;
  double lo_ = 0.0, hi_ = 0.0;  // support of the base in its own variable
  double a_ = 0.0, b_ = 0.0;    // bump / poly interval
  int degree_ = 0;
  Cutoffs cutoffs_{};
  double scale_ = 1.0, power_ = 0.0, amplitude_ = 1.0;
  std::shared_ptr<const std::vector<std::vector<double>>> bump_poly_;  // P_k(τ), ascending coefficients
};

/// exp(−1/((r−a)(b−r))) on (a, b), 0 outside; derivatives to order 6.
RadialProfile make_bump(double a, double b);
/// ((r−a)(b−r)/h²)^degree on [a, b] with h = (b−a)/2; derivatives to order degree−1.
RadialProfile make_poly_cutoff(double a, double b, int degree);
/// χ(r)·r^γ with the log-scale plateau χ of `cutoffs`; derivatives to order 4.
RadialProfile make_plateau(double gamma, const Cutoffs& cutoffs);
/// χ(r)·r^{−(Q−p)/p + ε}.
RadialProfile make_extremizer(double Q, double p, double eps, const Cutoffs& cutoffs);
/// r^ν on (0, ∞); homogeneous and therefore not admissible for integration.
RadialProfile make_power(double nu);

/// c·y_i^power summed over terms; coord < 0 marks a constant term.
struct AngularTerm {
  std::complex<double> coeff{1.0, 0.0};
  int coord = -1;
  int power = 0;
};

class AngularPart {
 public:
  AngularPart() = default;
  explicit AngularPart(std::vector<AngularTerm> terms);

  static AngularPart constant(std::complex<double> c);
  static AngularPart coordinate_trace(int coord, int power, std::complex<double> coeff = 1.0);

  AngularPart operator+(const AngularPart& other) const;

  std::complex<double> operator()(std::span<const double> y) const;

  const std::vector<AngularTerm>& terms() const noexcept { return terms_; }
  bool is_real() const;
  bool is_zero() const;
  /// Highest coordinate index referenced, −1 when none.
  int max_coord() const;
  std::string describe() const;

 private:
  std::vector<AngularTerm> terms_;
};

class TestFunction {
 public:
  using Callable = std::function<std::complex<double>(std::span<const double>)>;

  static TestFunction separable(RadialProfile g, AngularPart u);
  /// `support` must contain the support of `f` and stay away from the origin
  /// (either by excluding it from the box or through support.rho0 > 0 with `norm`).
  static TestFunction general(Callable f, SupportBox support, bool real_valued, std::string label,
                              bool smooth = true);
  static TestFunction zero();

  bool is_separable() const noexcept { return separable_; }
  bool is_real() const;
  bool is_zero() const noexcept { return zero_; }
  bool smooth() const noexcept { return smooth_; }

  /// Throws CapabilityError for general functions.
  const RadialProfile& profile() const;
  const AngularPart& angular() const;
  const SupportBox& support_box() const;

  std::complex<double> eval(std::span<const double> x, const QuasiNorm& norm) const;
  std::complex<double> eval(const Point& x, const QuasiNorm& norm) const { return eval(x.coords(), norm); }

  /// [a, b] with supp f ⊂ {a ≤ |x| ≤ b}.
  std::pair<double, double> radial_support(const QuasiNorm& norm) const;
  /// Box containing the support (separable: the quasi-ball of radius b with the a-ball excluded).
  SupportBox integration_box(const QuasiNorm& norm) const;

  /// x ↦ f(x)·|x|^β.
  TestFunction times_norm_power(const QuasiNorm& norm, double beta) const;
  /// x ↦ f(D_λ x).
  TestFunction dilated(const DilationGroup& group, double lambda) const;
  /// The same function seen only through point evaluation.
  TestFunction as_general(const QuasiNorm& norm) const;

  std::string describe() const;

 private:
  TestFunction() = default;

  bool separable_ = true;
  bool zero_ = false;
  bool smooth_ = true;
  bool real_ = false;
  std::optional<RadialProfile> profile_;
  AngularPart angular_;
  Callable callable_;
  std::optional<SupportBox> support_;
  std::string label_;
};

/// exp(1 − 1/(1 − |x−c|²/ρ²)) inside the Euclidean coordinate ball around c.
/// Requires the box around c to miss the origin.
TestFunction make_offcenter_bump(std::vector<double> center, double radius);

}  // namespace hardy
