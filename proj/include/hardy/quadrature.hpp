#pragma once

// Integration on G: 1D radial rules, tensor/quasi-random cubature in
// exponential coordinates, the sphere measure σ via an annulus reduction,
// polar integration, and the Haar scaling check.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hardy/group.hpp"

namespace hardy {

struct QuadratureSpec {
  int radial_order = 16;             // Gauss points per radial panel
  int radial_panels = 32;            // initial radial panels (refined adaptively)
  int cubature_points_per_dim = 96;  // tensor rule, n ≤ 3
  double annulus_lambda = 2.0;       // outer radius of the σ annulus
  std::size_t mc_samples = std::size_t{1} << 20;  // quasi-random rule, 4 ≤ n ≤ 6
  double target_tol = 1e-8;
  std::uint64_t seed = 1;            // shift of the quasi-random sequence

  /// Throws ArgumentError on any violated invariant.
  void validate() const;
};

/// Per-coordinate integration box with the quasi-norm ball |x| < rho0 removed.
struct SupportBox {
  std::vector<double> lo;
  std::vector<double> hi;
  double rho0 = 0.0;

  /// Smallest coordinate box containing the quasi-ball of radius `radius`.
  static SupportBox ball(const QuasiNorm& norm, double radius, double rho0 = 0.0);

  /// Box of D_{factor}(this): coordinate i scaled by factor^{νᵢ}.
  SupportBox dilated(const DilationGroup& group, double factor) const;

  std::size_t dim() const noexcept { return lo.size(); }
  double volume() const;
  void validate() const;
};

struct Estimate {
  std::complex<double> value;
  double error = 0.0;
};

struct RealEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Nodes and weights of a fixed 1D rule.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss–Legendre rule on [a, b].
Rule1D gauss_legendre(int n, double a, double b);

/// n-point Gauss–Jacobi rule on [a, b] for the weight (b−x)^alpha (x−a)^beta.
Rule1D gauss_jacobi(int n, double a, double b, double alpha, double beta);

/// Composite Gauss–Legendre: `panels` equal panels of `order` points each.
Rule1D composite_gauss(double a, double b, int panels, int order);

using RadialFn = std::function<double(double)>;

/// ∫_a^b h(r) dr by panel Gauss–Legendre with adaptive bisection.
/// Initial panels are geometric when b/a > 4 and uniform otherwise; every
/// breakpoint inside (a, b) becomes a panel edge.
RealEstimate integrate_radial(const RadialFn& h, double a, double b,
                              std::span<const double> breakpoints, const QuadratureSpec& spec);

inline RealEstimate integrate_radial(const RadialFn& h, double a, double b, const QuadratureSpec& spec) {
  return integrate_radial(h, a, b, {}, spec);
}

/// Multi-dimensional rule over a SupportBox: tensor composite Gauss–Legendre
/// for n ≤ 3, shifted Kronecker points with smooth-window weights for 4 ≤ n ≤ 6.
/// Nodes inside the excluded ball get weight zero (requires `exclusion`).
class CubatureRule {
 public:
  CubatureRule(SupportBox box, const QuadratureSpec& spec, std::optional<QuasiNorm> exclusion = std::nullopt);

  std::size_t size() const noexcept { return size_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  bool is_tensor() const noexcept { return tensor_; }
  const SupportBox& box() const noexcept { return box_; }

  /// Writes node i into x and returns its weight (0 when excluded).
  double node(std::size_t i, std::span<double> x) const;

  /// The half-resolution rule used for refinement error estimates.
  CubatureRule coarse() const;
  /// True when the coarse rule's nodes are the first coarse().size() nodes of this one.
  bool nested() const noexcept { return !tensor_; }

 private:
  CubatureRule(SupportBox box, const QuadratureSpec& spec, std::optional<QuasiNorm> exclusion, int per_dim,
               std::size_t samples);
  void build();

  SupportBox box_;
  QuadratureSpec spec_;
  std::optional<QuasiNorm> exclusion_;
  bool tensor_ = true;
  int per_dim_ = 0;
  std::size_t samples_ = 0;
  std::size_t size_ = 0;
  std::vector<Rule1D> axes_;        // tensor rule
  std::vector<double> step_, shift_;  // Kronecker rule
  double qmc_weight_ = 0.0;
};

using PointFn = std::function<std::complex<double>(std::span<const double>)>;
using RealPointFn = std::function<double(std::span<const double>)>;

/// ∫_box F dx (Haar = Lebesgue in exponential coordinates). The error is the
/// difference against the half-resolution rule. Non-finite values raise
/// IntegrationError naming the node.
Estimate integrate_lebesgue(const PointFn& f, const SupportBox& box, const QuadratureSpec& spec,
                            std::optional<QuasiNorm> exclusion = std::nullopt);

struct ScalingResidual {
  double residual = 0.0;
  bool absolute = false;  // ∫F vanished; residual is |∫F∘D_λ − λ^{−Q}∫F|
};

/// |∫F(D_λ x)dx − λ^{−Q}∫F dx| / |∫F dx|.
ScalingResidual haar_scaling_residual(const PointFn& f, const DilationGroup& group, double lambda,
                                      const SupportBox& box, const QuadratureSpec& spec,
                                      std::optional<QuasiNorm> exclusion = std::nullopt);

/// Radial window used by the annulus reduction: a C^∞ bump on [1, Λ].
double annulus_window(double r, double lambda);

/// ∫_℘ u dσ through ∫ w(|x|) u(x/|x|) |x|^{−Q} dx = (∫₁^Λ w(r) dr/r) ∫_℘ u dσ.
double sphere_integrate(const RealPointFn& u, const QuasiNorm& norm, const QuadratureSpec& spec);

/// Several sphere integrals sharing one pass over the nodes.
std::vector<double> sphere_integrate(std::size_t count,
                                     const std::function<void(std::span<const double>, std::span<double>)>& u,
                                     const QuasiNorm& norm, const QuadratureSpec& spec);

/// (∫_a^b g(r) r^{Q−1} dr) · (∫_℘ u dσ). Throws DomainError when a ≤ 0.
std::complex<double> polar_integrate(const RadialFn& g, double a, double b, const PointFn& u,
                                     const QuasiNorm& norm, const QuadratureSpec& spec);

}  // namespace hardy
