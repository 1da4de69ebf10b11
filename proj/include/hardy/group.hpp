#pragma once

// Homogeneous groups in exponential coordinates of the first kind.
//
// A point is its coordinate tuple e(x); the dilation D_λ acts diagonally,
// e(D_λ x) = (λ^{ν₁} x₁, …, λ^{ν_n} x_n), and Haar measure is Lebesgue
// measure in these coordinates. The group law is never needed.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hardy {

/// Largest coordinate dimension accepted anywhere (stack buffers are sized by it).
inline constexpr std::size_t kMaxDim = 16;

class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  /// Inverse element; in nilpotent exponential coordinates this is negation.
  Point inverse() const;

  bool operator==(const Point&) const = default;

 private:
  std::vector<double> coords_;
};

class DilationGroup {
 public:
  /// Throws ArgumentError unless every weight is finite and > 0.
  explicit DilationGroup(std::vector<double> weights);

  std::size_t dim() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double homogeneous_dimension() const noexcept { return q_; }
  bool isotropic() const noexcept;

  Point dilate(double lambda, const Point& x) const;
  /// Allocation-free variant used by the hot loops; `out` may alias `x`.
  void dilate(double lambda, std::span<const double> x, std::span<double> out) const;

  std::string describe() const;

 private:
  std::vector<double> weights_;
  double q_ = 0.0;
};

DilationGroup make_group(std::vector<double> weights);

enum class NormKind { Anisotropic, Koranyi, Euclidean };

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

/// Homogeneous quasi-norm of degree 1 bound to a DilationGroup.
///
///   Anisotropic(κ): (Σ |xᵢ|^{κ/νᵢ})^{1/κ}
///   Koranyi(c):     (|x′|⁴ + c·|x″|²)^{1/4}, x′ = weight-1 coords, x″ = weight-2 coords
///   Euclidean:      (Σ xᵢ²)^{1/(2w)} for uniform weight w (the usual 2-norm when w = 1)
class QuasiNorm {
 public:
  static QuasiNorm anisotropic(const DilationGroup& group);
  static QuasiNorm anisotropic(const DilationGroup& group, double kappa);
  static QuasiNorm koranyi(const DilationGroup& group, double c = 16.0);
  static QuasiNorm euclidean(const DilationGroup& group);

  /// Smallest even integer ≥ 2·max(νᵢ).
  static double default_kappa(const DilationGroup& group);

  NormKind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  const DilationGroup& group() const noexcept { return group_; }

  double operator()(std::span<const double> x) const;
  double operator()(const Point& x) const { return (*this)(x.coords()); }

  /// sup over the unit sphere of |xᵢ|; the ball of radius R fits in
  /// the box |xᵢ| ≤ R^{νᵢ}·coordinate_bound(i).
  double coordinate_bound(std::size_t i) const;

  std::string describe() const;

 private:
  QuasiNorm(DilationGroup group, NormKind kind, double param);

  DilationGroup group_;
  NormKind kind_;
  double param_;
  std::vector<double> exponents_;  // κ/νᵢ for Anisotropic
  std::vector<int> int_exponents_;  // exponent as integer when exact, else 0
  std::vector<unsigned char> second_layer_;  // Koranyi: 1 for weight-2 coordinates
};

/// y = D_{1/|x|} x, so that |y| = 1. Throws DomainError for x = 0.
Point sphere_project(const QuasiNorm& norm, const Point& x);
void sphere_project(const QuasiNorm& norm, std::span<const double> x, std::span<double> out);

}  // namespace hardy
