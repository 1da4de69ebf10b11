#pragma once

// The radial operator 𝓡 = d/d|x| along dilation orbits, its powers, the
// Euler operator |x|𝓡, homogeneity checks and the commutation identity with
// powers of the quasi-norm.
//
// For x ≠ 0 let φ_x(s) = f(D_{s/|x|} x). Then (𝓡^k f)(x) = φ_x^{(k)}(|x|).

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "hardy/group.hpp"
#include "hardy/testfuncs.hpp"

namespace hardy {

struct RadialOperatorMethod {
  enum class Mode { Analytic, FiniteDifference };

  Mode mode = Mode::FiniteDifference;
  double h = 1e-3;  // step in the orbit parameter t = s/|x|
  int order = 4;    // 2, 4 or 6
  bool richardson = false;

  static RadialOperatorMethod analytic() { return {Mode::Analytic, 1e-3, 4, false}; }
  static RadialOperatorMethod finite_difference(double h = 1e-3, int order = 4, bool richardson = false) {
    return {Mode::FiniteDifference, h, order, richardson};
  }

  /// Throws ArgumentError on h ≤ 0 or an unsupported order.
  void validate() const;
};

/// Weights w_j with Σ w_j f(nodes_j) ≈ f^{(m)}(x0) (Fornberg's recursion).
std::vector<double> fornberg_weights(int m, std::span<const double> nodes, double x0);

/// (𝓡^k f)(x).
std::complex<double> radial_derivative(const TestFunction& f, const Point& x, int k,
                                       const RadialOperatorMethod& method, const QuasiNorm& norm);

/// out[j] = (𝓡^j f)(x) for j = 0..k_max from one shared set of orbit samples.
void radial_jet(const TestFunction& f, std::span<const double> x, int k_max, const RadialOperatorMethod& method,
                const QuasiNorm& norm, std::span<std::complex<double>> out);

/// |x|·(𝓡f)(x).
std::complex<double> euler_apply(const TestFunction& f, const Point& x, const QuasiNorm& norm,
                                 const RadialOperatorMethod& method = {});

/// max over samples of |f(D_λ x) − λ^ν f(x)| / max(|f(x)|, 1e-12·scale), scale = max |f(x)|.
double check_homogeneity(const TestFunction& f, double nu, std::span<const std::pair<Point, double>> samples,
                         const QuasiNorm& norm);

/// |x|^{−α}𝓡f(x) − [𝓡(f·|x|^{−α})(x) + α f(x)/|x|^{α+1}], in absolute value.
double commutation_residual(const TestFunction& f, double alpha, const Point& x, const QuasiNorm& norm,
                            const RadialOperatorMethod& method = {});

}  // namespace hardy
