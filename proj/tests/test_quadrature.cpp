#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hardy/errors.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/testfuncs.hpp"
#include "support.hpp"

using namespace hardy;

namespace {

double apply(const Rule1D& r, auto f) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}

}  // namespace

TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
  for (int n : {1, 3, 8, 16}) {
    const Rule1D r = gauss_legendre(n, -0.5, 2.0);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = (std::pow(2.0, d + 1) - std::pow(-0.5, d + 1)) / (d + 1);
      CHECK(apply(r, [d](double x) { return std::pow(x, d); }) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("Gauss-Jacobi integrates the weight to a Beta function") {
  for (double al : {0.0, 0.5, 1.5}) {
    for (double be : {-0.5, 0.0, 2.0}) {
      const Rule1D r = gauss_jacobi(6, 1.0, 3.0, al, be);
      // ∫_1^3 (3−x)^al (x−1)^be x dx = 2^{al+be+1}[B(al+1, be+1) + 2 B(al+1, be+2)]
      const double scale = std::pow(2.0, al + be + 1.0);
      const double exact = scale * (std::beta(al + 1.0, be + 1.0) + 2.0 * std::beta(al + 1.0, be + 2.0));
      CHECK(apply(r, [](double x) { return x; }) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("composite rule and adaptive radial integration") {
  const Rule1D c = composite_gauss(0.0, 1.0, 4, 5);
  CHECK(c.x.size() == 20);
  CHECK(apply(c, [](double x) { return std::exp(x); }) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));

  QuadratureSpec spec;
  // ∫ r^3 e^{−r} on [0.5, 3] by the closed-form antiderivative −e^{−r}(r³+3r²+6r+6).
  auto F = [](double r) { return -std::exp(-r) * (r * r * r + 3 * r * r + 6 * r + 6); };
  const RealEstimate e = integrate_radial([](double r) { return r * r * r * std::exp(-r); }, 0.5, 3.0, spec);
  CHECK(e.value == doctest::Approx(F(3.0) - F(0.5)).epsilon(1e-13));
  CHECK(e.error < 1e-10);

  // A kink at a declared breakpoint costs nothing.
  const double bp[] = {1.3};
  const RealEstimate k = integrate_radial([](double r) { return std::abs(r - 1.3); }, 1.0, 2.0, bp, spec);
  CHECK(k.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-14));
}

TEST_CASE("spec validation") {
  QuadratureSpec s;
  CHECK_NOTHROW(s.validate());
  s.radial_order = 0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s = QuadratureSpec{};
  s.target_tol = -1.0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s = QuadratureSpec{};
  s.annulus_lambda = 1.0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
}

TEST_CASE("annulus window is a bump on [1, lambda]") {
  CHECK(annulus_window(0.9, 2.0) == 0.0);
  CHECK(annulus_window(2.1, 2.0) == 0.0);
  CHECK(annulus_window(1.4, 2.0) > 0.0);
}

TEST_CASE("tensor rule integrates polynomials over a box") {
  SupportBox box{{-1, 0, 0.5}, {1, 2, 1.5}, 0.0};
  QuadratureSpec spec;
  spec.cubature_points_per_dim = 8;
  const Estimate e = integrate_lebesgue([](std::span<const double> x) { return x[0] * x[0] + x[1] * x[2]; }, box, spec);
  // ∫x² = 2/3·2·1, ∫yz = 2·(1.5²−0.5²)/2·2
  CHECK(e.value.real() == doctest::Approx(4.0 / 3.0 + 4.0).epsilon(1e-13));
}

TEST_CASE("quasi-random rule weights sum to the box volume") {
  SupportBox box{{-1, -1, -2, 0}, {1, 1, 2, 1}, 0.0};
  QuadratureSpec spec;
  spec.mc_samples = 1 << 14;
  const CubatureRule rule(box, spec);
  CHECK_FALSE(rule.is_tensor());
  std::vector<double> x(4);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) total += rule.node(i, x);
  CHECK(total == doctest::Approx(box.volume()).epsilon(1e-12));
  CHECK(rule.nested());
  const CubatureRule coarse = rule.coarse();
  std::vector<double> y(4);
  for (std::size_t i = 0; i < coarse.size(); i += 97) {
    coarse.node(i, y);
    rule.node(i, x);
    for (int d = 0; d < 4; ++d) CHECK(x[d] == y[d]);
  }
}

TEST_CASE("sphere area of the abelian 3D group is 4 pi") {
  const QuasiNorm N = QuasiNorm::euclidean(make_group({1, 1, 1}));
  QuadratureSpec spec;
  const double area = sphere_integrate([](std::span<const double>) { return 1.0; }, N, spec);
  CHECK(std::abs(area - 4.0 * std::numbers::pi) < 1e-3);
}

TEST_CASE("sphere area of R^4 is 2 pi^2 within the quasi-random accuracy") {
  const QuasiNorm N = QuasiNorm::euclidean(make_group({1, 1, 1, 1}));
  QuadratureSpec spec;
  spec.mc_samples = 1 << 18;
  const double area = sphere_integrate([](std::span<const double>) { return 1.0; }, N, spec);
  CHECK(std::abs(area / (2.0 * std::numbers::pi * std::numbers::pi) - 1.0) < 1e-2);
}

TEST_CASE("sphere integrals do not depend on the annulus width") {
  for (const auto& N : {testing::aniso({1, 1, 2}), QuasiNorm::koranyi(make_group({1, 1, 2}))}) {
    QuadratureSpec s2, s4;
    s2.annulus_lambda = 2.0;
    s4.annulus_lambda = 4.0;
    auto u = [](std::span<const double> y) { return 1.0 + y[0] * y[0] + 0.5 * y[2]; };
    const double a = sphere_integrate(u, N, s2), b = sphere_integrate(u, N, s4);
    CHECK(std::abs(a - b) < 1e-3 * std::abs(a));
  }
}

TEST_CASE("polar and Lebesgue integration agree for separable functions") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua(0.3, 0.8), ub(1.2, 2.5), uc(-1.0, 1.0);
  for (auto w : std::vector<std::vector<double>>{{1, 1, 1}, {1, 1, 2}, {1, 2}}) {
    const QuasiNorm N = testing::aniso(w);
    const double a = ua(rng), b = ub(rng), c = uc(rng);
    const RadialProfile g = make_bump(a, b);
    auto u = [c](std::span<const double> y) { return std::complex<double>(1.0 + c * y[0] * y[0], c * y[1]); };
    QuadratureSpec spec;
    const auto polar = polar_integrate([&](double r) { return g.value(r); }, a, b, u, N, spec);
    std::vector<double> y(w.size());
    auto f = [&](std::span<const double> x) -> std::complex<double> {
      const double r = N(x);
      if (r < a || r > b) return 0.0;
      sphere_project(N, x, y);
      return g.value(r) * u(y);
    };
    const Estimate leb = integrate_lebesgue(f, SupportBox::ball(N, b, a), spec, N);
    CHECK(std::abs(polar - leb.value) < 1e-3 * std::abs(polar));
  }
  CHECK_THROWS_AS(polar_integrate([](double) { return 1.0; }, 0.0, 1.0,
                                  [](std::span<const double>) { return std::complex<double>(1.0); },
                                  testing::aniso({1, 1, 1}), QuadratureSpec{}),
                  DomainError);
}

TEST_CASE("Haar measure scales by lambda^-Q") {
  const QuasiNorm N = testing::aniso({1, 1, 2});
  const SupportBox box = SupportBox::ball(N, 3.0);
  auto f = [](std::span<const double> x) {
    return std::complex<double>(std::exp(-(x[0] * x[0] + x[1] * x[1] + std::abs(x[2]))));
  };
  QuadratureSpec spec;
  spec.cubature_points_per_dim = 64;
  const ScalingResidual s = haar_scaling_residual(f, N.group(), 1.0, box, spec);
  CHECK(s.residual < 1e-12);
  const SupportBox big = SupportBox::ball(N, 12.0);
  const ScalingResidual t = haar_scaling_residual(f, N.group(), 1.5, big, spec);
  CHECK(t.residual < 1e-3);
}

TEST_CASE("non-finite integrands are reported") {
  SupportBox box{{-1, -1}, {1, 1}, 0.0};
  QuadratureSpec spec;
  spec.cubature_points_per_dim = 4;
  CHECK_THROWS_AS(integrate_lebesgue([](std::span<const double>) { return std::complex<double>(NAN); }, box, spec),
                  IntegrationError);
}
