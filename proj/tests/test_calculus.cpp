#include <cmath>
#include <random>

#include "doctest.h"
#include "hardy/calculus.hpp"
#include "hardy/errors.hpp"
#include "support.hpp"

using namespace hardy;

namespace {

// Least-squares slope of log e against log h.
double fitted_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("Fornberg weights reproduce textbook stencils") {
  const double nodes[] = {-1, 0, 1};
  const auto w1 = fornberg_weights(1, nodes, 0.0);
  const auto w2 = fornberg_weights(2, nodes, 0.0);
  CHECK(w1[0] == doctest::Approx(-0.5));
  CHECK(w1[1] == doctest::Approx(0.0));
  CHECK(w1[2] == doctest::Approx(0.5));
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
  CHECK(w2[2] == doctest::Approx(1.0));
  const double five[] = {-2, -1, 0, 1, 2};
  const auto w = fornberg_weights(1, five, 0.0);
  CHECK(w[0] == doctest::Approx(1.0 / 12));
  CHECK(w[1] == doctest::Approx(-8.0 / 12));
  CHECK(w[3] == doctest::Approx(8.0 / 12));
  CHECK_THROWS_AS(fornberg_weights(3, nodes, 0.0), ArgumentError);
}

TEST_CASE("method validation") {
  CHECK_THROWS_AS(RadialOperatorMethod::finite_difference(0.0).validate(), ArgumentError);
  CHECK_THROWS_AS(RadialOperatorMethod::finite_difference(1e-3, 3).validate(), ArgumentError);
  CHECK_NOTHROW(RadialOperatorMethod::analytic().validate());
  CHECK_FALSE(RadialOperatorMethod{}.richardson);
}

TEST_CASE("finite differences match analytic jets") {
  const TestFunction f = testing::complex_bump();
  const QuasiNorm N = QuasiNorm::koranyi(make_group({1, 1, 2}));
  std::mt19937_64 rng(4);
  int tested = 0;
  while (tested < 20) {
    const std::vector<double> x = testing::random_point(rng, 3, 1.5);
    const double r = N(x);
    if (r < 0.7 || r > 1.7) continue;
    ++tested;
    std::array<std::complex<double>, 8> an{}, fd{};
    radial_jet(f, x, 3, RadialOperatorMethod::analytic(), N, an);
    radial_jet(f, x, 3, RadialOperatorMethod::finite_difference(1e-3, 6), N, fd);
    for (int k = 0; k <= 3; ++k) CHECK(std::abs(fd[k] - an[k]) <= 1e-5 * std::max(1.0, std::abs(an[k])));
  }
}

TEST_CASE("stencil orders show in the convergence rate") {
  const TestFunction f = TestFunction::separable(make_bump(0.5, 4.0), AngularPart::constant(1.0));
  const QuasiNorm N = testing::aniso({1, 1, 2});
  const Point x{1.2, -0.4, 1.5};
  for (int k : {1, 2}) {
    const auto exact = radial_derivative(f, x, k, RadialOperatorMethod::analytic(), N);
    for (int order : {2, 4, 6}) {
      const double h0 = order == 2 ? 0.02 : order == 4 ? 0.04 : 0.08;
      std::vector<double> hs, errs;
      for (int i = 0; i < 4; ++i) {
        const double h = h0 / std::ldexp(1.0, i);
        hs.push_back(h);
        errs.push_back(std::abs(radial_derivative(f, x, k, RadialOperatorMethod::finite_difference(h, order), N) - exact));
      }
      CAPTURE(k);
      CAPTURE(order);
      CHECK(std::abs(fitted_order(hs, errs) - order) < 0.2);
    }
  }
}

TEST_CASE("Euler operator does not depend on the norm") {
  const TestFunction f = make_offcenter_bump({0.9, 0.2, 0.5}, 0.4);
  const DilationGroup g = make_group({1, 1, 2});
  const QuasiNorm a = QuasiNorm::anisotropic(g), k = QuasiNorm::koranyi(g, 7.0);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n01(0.0, 0.15);
  for (int t = 0; t < 30; ++t) {
    const Point x{0.9 + n01(rng), 0.2 + n01(rng), 0.5 + n01(rng)};
    const auto ea = euler_apply(f, x, a), ek = euler_apply(f, x, k);
    CHECK(std::abs(ea - ek) <= 1e-10 * std::max(1.0, std::abs(ea)));
    // 𝓡 itself scales with the gauge.
    const auto ra = radial_derivative(f, x, 1, {}, a), rk = radial_derivative(f, x, 1, {}, k);
    CHECK(std::abs(ra * a(x) - rk * k(x)) <= 1e-10 * std::max(1.0, std::abs(ea)));
  }
}

TEST_CASE("homogeneous functions are Euler eigenfunctions and bumps are not") {
  const QuasiNorm N = QuasiNorm::koranyi(make_group({1, 1, 2}));
  std::mt19937_64 rng(8);
  for (double nu : {-2.0, -0.5, 1.0, 3.0}) {
    const TestFunction f = TestFunction::separable(make_power(nu), AngularPart::constant(1.0) +
                                                                      AngularPart::coordinate_trace(2, 1, 0.3));
    std::vector<std::pair<Point, double>> samples;
    for (int t = 0; t < 20; ++t) {
      const Point x(testing::random_point(rng, 3));
      const auto e = euler_apply(f, x, N, RadialOperatorMethod::analytic());
      const auto v = nu * f.eval(x, N);
      CHECK(std::abs(e - v) <= 1e-10 * std::abs(v));
      const auto efd = euler_apply(f, x, N);
      CHECK(std::abs(efd - v) <= 1e-8 * std::abs(v));
      samples.emplace_back(x, 0.5 + t * 0.1);
    }
    CHECK(check_homogeneity(f, nu, samples, N) < 1e-12);
  }
  const TestFunction b = testing::real_bump();
  double worst = 0.0;
  for (double r : {0.7, 1.0, 1.4}) {
    const Point x = N.group().dilate(r, sphere_project(N, Point{0.3, 0.1, 0.2}));
    for (double nu : {-1.0, 0.0, 1.0}) {
      const auto e = euler_apply(b, x, N, RadialOperatorMethod::analytic());
      worst = std::max(worst, std::abs(e - nu * b.eval(x, N)) / std::abs(b.eval(x, N)));
    }
  }
  CHECK(worst > 0.1);
}

TEST_CASE("weights commute with the radial operator up to the product rule") {
  const TestFunction f = testing::complex_bump();
  const QuasiNorm N = testing::aniso({1, 1, 1, 2});
  for (double alpha : {-1.0, 0.5, 2.0}) {
    const Point x{0.4, 0.3, -0.5, 0.6};
    CHECK(commutation_residual(f, alpha, x, N, RadialOperatorMethod::analytic()) < 1e-12);
    CHECK(commutation_residual(f, alpha, x, N) < 1e-8);
  }
}

TEST_CASE("radial derivative errors") {
  const TestFunction f = testing::real_bump();
  const QuasiNorm N = testing::aniso({1, 1, 1});
  CHECK_THROWS_AS(radial_derivative(f, Point{0, 0, 0}, 1, {}, N), DomainError);
  CHECK_THROWS_AS(radial_derivative(f, Point{1, 0, 0}, 7, RadialOperatorMethod::analytic(), N), CapabilityError);
  CHECK_THROWS_AS(radial_derivative(make_offcenter_bump({1, 0, 0}, 0.2), Point{1, 0, 0}, 1,
                                    RadialOperatorMethod::analytic(), N),
                  CapabilityError);
  CHECK_THROWS_AS(radial_derivative(f, Point{1, 0, 0}, 0, {}, N), ArgumentError);
}
