#include <cmath>
#include <random>

#include "doctest.h"
#include "hardy/errors.hpp"
#include "hardy/group.hpp"
#include "support.hpp"

using namespace hardy;

TEST_CASE("homogeneous dimension is the weight sum") {
  CHECK(make_group({1, 1, 1}).homogeneous_dimension() == 3.0);
  CHECK(make_group({1, 1, 2}).homogeneous_dimension() == 4.0);
  CHECK(make_group({1, 1, 1, 2, 2}).homogeneous_dimension() == 7.0);
  CHECK(make_group({1, 1, 2}).isotropic() == false);
  CHECK(make_group({2, 2}).isotropic());
}

TEST_CASE("bad weights are rejected") {
  CHECK_THROWS_AS(make_group({}), ArgumentError);
  CHECK_THROWS_AS(make_group({1, 0}), ArgumentError);
  CHECK_THROWS_AS(make_group({1, -2}), ArgumentError);
  CHECK_THROWS_AS(make_group({1, NAN}), ArgumentError);
  CHECK_THROWS_AS(make_group(std::vector<double>(kMaxDim + 1, 1.0)), ArgumentError);
}

TEST_CASE("dilations compose multiplicatively") {
  const DilationGroup g = make_group({1, 1.5, 2});
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Point x(testing::random_point(rng, 3));
    const Point a = g.dilate(1.7, g.dilate(0.3, x));
    const Point b = g.dilate(1.7 * 0.3, x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(g.dilate(0.0, Point{1, 1, 1}), DomainError);
  CHECK_THROWS_AS(g.dilate(2.0, Point{1, 1}), ArgumentError);
}

TEST_CASE("every norm is homogeneous, symmetric and positive") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(0.05, 20.0);
  std::vector<QuasiNorm> norms{testing::aniso({1, 1, 1}), testing::aniso({1, 1, 2}),
                               QuasiNorm::anisotropic(make_group({1, 2, 3}), 3.0),
                               QuasiNorm::koranyi(make_group({1, 1, 2})),
                               QuasiNorm::koranyi(make_group({1, 1, 1, 2, 2}), 3.0),
                               QuasiNorm::euclidean(make_group({1, 1, 1})), QuasiNorm::euclidean(make_group({2, 2}))};
  for (const auto& N : norms) {
    const std::size_t n = N.group().dim();
    for (int t = 0; t < 100; ++t) {
      const Point x(testing::random_point(rng, n));
      const double l = lam(rng);
      const double r = N(x);
      CHECK(r > 0.0);
      CHECK(N(N.group().dilate(l, x)) == doctest::Approx(l * r).epsilon(1e-12));
      CHECK(N(x.inverse()) == doctest::Approx(r).epsilon(1e-15));
    }
    CHECK(N(Point(std::vector<double>(n, 0.0))) == 0.0);
  }
}

TEST_CASE("Euclidean norm on the abelian group is the 2-norm") {
  const QuasiNorm N = QuasiNorm::euclidean(make_group({1, 1, 1}));
  CHECK(N(Point{3, 4, 12}) == doctest::Approx(13.0));
}

TEST_CASE("Koranyi gauge matches its closed form") {
  const QuasiNorm N = QuasiNorm::koranyi(make_group({1, 1, 2}), 16.0);
  const double x = 0.3, y = -0.7, t = 0.4;
  const double expect = std::pow(std::pow(x * x + y * y, 2) + 16.0 * t * t, 0.25);
  CHECK(N(Point{x, y, t}) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("norm configuration errors") {
  CHECK_THROWS_AS(QuasiNorm::euclidean(make_group({1, 1, 2})), ConfigurationError);
  CHECK_THROWS_AS(QuasiNorm::koranyi(make_group({1, 3})), ConfigurationError);
  CHECK_THROWS_AS(QuasiNorm::koranyi(make_group({1, 2}), -1.0), ConfigurationError);
  CHECK_THROWS_AS(QuasiNorm::anisotropic(make_group({1, 2}), 0.0), ConfigurationError);
  CHECK_THROWS_AS(norm_kind_from_string("taxicab"), ConfigurationError);
  CHECK(norm_kind_from_string("koranyi") == NormKind::Koranyi);
  CHECK(to_string(NormKind::Euclidean) == "euclidean");
}

TEST_CASE("default kappa is the smallest even integer above twice the top weight") {
  CHECK(QuasiNorm::default_kappa(make_group({1, 1, 1})) == 2.0);
  CHECK(QuasiNorm::default_kappa(make_group({1, 1, 2})) == 4.0);
  CHECK(QuasiNorm::default_kappa(make_group({1, 1.5})) == 4.0);
  CHECK(QuasiNorm::default_kappa(make_group({1, 2.5})) == 6.0);
}

TEST_CASE("sphere projection lands on the unit sphere") {
  std::mt19937_64 rng(3);
  const QuasiNorm N = QuasiNorm::koranyi(make_group({1, 1, 2}));
  for (int t = 0; t < 50; ++t) {
    const Point x(testing::random_point(rng, 3, 5.0));
    CHECK(N(sphere_project(N, x)) == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(sphere_project(N, Point{0, 0, 0}), DomainError);
}

TEST_CASE("coordinate bounds enclose the unit ball") {
  std::mt19937_64 rng(5);
  for (const auto& N : {testing::aniso({1, 1, 2}), QuasiNorm::koranyi(make_group({1, 1, 2}), 4.0)}) {
    for (int t = 0; t < 500; ++t) {
      const Point y = sphere_project(N, Point(testing::random_point(rng, 3)));
      for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(y[i]) <= N.coordinate_bound(i) * (1 + 1e-12));
    }
  }
}
