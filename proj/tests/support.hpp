#pragma once

#include <random>
#include <vector>

#include "hardy/group.hpp"
#include "hardy/identities.hpp"
#include "hardy/testfuncs.hpp"

namespace testing {

inline hardy::QuasiNorm aniso(std::vector<double> w) { return hardy::QuasiNorm::anisotropic(hardy::make_group(std::move(w))); }

inline hardy::TestFunction real_bump(double a = 0.5, double b = 2.0) {
  return hardy::TestFunction::separable(hardy::make_bump(a, b), hardy::AngularPart::constant(1.0) +
                                                                   hardy::AngularPart::coordinate_trace(0, 2, 0.5));
}

inline hardy::TestFunction complex_bump(double a = 0.6, double b = 1.8) {
  return hardy::TestFunction::separable(hardy::make_bump(a, b),
                                        hardy::AngularPart::constant(1.0) +
                                            hardy::AngularPart::coordinate_trace(0, 1, {0.0, 1.0}));
}

inline hardy::IdentityJob job(hardy::IdentityKind kind, double p = 2.0, double alpha = 0.0, int k = 1) {
  hardy::IdentityJob j;
  j.kind = kind;
  j.p = p;
  j.alpha = alpha;
  j.k = k;
  return j;
}

// Random point in [-s, s]^n away from the origin.
inline std::vector<double> random_point(std::mt19937_64& rng, std::size_t n, double s = 2.0) {
  std::uniform_real_distribution<double> u(-s, s);
  std::vector<double> x(n);
  do {
    for (auto& v : x) v = u(rng);
  } while (std::abs(x[0]) + std::abs(x[n - 1]) < 1e-3);
  return x;
}

}  // namespace testing
