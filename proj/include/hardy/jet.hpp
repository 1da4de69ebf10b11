#pragma once

// Truncated Taylor series in one variable. Coefficient k holds f^{(k)}(r₀)/k!.
// Used to carry derivatives of radial profiles through products, quotients,
// exp, log and real powers.

#include <array>
#include <cmath>
#include <cstddef>

namespace hardy {

class Jet {
 public:
  static constexpr int kCapacity = 8;  // orders 0..7

  explicit Jet(int order = 0) : order_(order) { c_.fill(0.0); }

  static Jet constant(double v, int order) {
    Jet j(order);
    j.c_[0] = v;
    return j;
  }
  /// The identity function t ↦ t expanded at r0.
  static Jet variable(double r0, int order) {
    Jet j(order);
    j.c_[0] = r0;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const noexcept { return order_; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  double value() const { return c_[0]; }

  /// f^{(k)}(r₀) = k!·c_k.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[k] * f;
  }

  Jet operator+(const Jet& o) const {
    Jet r(order_);
    for (int k = 0; k <= order_; ++k) r.c_[k] = c_[k] + o.c_[k];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r(order_);
    for (int k = 0; k <= order_; ++k) r.c_[k] = c_[k] - o.c_[k];
    return r;
  }
  Jet operator-() const { return *this * -1.0; }
  Jet operator*(double s) const {
    Jet r(order_);
    for (int k = 0; k <= order_; ++k) r.c_[k] = c_[k] * s;
    return r;
  }
  Jet operator+(double s) const {
    Jet r = *this;
    r.c_[0] += s;
    return r;
  }
  Jet operator-(double s) const { return *this + (-s); }

  Jet operator*(const Jet& o) const {
    Jet r(order_);
    for (int k = 0; k <= order_; ++k) {
      double s = 0.0;
      for (int i = 0; i <= k; ++i) s += c_[i] * o.c_[k - i];
      r.c_[k] = s;
    }
    return r;
  }

  Jet reciprocal() const {
    Jet r(order_);
    r.c_[0] = 1.0 / c_[0];
    for (int k = 1; k <= order_; ++k) {
      double s = 0.0;
      for (int i = 1; i <= k; ++i) s += c_[i] * r.c_[k - i];
      r.c_[k] = -s / c_[0];
    }
    return r;
  }

  Jet operator/(const Jet& o) const { return *this * o.reciprocal(); }

 private:
  int order_;
  std::array<double, kCapacity> c_;
};

inline Jet operator*(double s, const Jet& j) { return j * s; }
inline Jet operator-(double s, const Jet& j) { return -j + s; }

inline Jet exp(const Jet& a) {
  Jet e(a.order());
  e[0] = std::exp(a[0]);
  for (int k = 1; k <= a.order(); ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a[i] * e[k - i];
    e[k] = s / k;
  }
  return e;
}

inline Jet log(const Jet& a) {
  Jet l(a.order());
  l[0] = std::log(a[0]);
  for (int k = 1; k <= a.order(); ++k) {
    double s = k * a[k];
    for (int i = 1; i < k; ++i) s -= i * l[i] * a[k - i];
    l[k] = s / (k * a[0]);
  }
  return l;
}

/// (r₀ + t)^γ expanded at t = 0; the leading coefficient is std::pow(r₀, γ).
inline Jet power_of_variable(double r0, double gamma, int order) {
  Jet j(order);
  double binom = 1.0;
  const double base = std::pow(r0, gamma);
  for (int k = 0; k <= order; ++k) {
    j[k] = binom * base / std::pow(r0, k);
    binom *= (gamma - k) / (k + 1);
  }
  return j;
}

}  // namespace hardy
