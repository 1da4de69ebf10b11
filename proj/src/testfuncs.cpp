#include "hardy/testfuncs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

Poly poly_scale(Poly a, double s) {
  for (double& v : a) v *= s;
  return a;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {0.0};
  Poly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<double>(i);
  return r;
}

double poly_eval(const Poly& a, double t) {
  double s = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) s = s * t + a[i];
  return s;
}

constexpr int kBumpOrder = 6;
constexpr int kPlateauOrder = 4;
constexpr double kStepCutoff = 700.0;

double smooth_step_value(double tau) {
  if (tau <= 0.0) return 0.0;
  if (tau >= 1.0) return 1.0;
  const double e = 1.0 / tau - 1.0 / (1.0 - tau);
  if (e > 0.0) {
    const double w = std::exp(-e);
    return w / (1.0 + w);
  }
  return 1.0 / (1.0 + std::exp(e));
}

double log_fraction(double s, double lo, double hi) { return std::log(s / lo) / std::log(hi / lo); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string fmt(std::complex<double> c) {
  if (c.imag() == 0.0) return fmt(c.real());
  if (c.real() == 0.0) return fmt(c.imag()) + "i";
  return "(" + fmt(c.real()) + (c.imag() < 0 ? "" : "+") + fmt(c.imag()) + "i)";
}

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::SmoothBump: return "bump";
    case ProfileKind::PolyCutoff: return "poly";
    case ProfileKind::Plateau: return "plateau";
    case ProfileKind::Power: return "power";
  }
  return "?";
}

void Cutoffs::validate() const {
  if (!(inner_lo > 0.0)) throw ArgumentError("cutoffs must lie in (0, inf)");
  if (!(inner_lo < inner_hi && inner_hi <= outer_lo && outer_lo < outer_hi) || !std::isfinite(outer_hi))
    throw ArgumentError("cutoff intervals must be ordered and disjoint, inner below outer");
}

Jet smooth_step(const Jet& tau) {
  const int n = tau.order();
  if (tau[0] <= 0.0) return Jet(n);
  if (tau[0] >= 1.0) return Jet::constant(1.0, n);
  const Jet e = tau.reciprocal() - (1.0 - tau).reciprocal();
  if (e[0] > kStepCutoff) return Jet(n);
  if (e[0] < -kStepCutoff) return Jet::constant(1.0, n);
  if (e[0] > 0.0) {
    const Jet w = exp(-e);
    return w * (w + 1.0).reciprocal();
  }
  return (exp(e) + 1.0).reciprocal();
}

double RadialProfile::base_value(double s) const {
  switch (kind_) {
    case ProfileKind::SmoothBump: {
      if (s <= a_ || s >= b_) return 0.0;
      return std::exp(-1.0 / ((s - a_) * (b_ - s)));
    }
    case ProfileKind::PolyCutoff: {
      if (s <= a_ || s >= b_) return 0.0;
      const double h = 0.5 * (b_ - a_);
      return std::pow((s - a_) * (b_ - s) / (h * h), degree_);
    }
    case ProfileKind::Plateau: {
      const Cutoffs& c = cutoffs_;
      if (s <= c.inner_lo || s >= c.outer_hi) return 0.0;
      if (s >= c.inner_hi && s <= c.outer_lo) return 1.0;
      double v = 1.0;
      if (s < c.inner_hi) v *= smooth_step_value(log_fraction(s, c.inner_lo, c.inner_hi));
      if (s > c.outer_lo) v *= 1.0 - smooth_step_value(log_fraction(s, c.outer_lo, c.outer_hi));
      return v;
    }
    case ProfileKind::Power: return 1.0;
  }
  return 0.0;
}

Jet RadialProfile::base_jet(double s, int order) const {
  switch (kind_) {
    case ProfileKind::SmoothBump: {
      Jet j(order);
      if (s <= a_ || s >= b_) return j;
      const double m = 0.5 * (a_ + b_), h = 0.5 * (b_ - a_);
      const double tau = (s - m) / h;
      const double q = 1.0 - tau * tau;
      const double g = std::exp(-1.0 / ((s - a_) * (b_ - s)));
      if (g == 0.0) return j;
      double qpow = 1.0, hpow = 1.0, fact = 1.0;
      for (int k = 0; k <= order; ++k) {
        j[k] = g * poly_eval((*bump_poly_)[k], tau) / (qpow * hpow * fact);
        qpow *= q * q;
        hpow *= h;
        fact *= k + 1;
      }
      return j;
    }
    case ProfileKind::PolyCutoff: {
      if (s <= a_ || s >= b_) return Jet(order);
      const double h = 0.5 * (b_ - a_);
      const Jet t = Jet::variable(s, order);
      const Jet q = (t - a_) * (b_ - t) * (1.0 / (h * h));
      Jet r = Jet::constant(1.0, order);
      for (int i = 0; i < degree_; ++i) r = r * q;
      return r;
    }
    case ProfileKind::Plateau: {
      const Cutoffs& c = cutoffs_;
      if (s <= c.inner_lo || s >= c.outer_hi) return Jet(order);
      if (s >= c.inner_hi && s <= c.outer_lo) return Jet::constant(1.0, order);
      const Jet ls = log(Jet::variable(s, order));
      Jet chi = Jet::constant(1.0, order);
      if (s < c.inner_hi) {
        const double l0 = std::log(c.inner_lo), w = std::log(c.inner_hi) - l0;
        chi = chi * smooth_step((ls - l0) * (1.0 / w));
      }
      if (s > c.outer_lo) {
        const double l0 = std::log(c.outer_lo), w = std::log(c.outer_hi) - l0;
        chi = chi * (1.0 - smooth_step((ls - l0) * (1.0 / w)));
      }
      return chi;
    }
    case ProfileKind::Power: return Jet::constant(1.0, order);
  }
  return Jet(order);
}

double RadialProfile::value(double r) const {
  if (compact() && (r <= lower() || r >= upper())) return 0.0;
  const double base = base_value(scale_ * r);
  if (base == 0.0) return 0.0;
  return power_ == 0.0 ? amplitude_ * base : amplitude_ * base * std::pow(r, power_);
}

void RadialProfile::derivatives(double r, int k_max, std::span<double> out) const {
  if (k_max < 0) throw ArgumentError("derivative order must be >= 0");
  if (k_max > max_order_)
    throw CapabilityError("profile " + describe() + " provides derivatives up to order " +
                          std::to_string(max_order_) + ", requested " + std::to_string(k_max));
  if (out.size() < static_cast<std::size_t>(k_max + 1)) throw ArgumentError("derivative buffer too small");
  std::fill(out.begin(), out.begin() + k_max + 1, 0.0);
  if (!(r > 0.0)) throw DomainError("radial profiles are defined for r > 0");
  if (compact() && (r <= lower() || r >= upper())) return;
  Jet j = base_jet(scale_ * r, k_max);
  if (scale_ != 1.0) {
    double sp = 1.0;
    for (int k = 0; k <= k_max; ++k, sp *= scale_) j[k] *= sp;
  }
  if (power_ != 0.0) j = j * power_of_variable(r, power_, k_max);
  for (int k = 0; k <= k_max; ++k) out[k] = amplitude_ * j.derivative(k);
}

double RadialProfile::derivative(double r, int k) const {
  std::array<double, Jet::kCapacity> buf{};
  if (k < 0 || k >= Jet::kCapacity) throw CapabilityError("derivative order out of range");
  derivatives(r, k, buf);
  return buf[k];
}

std::vector<double> RadialProfile::breakpoints() const {
  if (kind_ != ProfileKind::Plateau) return {};
  return {cutoffs_.inner_hi / scale_, cutoffs_.outer_lo / scale_};
}

RadialProfile RadialProfile::times_power(double beta) const {
  RadialProfile p = *this;
  p.power_ += beta;
  return p;
}

RadialProfile RadialProfile::rescaled(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("rescaling factor must be positive");
  RadialProfile p = *this;
  p.scale_ *= lambda;
  p.amplitude_ *= std::pow(lambda, power_);
  return p;
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ProfileKind::SmoothBump: os << "bump(" << a_ << "," << b_ << ")"; break;
    case ProfileKind::PolyCutoff: os << "poly(" << a_ << "," << b_ << ";" << degree_ << ")"; break;
    case ProfileKind::Plateau:
      os << "plateau([" << cutoffs_.inner_lo << "," << cutoffs_.inner_hi << "],[" << cutoffs_.outer_lo << ","
         << cutoffs_.outer_hi << "])";
      break;
    case ProfileKind::Power: os << "1"; break;
  }
  if (scale_ != 1.0) os << "(" << scale_ << "r)";
  if (power_ != 0.0) os << "*r^" << power_;
  if (amplitude_ != 1.0) os << "*" << amplitude_;
  return os.str();
}

RadialProfile make_bump(double a, double b) {
  if (!(a > 0.0) || !(a < b) || !std::isfinite(b)) throw ArgumentError("bump needs 0 < a < b < inf");
  RadialProfile p;
  p.kind_ = ProfileKind::SmoothBump;
  p.max_order_ = kBumpOrder;
  p.a_ = p.lo_ = a;
  p.b_ = p.hi_ = b;
  const double h = 0.5 * (b - a), beta = 1.0 / (h * h);
  const Poly q = {1.0, 0.0, -1.0}, dq = {0.0, -2.0};
  auto polys = std::make_shared<std::vector<Poly>>();
  polys->push_back({1.0});
  for (int k = 0; k < kBumpOrder; ++k) {
    const Poly& pk = polys->back();
    Poly next = poly_scale(poly_mul(dq, pk), beta);
    next = poly_add(next, poly_mul(poly_mul(q, q), poly_derivative(pk)));
    next = poly_add(next, poly_scale(poly_mul(poly_mul(q, dq), pk), -2.0 * k));
    polys->push_back(std::move(next));
  }
  p.bump_poly_ = std::move(polys);
  return p;
}

RadialProfile make_poly_cutoff(double a, double b, int degree) {
  if (!(a > 0.0) || !(a < b) || !std::isfinite(b)) throw ArgumentError("poly cutoff needs 0 < a < b < inf");
  if (degree < 2) throw ArgumentError("poly cutoff degree must be >= 2");
  RadialProfile p;
  p.kind_ = ProfileKind::PolyCutoff;
  p.max_order_ = std::min(degree - 1, Jet::kCapacity - 1);
  p.a_ = p.lo_ = a;
  p.b_ = p.hi_ = b;
  p.degree_ = degree;
  return p;
}

RadialProfile make_plateau(double gamma, const Cutoffs& cutoffs) {
  cutoffs.validate();
  if (!std::isfinite(gamma)) throw ArgumentError("plateau exponent must be finite");
  RadialProfile p;
  p.kind_ = ProfileKind::Plateau;
  p.max_order_ = kPlateauOrder;
  p.cutoffs_ = cutoffs;
  p.lo_ = cutoffs.inner_lo;
  p.hi_ = cutoffs.outer_hi;
  p.power_ = gamma;
  return p;
}

RadialProfile make_extremizer(double Q, double p, double eps, const Cutoffs& cutoffs) {
  if (!(eps >= 0.0)) throw ArgumentError("extremizer needs eps >= 0");
  if (!(p > 1.0 && p < Q)) throw DomainError("extremizer needs 1 < p < Q");
  return make_plateau(-(Q - p) / p + eps, cutoffs);
}

RadialProfile make_power(double nu) {
  if (!std::isfinite(nu)) throw ArgumentError("power exponent must be finite");
  RadialProfile p;
  p.kind_ = ProfileKind::Power;
  p.max_order_ = Jet::kCapacity - 1;
  p.lo_ = 0.0;
  p.hi_ = INFINITY;
  p.power_ = nu;
  return p;
}

AngularPart::AngularPart(std::vector<AngularTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.coord >= static_cast<int>(kMaxDim)) throw ArgumentError("angular coordinate index out of range");
    if (t.coord >= 0 && t.power < 0) throw ArgumentError("angular powers must be >= 0");
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw ArgumentError("angular coefficients must be finite");
  }
}

AngularPart AngularPart::constant(std::complex<double> c) { return AngularPart({{c, -1, 0}}); }

AngularPart AngularPart::coordinate_trace(int coord, int power, std::complex<double> coeff) {
  if (coord < 0) throw ArgumentError("coordinate index must be >= 0");
  return AngularPart({{coeff, coord, power}});
}

AngularPart AngularPart::operator+(const AngularPart& other) const {
  std::vector<AngularTerm> t = terms_;
  t.insert(t.end(), other.terms_.begin(), other.terms_.end());
  return AngularPart(std::move(t));
}

std::complex<double> AngularPart::operator()(std::span<const double> y) const {
  std::complex<double> s = 0.0;
  for (const auto& t : terms_) {
    if (t.coord < 0) {
      s += t.coeff;
    } else {
      double v = 1.0;
      for (int i = 0; i < t.power; ++i) v *= y[t.coord];
      s += t.coeff * v;
    }
  }
  return s;
}

bool AngularPart::is_real() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const AngularTerm& t) { return t.coeff.imag() == 0.0; });
}

bool AngularPart::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const AngularTerm& t) { return t.coeff == 0.0; });
}

int AngularPart::max_coord() const {
  int m = -1;
  for (const auto& t : terms_) m = std::max(m, t.coord);
  return m;
}

std::string AngularPart::describe() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (i) s += "+";
    s += fmt(t.coeff);
    if (t.coord >= 0) s += "*y" + std::to_string(t.coord) + (t.power != 1 ? "^" + std::to_string(t.power) : "");
  }
  return s;
}

TestFunction TestFunction::separable(RadialProfile g, AngularPart u) {
  TestFunction f;
  f.separable_ = true;
  f.zero_ = u.is_zero();
  f.real_ = u.is_real();
  f.profile_ = std::move(g);
  f.angular_ = std::move(u);
  return f;
}

TestFunction TestFunction::general(Callable fn, SupportBox support, bool real_valued, std::string label,
                                   bool smooth) {
  support.validate();
  TestFunction f;
  f.separable_ = false;
  f.callable_ = std::move(fn);
  f.support_ = std::move(support);
  f.real_ = real_valued;
  f.smooth_ = smooth;
  f.label_ = std::move(label);
  return f;
}

TestFunction TestFunction::zero() {
  TestFunction f = separable(make_bump(1.0, 2.0), AngularPart());
  f.zero_ = true;
  f.real_ = true;
  return f;
}

bool TestFunction::is_real() const { return real_; }

const RadialProfile& TestFunction::profile() const {
  if (!separable_) throw CapabilityError("general test functions have no radial profile");
  return *profile_;
}

const AngularPart& TestFunction::angular() const {
  if (!separable_) throw CapabilityError("general test functions have no angular part");
  return angular_;
}

const SupportBox& TestFunction::support_box() const {
  if (!support_) throw CapabilityError("separable test functions carry no support box");
  return *support_;
}

std::complex<double> TestFunction::eval(std::span<const double> x, const QuasiNorm& norm) const {
  if (zero_) return 0.0;
  if (!separable_) {
    const SupportBox& b = *support_;
    for (std::size_t i = 0; i < b.dim(); ++i)
      if (x[i] < b.lo[i] || x[i] > b.hi[i]) return 0.0;
    return callable_(x);
  }
  const double r = norm(x);
  if (!(r > 0.0)) return 0.0;
  const double g = profile_->value(r);
  if (g == 0.0) return 0.0;
  if (angular_.max_coord() < 0) return g * angular_(x);
  std::array<double, kMaxDim> y{};
  const std::size_t n = x.size();
  norm.group().dilate(1.0 / r, x, std::span<double>(y.data(), n));
  return g * angular_(std::span<const double>(y.data(), n));
}

std::pair<double, double> TestFunction::radial_support(const QuasiNorm& norm) const {
  if (separable_) {
    if (!profile_->compact()) throw DomainError("profile " + profile_->describe() + " has unbounded support");
    return {profile_->lower(), profile_->upper()};
  }
  const SupportBox& b = *support_;
  const auto& g = norm.group();
  double inner = b.rho0;
  std::array<double, kMaxDim> corner{};
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double dist = b.lo[i] > 0.0 ? b.lo[i] : (b.hi[i] < 0.0 ? -b.hi[i] : 0.0);
    if (dist > 0.0) inner = std::max(inner, std::pow(dist / norm.coordinate_bound(i), 1.0 / g.weight(i)));
    corner[i] = std::max(std::abs(b.lo[i]), std::abs(b.hi[i]));
  }
  if (!(inner > 0.0)) throw DomainError("support box of " + label_ + " touches the origin");
  return {inner, norm(std::span<const double>(corner.data(), b.dim()))};
}

SupportBox TestFunction::integration_box(const QuasiNorm& norm) const {
  if (!separable_) return *support_;
  const auto [a, b] = radial_support(norm);
  return SupportBox::ball(norm, b, a);
}

TestFunction TestFunction::times_norm_power(const QuasiNorm& norm, double beta) const {
  if (separable_) {
    TestFunction f = separable(profile_->times_power(beta), angular_);
    f.zero_ = zero_;
    return f;
  }
  auto inner = callable_;
  return general(
      [inner, norm, beta](std::span<const double> x) { return inner(x) * std::pow(norm(x), beta); }, *support_,
      real_, label_ + "*|x|^" + fmt(beta), smooth_);
}

TestFunction TestFunction::dilated(const DilationGroup& group, double lambda) const {
  if (separable_) {
    TestFunction f = separable(profile_->rescaled(lambda), angular_);
    f.zero_ = zero_;
    return f;
  }
  auto inner = callable_;
  return general(
      [inner, group, lambda](std::span<const double> x) {
        std::array<double, kMaxDim> y{};
        group.dilate(lambda, x, std::span<double>(y.data(), x.size()));
        return inner(std::span<const double>(y.data(), x.size()));
      },
      support_->dilated(group, 1.0 / lambda), real_, label_ + "(D_" + fmt(lambda) + ")", smooth_);
}

TestFunction TestFunction::as_general(const QuasiNorm& norm) const {
  if (!separable_) return *this;
  const TestFunction self = *this;
  TestFunction f = general([self, norm](std::span<const double> x) { return self.eval(x, norm); },
                           integration_box(norm), real_, "pointwise[" + describe() + "]", smooth_);
  f.zero_ = zero_;
  return f;
}

std::string TestFunction::describe() const {
  if (zero_) return "0";
  if (!separable_) return label_;
  return profile_->describe() + "*[" + angular_.describe() + "]";
}

TestFunction make_offcenter_bump(std::vector<double> center, double radius) {
  if (!(radius > 0.0)) throw ArgumentError("bump radius must be positive");
  SupportBox box;
  bool clear = false;
  for (double c : center) {
    box.lo.push_back(c - radius);
    box.hi.push_back(c + radius);
    clear = clear || std::abs(c) > radius;
  }
  if (!clear) throw ArgumentError("off-center bump support must miss the origin");
  std::ostringstream label;
  label << "offcenter_bump(c=(";
  for (std::size_t i = 0; i < center.size(); ++i) label << (i ? "," : "") << center[i];
  label << "),rho=" << radius << ")";
  const double inv = 1.0 / (radius * radius);
  return TestFunction::general(
      [center = std::move(center), inv](std::span<const double> x) -> std::complex<double> {
        double d2 = 0.0;
        for (std::size_t i = 0; i < center.size(); ++i) d2 += (x[i] - center[i]) * (x[i] - center[i]);
        const double t = d2 * inv;
        if (t >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - t));
      },
      std::move(box), true, label.str());
}

}  // namespace hardy
