#include "hardy/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

std::string join_weights(std::span<const double> w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  return os.str();
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {}

Point Point::inverse() const {
  std::vector<double> neg(coords_.size());
  std::transform(coords_.begin(), coords_.end(), neg.begin(), [](double v) { return -v; });
  return Point(std::move(neg));
}

DilationGroup::DilationGroup(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ArgumentError("a dilation group needs at least one weight");
  if (weights_.size() > kMaxDim)
    throw ArgumentError("group dimension " + std::to_string(weights_.size()) + " exceeds " +
                        std::to_string(kMaxDim));
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w))
      throw ArgumentError("dilation weights must be finite and positive, got " + join_weights(weights_));
  q_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

bool DilationGroup::isotropic() const noexcept {
  return std::all_of(weights_.begin(), weights_.end(), [&](double w) { return w == weights_.front(); });
}

Point DilationGroup::dilate(double lambda, const Point& x) const {
  std::vector<double> out(x.dim());
  dilate(lambda, x.coords(), out);
  return Point(std::move(out));
}

void DilationGroup::dilate(double lambda, std::span<const double> x, std::span<double> out) const {
  if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
  if (x.size() != weights_.size() || out.size() != weights_.size())
    throw ArgumentError("point dimension does not match the group");
  for (std::size_t i = 0; i < weights_.size(); ++i) out[i] = std::pow(lambda, weights_[i]) * x[i];
}

std::string DilationGroup::describe() const { return "nu=(" + join_weights(weights_) + ")"; }

DilationGroup make_group(std::vector<double> weights) { return DilationGroup(std::move(weights)); }

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::Anisotropic: return "anisotropic";
    case NormKind::Koranyi: return "koranyi";
    case NormKind::Euclidean: return "euclidean";
  }
  return "?";
}

NormKind norm_kind_from_string(const std::string& name) {
  if (name == "anisotropic") return NormKind::Anisotropic;
  if (name == "koranyi") return NormKind::Koranyi;
  if (name == "euclidean") return NormKind::Euclidean;
  throw ConfigurationError("unknown norm kind '" + name + "'");
}

QuasiNorm::QuasiNorm(DilationGroup group, NormKind kind, double param)
    : group_(std::move(group)), kind_(kind), param_(param) {}

double QuasiNorm::default_kappa(const DilationGroup& group) {
  const double top = *std::max_element(group.weights().begin(), group.weights().end());
  double k = std::ceil(2.0 * top);
  if (std::fmod(k, 2.0) != 0.0) k += 1.0;
  return k;
}

QuasiNorm QuasiNorm::anisotropic(const DilationGroup& group) {
  return anisotropic(group, default_kappa(group));
}

QuasiNorm QuasiNorm::anisotropic(const DilationGroup& group, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigurationError("anisotropic norm needs kappa > 0");
  QuasiNorm n(group, NormKind::Anisotropic, kappa);
  for (double w : group.weights()) {
    const double e = kappa / w;
    n.exponents_.push_back(e);
    const double r = std::round(e);
    n.int_exponents_.push_back(r == e && r >= 1.0 && r <= 16.0 ? static_cast<int>(r) : 0);
  }
  return n;
}

QuasiNorm QuasiNorm::koranyi(const DilationGroup& group, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigurationError("Koranyi norm needs c > 0");
  QuasiNorm n(group, NormKind::Koranyi, c);
  for (double w : group.weights()) {
    if (w != 1.0 && w != 2.0)
      throw ConfigurationError("Koranyi norm requires weights in {1, 2}, got " + group.describe());
    n.second_layer_.push_back(w == 2.0 ? 1 : 0);
  }
  return n;
}

QuasiNorm QuasiNorm::euclidean(const DilationGroup& group) {
  if (!group.isotropic())
    throw ConfigurationError("Euclidean norm requires equal weights, got " + group.describe());
  return QuasiNorm(group, NormKind::Euclidean, 0.0);
}

double QuasiNorm::operator()(std::span<const double> x) const {
  const std::size_t n = group_.dim();
  switch (kind_) {
    case NormKind::Anisotropic: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(x[i]);
        s += int_exponents_[i] ? ipow(a, int_exponents_[i]) : std::pow(a, exponents_[i]);
      }
      return std::pow(s, 1.0 / param_);
    }
    case NormKind::Koranyi: {
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) (second_layer_[i] ? s2 : s1) += x[i] * x[i];
      return std::sqrt(std::sqrt(s1 * s1 + param_ * s2));
    }
    case NormKind::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
      const double w = group_.weight(0);
      return w == 1.0 ? std::sqrt(s) : std::pow(s, 0.5 / w);
    }
  }
  return 0.0;
}

double QuasiNorm::coordinate_bound(std::size_t i) const {
  if (kind_ == NormKind::Koranyi && second_layer_[i]) return 1.0 / std::sqrt(param_);
  return 1.0;
}

std::string QuasiNorm::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == NormKind::Anisotropic) os << "(kappa=" << param_ << ")";
  if (kind_ == NormKind::Koranyi) os << "(c=" << param_ << ")";
  return os.str();
}

Point sphere_project(const QuasiNorm& norm, const Point& x) {
  std::vector<double> out(x.dim());
  sphere_project(norm, x.coords(), out);
  return Point(std::move(out));
}

void sphere_project(const QuasiNorm& norm, std::span<const double> x, std::span<double> out) {
  const double r = norm(x);
  if (!(r > 0.0)) throw DomainError("cannot project the origin onto the unit quasi-sphere");
  norm.group().dilate(1.0 / r, x, out);
}

}  // namespace hardy
