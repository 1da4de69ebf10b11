#pragma once

// Sharp constants approached from below: Rayleigh quotients of the four
// inequalities, sweeps over the plateau family that tends to the homogeneous
// extremal profile, and a Nelder–Mead search over small profile families.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hardy/evaluator.hpp"

namespace hardy {

enum class InequalityKind { Hardy, Weighted, Rellich, HigherOrder };

std::string to_string(InequalityKind kind);
/// Throws ConfigurationError on an unknown name.
InequalityKind inequality_kind_from_string(const std::string& name);

struct InequalityParams {
  double p = 2.0;      // Hardy
  double alpha = 0.0;  // Weighted, HigherOrder
  int k = 1;           // HigherOrder
};

/// Closed-form sharp constant. Throws DomainError / DegenerateConstantError.
double target_constant(InequalityKind kind, double Q, const InequalityParams& params);

/// Throws DomainError / ArgumentError / DegenerateConstantError on inadmissible parameters.
void check_preconditions(InequalityKind kind, double Q, const InequalityParams& params);

/// Derivative order the quotient reads.
int required_order(InequalityKind kind, const InequalityParams& params);

/// Degree of homogeneity of the extremal profile r^γ.
double extremal_exponent(InequalityKind kind, double Q, const InequalityParams& params);

/// ‖lower‖/‖upper‖ for the inequality; nullopt when the denominator vanishes
/// or the value is not finite.
std::optional<double> rayleigh_quotient(InequalityKind kind, const Evaluator& ev, const InequalityParams& params);
std::optional<double> rayleigh_quotient(InequalityKind kind, const QuasiNorm& norm, const TestFunction& f,
                                        const InequalityParams& params, const QuadratureSpec& spec,
                                        EvalPath path = EvalPath::Separable,
                                        const RadialOperatorMethod& method = RadialOperatorMethod{});

/// Plateau on [δ, 1/δ] with log-scale transitions on [δ³, δ] and [1/δ, 1/δ³].
Cutoffs sweep_cutoffs(double delta);
TestFunction plateau_extremizer(InequalityKind kind, double Q, const InequalityParams& params, double delta);

struct SharpnessPoint {
  double delta = 0.0;
  double quotient = 0.0;  // NaN when unreliable
  double gap = 0.0;
  bool reliable = true;
  std::string error;
};

struct SharpnessCurve {
  InequalityKind inequality = InequalityKind::Hardy;
  std::map<std::string, double> params;
  std::vector<SharpnessPoint> points;
  double target = 0.0;
  double best_quotient = 0.0;
  double best_gap = 0.0;
  bool monotone = true;
  bool below_target = true;
  bool pass = false;
  double tolerance = 0.0;
  std::vector<std::string> notes;

  std::string params_string() const;
};

void to_json(nlohmann::json& j, const SharpnessCurve& c);
void from_json(const nlohmann::json& j, SharpnessCurve& c);

/// δ_list must be strictly decreasing inside (0, 0.5).
SharpnessCurve sharpness_sweep(InequalityKind kind, const QuasiNorm& norm, const InequalityParams& params,
                               const std::vector<double>& deltas, const QuadratureSpec& spec);

/// Profiles indexed by up to four bounded shape parameters.
struct ProfileFamily {
  std::string name;
  std::vector<double> lower, upper, start;
  /// Throws for parameter points that do not define a profile.
  std::function<TestFunction(std::span<const double>)> make;
  /// Evaluated before the simplex starts; the best of everything seen is returned.
  std::vector<std::vector<double>> probes;

  std::size_t dim() const noexcept { return lower.size(); }
};

/// bump(a, b) with a < b, a in [a_lo, a_hi], b in [b_lo, b_hi].
ProfileFamily bump_family(double a_lo, double a_hi, double b_lo, double b_hi, double a0, double b0);
/// One parameter t = −log10 δ of the plateau family; the sweep δ values are probes.
ProfileFamily plateau_family(InequalityKind kind, double Q, const InequalityParams& params, double t_lo,
                             double t_hi, const std::vector<double>& probe_deltas = {});
/// No free parameters.
ProfileFamily fixed_family(TestFunction f, std::string name = "fixed");

struct OptimizeOptions {
  int max_iterations = 200;
  double size_tolerance = 1e-6;
  double initial_step = 0.25;  // fraction of each box side
};

struct OptimizeResult {
  double best_quotient = 0.0;
  std::vector<double> best_params;
  double target = 0.0;
  double gap = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int rejected = 0;
  bool converged = false;
};

OptimizeResult optimize_constant(InequalityKind kind, const QuasiNorm& norm, const InequalityParams& params,
                                 const ProfileFamily& family, const QuadratureSpec& spec,
                                 const OptimizeOptions& options = {});

}  // namespace hardy
