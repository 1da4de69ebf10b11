#pragma once

// Reporters for the Hardy/Rellich family: every named term is integrated,
// LHS and RHS are compared, and each remainder is checked for sign.
//
// A reporter computes the identity and, where a finite constant exists, the
// matching inequality. Degenerate constants (a vanishing coefficient) leave
// the identity check intact and are recorded in the report, or rejected when
// the inequality is explicitly required.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hardy/evaluator.hpp"

namespace hardy {

enum class IdentityKind { HardyLp, HardyL2, WeightedL2, Rellich, HigherOrder, Uncertainty, LogHardy, IbpFormula,
                          ComplexReduction };

std::string to_string(IdentityKind kind);
/// Throws ConfigurationError on an unknown name.
IdentityKind identity_kind_from_string(const std::string& name);

/// What to check; unused fields are ignored by the reporter.
struct IdentityJob {
  IdentityKind kind = IdentityKind::HardyL2;
  double p = 2.0;
  double alpha = 0.0;
  int k = 1;
  std::vector<double> radii;  // log-Hardy R values
  bool require_inequality = false;
};

/// Radial derivative order the reporter reads.
int required_order(const IdentityJob& job);

/// Parameter gates that depend only on Q. Throws DomainError / ArgumentError.
void check_preconditions(const IdentityJob& job, double Q);

/// Params as they appear in reports, e.g. {"p": 3}.
std::map<std::string, double> job_params(const IdentityJob& job);

struct IdentityReport {
  IdentityKind identity = IdentityKind::HardyL2;
  std::map<std::string, double> params;
  std::vector<double> radii;
  std::map<std::string, double> terms;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  std::vector<double> remainders;
  bool pass = false;
  double quad_error = 0.0;
  double tolerance = 0.0;
  bool inequality_checked = false;
  std::optional<bool> inequality_holds;
  std::optional<double> constant;
  std::string path;
  std::string error;
  std::vector<std::string> notes;

  /// "p=3;alpha=0.5", with R lists as R=0.5|1|2.
  std::string params_string() const;
};

void to_json(nlohmann::json& j, const IdentityReport& r);
void from_json(const nlohmann::json& j, IdentityReport& r);

// ---- sharp constants ----

/// p/(Q−p); DomainError unless 1 < p < Q.
double hardy_constant(double Q, double p);
/// 2/|Q−2−2α|; DegenerateConstantError when Q−2−2α = 0.
double weighted_constant(double Q, double alpha);
/// 4/(Q(Q−4)); DomainError for Q < 5.
double rellich_constant(double Q);
/// [∏_{j<k} |(Q−2)/2 − (α+j)|]^{−1}; DegenerateConstantError when a factor vanishes.
double higher_order_constant(double Q, int k, double alpha);
/// p/(p−1).
double log_hardy_constant(double p);

// ---- pointwise pieces ----

/// (p−1)∫₀¹|ξh + (1−ξ)g|^{p−2} ξ dξ.
double i_p_weight(double h, double g, double p);

struct ReductionResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
};

/// |z|^p against (∫|cos|^p)^{−1} ∫_{−π}^{π} |Re z cosθ + Im z sinθ|^p dθ.
ReductionResidual complex_reduction_check(std::complex<double> z, double p);
IdentityReport complex_reduction_report(std::complex<double> z, double p, double tol = 1e-10);

// ---- reporters ----

IdentityReport hardy_lp_report(const Evaluator& ev, double p);
IdentityReport hardy_l2_report(const Evaluator& ev);
IdentityReport weighted_l2_report(const Evaluator& ev, double alpha, bool require_inequality = false);
IdentityReport rellich_report(const Evaluator& ev);
IdentityReport higher_order_report(const Evaluator& ev, int k, double alpha, bool require_inequality = false);
IdentityReport uncertainty_report(const Evaluator& ev, double p);
IdentityReport log_hardy_report(const Evaluator& ev, double p, const std::vector<double>& radii);
IdentityReport ibp_report(const Evaluator& ev, double p);

/// Dispatches on job.kind (ComplexReduction is not an evaluator job).
IdentityReport run_identity(const Evaluator& ev, const IdentityJob& job);

/// Builds the evaluator with the order the job needs and runs it.
IdentityReport run_identity(const QuasiNorm& norm, const TestFunction& f, const IdentityJob& job,
                            const QuadratureSpec& spec, EvalPath path = EvalPath::Separable,
                            const RadialOperatorMethod& method = RadialOperatorMethod{});

}  // namespace hardy
