#pragma once

// Declarative run files (JSON). Top-level keys:
//
//   group, norm, function, path, quad, calculus   shared context
//   identities: [ {id, p, alpha, k, R, z, require_inequality, <context overrides>} ]
//   sharpness:  [ {inequality, p, alpha, k, deltas, optimize, <context overrides>} ]
//   output: {dir, format}, seed, workers
//
// A job may carry any context block; it is merged key by key over the
// shared one. quad.seed falls back to the top-level seed. Parsing collects
// every violation before reporting.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hardy/calculus.hpp"
#include "hardy/evaluator.hpp"
#include "hardy/group.hpp"
#include "hardy/identities.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/sharpness.hpp"
#include "hardy/testfuncs.hpp"

namespace hardy {

struct FunctionConfig {
  std::string kind = "bump";  // bump | poly | plateau | extremizer | offcenter
  double a = 0.5, b = 2.0;    // bump, poly
  int degree = 8;             // poly
  double gamma = 0.0;         // plateau
  double p = 2.0, eps = 0.0;  // extremizer: exponent −(Q−p)/p + eps
  std::vector<double> cutoffs{0.25, 0.5, 2.0, 4.0};  // plateau, extremizer
  std::vector<double> center;  // offcenter
  double radius = 0.3;         // offcenter
  std::vector<AngularTerm> angular;  // empty means u ≡ 1
};

struct NormConfig {
  NormKind kind = NormKind::Anisotropic;
  std::optional<double> kappa;  // anisotropic; default from the group
  double c = 16.0;              // Koranyi
};

/// Everything a job needs besides its own parameters.
struct JobContext {
  std::vector<double> weights{1.0, 1.0, 1.0};
  NormConfig norm;
  FunctionConfig function;
  std::optional<EvalPath> path;  // unset: separable for separable functions
  QuadratureSpec quadrature;
  bool explicit_seed = false;  // quad.seed given for this job
  RadialOperatorMethod calculus;

  DilationGroup group() const;
  QuasiNorm build_norm() const;
  TestFunction build_function() const;
  EvalPath resolved_path() const;
};

struct IdentityJobConfig {
  IdentityJob job;
  std::complex<double> z{0.0, 0.0};  // ComplexReduction
  JobContext context;
};

struct OptimizeConfig {
  std::string family = "plateau";  // plateau | bump
  std::vector<std::array<double, 2>> bounds;
  std::vector<double> start;
  OptimizeOptions options;
};

struct SharpnessJobConfig {
  InequalityKind inequality = InequalityKind::Hardy;
  InequalityParams params;
  std::vector<double> deltas{1e-1, 1e-2, 1e-3};
  std::optional<OptimizeConfig> optimize;
  JobContext context;
};

enum class OutputFormat { Json, Csv, Both };

std::string to_string(OutputFormat f);
/// Throws ConfigurationError.
OutputFormat output_format_from_string(const std::string& s);

struct RunConfig {
  std::vector<IdentityJobConfig> identities;
  std::vector<SharpnessJobConfig> sharpness;
  std::string output_dir = "out";
  OutputFormat format = OutputFormat::Both;
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Throws ValidationError listing every problem found.
RunConfig parse_config(const nlohmann::json& j);
/// Reads and parses a file; IoError when unreadable, ValidationError on bad JSON or content.
RunConfig load_config(const std::string& path);

/// Sets the run seed; with `force` it also replaces explicit quad.seed values.
void apply_seed(RunConfig& config, std::uint64_t seed, bool force = true);

/// Fully resolved echo: every default filled in, every job self-contained.
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const JobContext& context);

}  // namespace hardy
