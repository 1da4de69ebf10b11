#pragma once

// Runs a parsed RunConfig and writes its reports.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hardy/config.hpp"
#include "hardy/identities.hpp"
#include "hardy/sharpness.hpp"

namespace hardy {

enum class RunMode { Verify, Sharpness, All };

std::string to_string(RunMode mode);

struct IdentityOutcome {
  IdentityReport report;
  double seconds = 0.0;
};

struct SharpnessOutcome {
  SharpnessCurve curve;
  std::optional<OptimizeResult> optimum;
  std::string error;
  bool pass = false;
  double seconds = 0.0;
};

struct SuiteResult {
  nlohmann::json config;  // resolved echo
  std::vector<IdentityOutcome> identities;
  std::vector<SharpnessOutcome> sharpness;
  bool pass = true;
};

void to_json(nlohmann::json& j, const OptimizeResult& r);
void from_json(const nlohmann::json& j, OptimizeResult& r);
void to_json(nlohmann::json& j, const SuiteResult& r);

/// Jobs sharing a context and derivative order share one evaluator. A job
/// that throws is recorded as failed; the others still run.
SuiteResult run_suite(const RunConfig& config, RunMode mode = RunMode::All);

/// Identity reports, then sharpness curves, in config order.
nlohmann::json reports_json(const SuiteResult& result);
/// Header id,params,lhs,rhs,rel_residual,pass,quotient,target,gap; one row per
/// identity report, per sweep point and per optimizer result.
std::string reports_csv(const SuiteResult& result);

/// Writes suite.json and reports.json and/or reports.csv under `dir`; returns
/// the paths written. On failure the reports go to `fallback` before IoError
/// is thrown.
std::vector<std::string> emit(const SuiteResult& result, const std::string& dir, OutputFormat format,
                              std::ostream& fallback);

}  // namespace hardy
