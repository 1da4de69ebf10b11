#include "hardy/suite.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <thread>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

IdentityReport failed_report(const IdentityJob& job, const std::string& message) {
  IdentityReport r;
  r.identity = job.kind;
  r.params = job_params(job);
  r.radii = job.radii;
  r.pass = false;
  r.error = message;
  return r;
}

// Jobs with the same resolved context and derivative order.
struct Unit {
  std::vector<std::size_t> jobs;
  bool sharpness = false;
};

void run_identity_unit(const RunConfig& config, const Unit& unit, std::vector<IdentityOutcome>& out) {
  const auto t0 = Clock::now();
  const IdentityJobConfig& first = config.identities[unit.jobs.front()];
  std::unique_ptr<Evaluator> ev;
  std::string build_error;
  double build_seconds = 0.0;
  if (first.job.kind != IdentityKind::ComplexReduction) {
    try {
      const JobContext& c = first.context;
      ev = make_evaluator(c.build_function(), c.build_norm(), c.quadrature, required_order(first.job),
                          c.resolved_path(), c.calculus);
    } catch (const std::exception& e) {
      build_error = e.what();
    }
    build_seconds = seconds_since(t0);
  }
  for (std::size_t idx : unit.jobs) {
    const IdentityJobConfig& cfg = config.identities[idx];
    const auto t1 = Clock::now();
    IdentityOutcome& o = out[idx];
    try {
      if (cfg.job.kind == IdentityKind::ComplexReduction) o.report = complex_reduction_report(cfg.z, cfg.job.p);
      else if (!ev) o.report = failed_report(cfg.job, build_error);
      else o.report = run_identity(*ev, cfg.job);
    } catch (const std::exception& e) {
      o.report = failed_report(cfg.job, e.what());
    }
    o.seconds = seconds_since(t1);
    if (idx == unit.jobs.front()) o.seconds += build_seconds;
  }
}

void run_sharpness_job(const SharpnessJobConfig& cfg, SharpnessOutcome& o) {
  const auto t0 = Clock::now();
  try {
    const QuasiNorm norm = cfg.context.build_norm();
    const QuadratureSpec& spec = cfg.context.quadrature;
    o.curve = sharpness_sweep(cfg.inequality, norm, cfg.params, cfg.deltas, spec);
    o.pass = o.curve.pass;
    if (cfg.optimize) {
      const OptimizeConfig& oc = *cfg.optimize;
      const double Q = norm.group().homogeneous_dimension();
      ProfileFamily fam;
      if (oc.family == "plateau") {
        fam = plateau_family(cfg.inequality, Q, cfg.params, oc.bounds[0][0], oc.bounds[0][1], cfg.deltas);
      } else {
        fam = bump_family(oc.bounds[0][0], oc.bounds[0][1], oc.bounds[1][0], oc.bounds[1][1], oc.start[0],
                          oc.start[1]);
      }
      fam.start = oc.start;
      o.optimum = optimize_constant(cfg.inequality, norm, cfg.params, fam, spec, oc.options);
      const double limit = o.optimum->target * (1.0 + 10.0 * spec.target_tol);
      if (!(o.optimum->best_quotient <= limit)) {
        o.pass = false;
        o.curve.notes.push_back("optimizer quotient exceeds the sharp constant");
      }
    }
  } catch (const std::exception& e) {
    o.error = e.what();
    o.pass = false;
    o.curve.inequality = cfg.inequality;
  }
  o.seconds = seconds_since(t0);
}

}  // namespace

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Verify: return "verify";
    case RunMode::Sharpness: return "sharpness";
    case RunMode::All: return "all";
  }
  return "?";
}

void to_json(json& j, const OptimizeResult& r) {
  j = json{{"best_quotient", r.best_quotient}, {"best_params", r.best_params}, {"target", r.target},
           {"gap", r.gap},           {"iterations", r.iterations},   {"evaluations", r.evaluations},
           {"rejected", r.rejected}, {"converged", r.converged}};
}

void from_json(const json& j, OptimizeResult& r) {
  r.best_quotient = j.at("best_quotient").get<double>();
  r.best_params = j.at("best_params").get<std::vector<double>>();
  r.target = j.at("target").get<double>();
  r.gap = j.at("gap").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.evaluations = j.at("evaluations").get<int>();
  r.rejected = j.at("rejected").get<int>();
  r.converged = j.at("converged").get<bool>();
}

void to_json(json& j, const SuiteResult& r) {
  json ids = json::array();
  for (const auto& o : r.identities) {
    json e = o.report;
    e["seconds"] = o.seconds;
    ids.push_back(e);
  }
  json sh = json::array();
  for (const auto& o : r.sharpness) {
    json e{{"curve", o.curve}, {"pass", o.pass}, {"seconds", o.seconds}};
    e["optimum"] = o.optimum ? json(*o.optimum) : json(nullptr);
    if (!o.error.empty()) e["error"] = o.error;
    sh.push_back(e);
  }
  j = json{{"config", r.config}, {"identities", ids}, {"sharpness", sh}, {"pass", r.pass}};
}

SuiteResult run_suite(const RunConfig& config, RunMode mode) {
  SuiteResult result;
  result.config = to_json(config);
  result.config["mode"] = to_string(mode);
  const bool do_ids = mode != RunMode::Sharpness;
  const bool do_sharp = mode != RunMode::Verify;

  std::vector<Unit> units;
  if (do_ids) {
    std::map<std::string, std::size_t> by_key;
    for (std::size_t i = 0; i < config.identities.size(); ++i) {
      const auto& cfg = config.identities[i];
      if (cfg.job.kind == IdentityKind::ComplexReduction) {
        units.push_back({{i}, false});
        continue;
      }
      const std::string key = to_json(cfg.context).dump() + "#" + std::to_string(required_order(cfg.job));
      const auto [it, fresh] = by_key.emplace(key, units.size());
      if (fresh) units.push_back({{}, false});
      units[it->second].jobs.push_back(i);
    }
    result.identities.resize(config.identities.size());
  }
  if (do_sharp) {
    for (std::size_t i = 0; i < config.sharpness.size(); ++i) units.push_back({{i}, true});
    result.sharpness.resize(config.sharpness.size());
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t u = next++; u < units.size(); u = next++) {
      if (units[u].sharpness) run_sharpness_job(config.sharpness[units[u].jobs.front()],
                                                result.sharpness[units[u].jobs.front()]);
      else run_identity_unit(config, units[u], result.identities);
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(config.workers, 1), std::max<std::size_t>(units.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (const auto& o : result.identities) result.pass = result.pass && o.report.pass;
  for (const auto& o : result.sharpness) result.pass = result.pass && o.pass;
  return result;
}

json reports_json(const SuiteResult& result) {
  json arr = json::array();
  for (const auto& o : result.identities) arr.push_back(o.report);
  for (const auto& o : result.sharpness) {
    json e = o.curve;
    e["optimum"] = o.optimum ? json(*o.optimum) : json(nullptr);
    if (!o.error.empty()) e["error"] = o.error;
    arr.push_back(e);
  }
  return arr;
}

std::string reports_csv(const SuiteResult& result) {
  std::string out = "id,params,lhs,rhs,rel_residual,pass,quotient,target,gap\n";
  auto flag = [](bool b) { return b ? "true" : "false"; };
  for (const auto& o : result.identities) {
    const IdentityReport& r = o.report;
    out += to_string(r.identity) + "," + csv_field(r.params_string()) + "," + num(r.lhs) + "," + num(r.rhs) + "," +
           num(r.rel_residual) + "," + flag(r.pass) + ",,,\n";
  }
  for (const auto& o : result.sharpness) {
    const SharpnessCurve& c = o.curve;
    const std::string id = to_string(c.inequality);
    const std::string base = c.params_string();
    const std::string sep = base.empty() ? "" : ";";
    if (!o.error.empty()) {
      out += id + "," + csv_field(base) + ",,,,false,,,\n";
      continue;
    }
    for (const auto& p : c.points) {
      const bool ok = p.reliable && p.quotient <= c.target * (1.0 + c.tolerance);
      out += id + "," + csv_field(base + sep + "delta=" + num(p.delta)) + ",,,," + flag(ok) + "," + num(p.quotient) +
             "," + num(c.target) + "," + num(p.gap) + "\n";
    }
    if (o.optimum) {
      const OptimizeResult& r = *o.optimum;
      std::string x;
      for (double v : r.best_params) x += (x.empty() ? "" : "|") + num(v);
      const bool ok = r.best_quotient <= r.target * (1.0 + c.tolerance);
      out += id + "," + csv_field(base + sep + "optimum=" + x) + ",,,," + flag(ok) + "," + num(r.best_quotient) + "," +
             num(r.target) + "," + num(r.gap) + "\n";
    }
  }
  return out;
}

std::vector<std::string> emit(const SuiteResult& result, const std::string& dir, OutputFormat format,
                              std::ostream& fallback) {
  namespace fs = std::filesystem;
  const bool want_json = format != OutputFormat::Csv;
  const bool want_csv = format != OutputFormat::Json;
  std::vector<std::pair<fs::path, std::string>> files;
  if (want_json) {
    files.emplace_back(fs::path(dir) / "suite.json", json(result).dump(2) + "\n");
    files.emplace_back(fs::path(dir) / "reports.json", reports_json(result).dump(2) + "\n");
  }
  if (want_csv) files.emplace_back(fs::path(dir) / "reports.csv", reports_csv(result));

  std::vector<std::string> written;
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    for (const auto& [path, text] : files) {
      std::ofstream os(path, std::ios::binary | std::ios::trunc);
      os << text;
      os.close();
      if (!os) throw IoError("cannot write '" + path.string() + "'");
      written.push_back(path.string());
    }
  } catch (const IoError&) {
    for (const auto& [path, text] : files) {
      if (path.filename() == "suite.json") continue;
      fallback << "== " << path.filename().string() << " ==\n" << text;
    }
    throw;
  }
  return written;
}

}  // namespace hardy
