// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hardy/calculus.hpp"
#include "hardy/errors.hpp"
#include "hardy/identities.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/sharpness.hpp"

using namespace hardy;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- the identity matrix shared by criteria 1, 2 and 7 ----

struct MatrixRun {
  std::size_t identity_reports = 0;
  std::size_t failures = 0;
  double worst_sep = 0.0, worst_gen = 0.0;
  double min_remainder = INFINITY;
  std::size_t uncertainty = 0, uncertainty_bad = 0;
  double min_slack = INFINITY;
  std::size_t loghardy = 0, loghardy_bad = 0;
  std::vector<std::string> failed;
  double seconds = 0.0;
};

IdentityJob job_of(IdentityKind kind, double p = 2.0, double alpha = 0.0, int k = 1) {
  IdentityJob j;
  j.kind = kind;
  j.p = p;
  j.alpha = alpha;
  j.k = k;
  return j;
}

std::vector<QuasiNorm> norms_for(const std::vector<double>& w) {
  const DilationGroup g = make_group(w);
  std::vector<QuasiNorm> out{QuasiNorm::anisotropic(g)};
  const bool koranyi_ok = std::all_of(w.begin(), w.end(), [](double v) { return v == 1.0 || v == 2.0; }) &&
                          std::count(w.begin(), w.end(), 2.0) > 0;
  if (koranyi_ok) out.push_back(QuasiNorm::koranyi(g));
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 1.0; })) out.push_back(QuasiNorm::euclidean(g));
  return out;
}

std::vector<IdentityJob> identity_jobs(double Q) {
  std::vector<IdentityJob> jobs;
  for (double p : {1.5, 2.0, 3.0})
    if (p < Q) jobs.push_back(job_of(IdentityKind::HardyLp, p));
  jobs.push_back(job_of(IdentityKind::HardyL2));
  for (double a : {-1.0, 0.0, 1.0, (Q - 2) / 2 + 0.3}) jobs.push_back(job_of(IdentityKind::WeightedL2, 2, a));
  if (Q >= 5) jobs.push_back(job_of(IdentityKind::Rellich));
  for (int k : {1, 2, 3})
    for (double a : {0.0, 0.5}) jobs.push_back(job_of(IdentityKind::HigherOrder, 2, a, k));
  for (double p : {2.0, 2.5}) jobs.push_back(job_of(IdentityKind::IbpFormula, p));
  return jobs;
}

MatrixRun run_matrix() {
  const auto t0 = Clock::now();
  MatrixRun m;
  const std::vector<std::vector<double>> groups{{1, 1, 1}, {1, 1, 2}, {1, 1, 1, 2}, {1, 1, 1, 2, 2}, {1, 1, 1, 1, 1}};
  const std::vector<TestFunction> fs{
      TestFunction::separable(make_bump(0.5, 2.0), AngularPart::constant(1.0) + AngularPart::coordinate_trace(0, 2, 0.5)),
      TestFunction::separable(make_bump(0.6, 1.8),
                              AngularPart::constant(1.0) + AngularPart::coordinate_trace(0, 1, {0.0, 1.0}))};
  for (const auto& w : groups) {
    const double Q = make_group(w).homogeneous_dimension();
    const auto jobs = identity_jobs(Q);
    for (const QuasiNorm& N : norms_for(w)) {
      for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        for (EvalPath path : {EvalPath::Separable, EvalPath::General}) {
          QuadratureSpec spec;
          if (path == EvalPath::General) spec.target_tol = 1e-4;
          const double bound = path == EvalPath::Separable ? 1e-6 : 1e-3;
          const auto ev = make_evaluator(fs[fi], N, spec, 3, path);
          auto record = [&](const IdentityReport& r, const std::string& what) {
            for (double rem : r.remainders) m.min_remainder = std::min(m.min_remainder, rem);
            if (!r.error.empty() || !r.pass) m.failed.push_back(what + ": " + (r.error.empty() ? "pass=false" : r.error));
          };
          auto label = [&](const IdentityReport& r) {
            return N.group().describe() + " " + N.describe() + " f" + std::to_string(fi) + " " + to_string(path) + " " + to_string(r.identity) +
                   " " + r.params_string();
          };
          for (const IdentityJob& job : jobs) {
            if (job.kind == IdentityKind::HardyLp && job.p != 2.0 && !fs[fi].is_real()) continue;
            const IdentityReport r = run_identity(*ev, job);
            ++m.identity_reports;
            double& worst = path == EvalPath::Separable ? m.worst_sep : m.worst_gen;
            worst = std::max(worst, r.rel_residual);
            const bool ok = r.pass && r.error.empty() && r.rel_residual < bound;
            if (!ok) {
              ++m.failures;
              m.failed.push_back(fmt("%s rel=%.3g", label(r).c_str(), r.rel_residual));
            }
            for (double rem : r.remainders) m.min_remainder = std::min(m.min_remainder, rem);
          }
          for (double p : {1.5, 2.0, 3.0}) {
            if (p >= Q) continue;
            const IdentityReport r = uncertainty_report(*ev, p);
            ++m.uncertainty;
            const double slack = r.terms.count("slack") ? r.terms.at("slack") : -INFINITY;
            m.min_slack = std::min(m.min_slack, slack);
            if (!r.pass || slack < 0.0) ++m.uncertainty_bad;
            record(r, label(r));
          }
          for (double p : {2.0, 3.0}) {
            const IdentityReport r = log_hardy_report(*ev, p, {0.5, 1.0, 2.0});
            ++m.loghardy;
            const bool ok = r.pass && r.inequality_checked && r.inequality_holds.value_or(false) &&
                            r.constant && std::abs(*r.constant - p / (p - 1)) < 1e-14;
            if (!ok) ++m.loghardy_bad;
            record(r, label(r));
          }
        }
      }
    }
  }
  m.seconds = since(t0);
  return m;
}

Verdict criterion1(const MatrixRun& m) {
  Verdict v;
  v.pass = m.failures == 0 && m.seconds < 180.0;
  v.detail = fmt("%zu reports, %zu failing, worst rel_residual separable %.2g general %.2g, %.0f s", m.identity_reports,
                 m.failures, m.worst_sep, m.worst_gen, m.seconds);
  for (std::size_t i = 0; i < std::min<std::size_t>(m.failed.size(), 5); ++i) v.detail += "\n    " + m.failed[i];
  return v;
}

Verdict criterion2(const MatrixRun& m) {
  return {m.min_remainder >= -1e-8, fmt("smallest remainder %.3g", m.min_remainder)};
}

// ---- sharp constants ----

Verdict criterion3() {
  const auto t0 = Clock::now();
  struct Case {
    std::vector<double> w;
    InequalityKind kind;
    InequalityParams params;
    double fraction;
  };
  const std::vector<Case> cases{{{1, 1, 2}, InequalityKind::Hardy, {2.0}, 0.98},
                                {{1, 1, 1, 2}, InequalityKind::Hardy, {2.0}, 0.98},
                                {{1, 1, 1, 2}, InequalityKind::Hardy, {3.0}, 0.98},
                                {{1, 1, 1, 2}, InequalityKind::Rellich, {}, 0.95},
                                {{1, 1, 2, 2}, InequalityKind::Rellich, {}, 0.95},
                                {{1, 1, 1, 2, 2}, InequalityKind::HigherOrder, {2.0, 0.0, 2}, 0.95}};
  Verdict v;
  std::string lines;
  double worst_excess = -INFINITY;
  for (const auto& c : cases) {
    const QuasiNorm N = QuasiNorm::anisotropic(make_group(c.w));
    const SharpnessCurve curve = sharpness_sweep(c.kind, N, c.params, {1e-1, 1e-2, 1e-3}, QuadratureSpec{});
    const double last = curve.points.back().quotient / curve.target;
    for (const auto& p : curve.points) worst_excess = std::max(worst_excess, p.quotient / curve.target - 1.0);
    const bool ok = last >= c.fraction && curve.below_target;
    v.pass = v.pass && ok;
    lines += fmt("\n    %s Q=%g %s: q/target at 1e-3 = %.4f (need %.2f)", to_string(c.kind).c_str(),
                 N.group().homogeneous_dimension(), curve.params_string().c_str(), last, c.fraction);
  }
  const bool target_ok = std::abs(target_constant(InequalityKind::HigherOrder, 7, {2.0, 0.0, 2}) - 4.0 / 15.0) < 1e-15;
  const double secs = since(t0);
  v.pass = v.pass && target_ok && worst_excess <= 1e-6 && secs < 120.0;
  v.detail = fmt("largest q/target - 1 = %.3g, HigherOrder(7,2,0) target 4/15 %s, %.0f s", worst_excess,
                 target_ok ? "ok" : "wrong", secs) +
             lines;
  return v;
}

// ---- even/odd gate ----

Verdict criterion4() {
  Verdict v;
  std::string detail;
  const TestFunction f = TestFunction::separable(make_bump(0.5, 2.0), AngularPart::constant(1.0));
  auto run = [&](const std::vector<double>& w, int k) {
    IdentityJob job = job_of(IdentityKind::HigherOrder, 2.0, 0.0, k);
    job.require_inequality = true;
    return run_identity(QuasiNorm::anisotropic(make_group(w)), f, job, QuadratureSpec{});
  };
  for (int k : {1, 2}) {
    const IdentityReport r = run({1, 1, 2, 2}, k);
    const bool ok = r.pass && r.inequality_holds.value_or(false);
    v.pass = v.pass && ok;
    detail += fmt("Q=6 k=%d %s; ", k, ok ? "accepted" : "REJECTED");
  }
  const IdentityReport r3 = run({1, 1, 2, 2}, 3);
  const bool rejected = !r3.pass && r3.error.find("degenerate constant") != std::string::npos;
  v.pass = v.pass && rejected;
  detail += fmt("Q=6 k=3 %s; ", rejected ? "rejected as degenerate" : "NOT rejected");
  for (int k = 1; k <= 4; ++k) {
    const IdentityReport r = run({1, 1, 1, 2, 2}, k);
    const bool ok = r.pass && r.inequality_holds.value_or(false);
    v.pass = v.pass && ok;
    detail += fmt("Q=7 k=%d %s%s", k, ok ? "accepted" : "REJECTED", k < 4 ? "; " : "");
  }
  v.detail = detail;
  return v;
}

// ---- measure ----

Verdict criterion5() {
  Verdict v;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.3, 0.8), ub(1.2, 2.5), uc(-1.0, 1.0);
  const std::vector<std::vector<double>> groups{{1, 1, 1}, {1, 1, 2}, {1, 2}};
  double worst_polar = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto& w = groups[t % groups.size()];
    const DilationGroup g = make_group(w);
    const QuasiNorm N = t % 2 == 0 ? QuasiNorm::anisotropic(g) : (w == std::vector<double>{1, 1, 1}
                                                                       ? QuasiNorm::euclidean(g)
                                                                       : QuasiNorm::koranyi(g));
    const double a = ua(rng), b = ub(rng), c0 = uc(rng), c1 = uc(rng);
    const RadialProfile prof = make_bump(a, b);
    auto u = [=](std::span<const double> y) { return std::complex<double>(1.0 + c0 * y[0] * y[0], c1 * y.back()); };
    QuadratureSpec spec;
    const auto polar = polar_integrate([&](double r) { return prof.value(r); }, a, b, u, N, spec);
    std::vector<double> y(w.size());
    auto f = [&](std::span<const double> x) -> std::complex<double> {
      const double r = N(x);
      if (r < a || r > b) return 0.0;
      sphere_project(N, x, y);
      return prof.value(r) * u(y);
    };
    const Estimate leb = integrate_lebesgue(f, SupportBox::ball(N, b, a), spec, N);
    worst_polar = std::max(worst_polar, std::abs(polar - leb.value) / std::abs(polar));
  }
  double worst_lambda = 0.0;
  for (const QuasiNorm& N : {QuasiNorm::anisotropic(make_group({1, 1, 2})), QuasiNorm::koranyi(make_group({1, 1, 2})),
                             QuasiNorm::euclidean(make_group({1, 1, 1}))}) {
    QuadratureSpec s2, s4;
    s2.annulus_lambda = 2.0;
    s4.annulus_lambda = 4.0;
    auto u = [](std::span<const double> y) { return 1.0 + y[0] * y[0] + 0.5 * y.back(); };
    const double x = sphere_integrate(u, N, s2), z = sphere_integrate(u, N, s4);
    worst_lambda = std::max(worst_lambda, std::abs(x - z) / std::abs(x));
  }
  const double area = sphere_integrate([](std::span<const double>) { return 1.0; },
                                       QuasiNorm::euclidean(make_group({1, 1, 1})), QuadratureSpec{});
  const double area_err = std::abs(area - 4.0 * std::numbers::pi);
  v.pass = worst_polar < 1e-3 && worst_lambda < 1e-3 && area_err < 1e-3;
  v.detail = fmt("polar vs Lebesgue worst rel %.2g, lambda 2 vs 4 worst rel %.2g, |area - 4pi| = %.2g", worst_polar,
                 worst_lambda, area_err);
  return v;
}

// ---- operators ----

double fitted_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Verdict criterion6() {
  Verdict v;
  const TestFunction f = TestFunction::separable(make_bump(0.5, 4.0), AngularPart::constant(1.0));
  const QuasiNorm N = QuasiNorm::anisotropic(make_group({1, 1, 2}));
  const Point x{1.2, -0.4, 1.5};
  double worst_order = 0.0;
  for (int k : {1, 2}) {
    const auto exact = radial_derivative(f, x, k, RadialOperatorMethod::analytic(), N);
    for (int order : {2, 4, 6}) {
      const double h0 = order == 2 ? 0.02 : order == 4 ? 0.04 : 0.08;
      std::vector<double> hs, errs;
      for (int i = 0; i < 4; ++i) {
        const double h = h0 / std::ldexp(1.0, i);
        hs.push_back(h);
        errs.push_back(
            std::abs(radial_derivative(f, x, k, RadialOperatorMethod::finite_difference(h, order), N) - exact));
      }
      worst_order = std::max(worst_order, std::abs(fitted_order(hs, errs) - order));
    }
  }

  const TestFunction off = make_offcenter_bump({0.9, 0.2, 0.5}, 0.4);
  const DilationGroup g = make_group({1, 1, 2});
  const QuasiNorm na = QuasiNorm::anisotropic(g), nk = QuasiNorm::koranyi(g, 7.0);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n01(0.0, 0.15);
  double worst_euler = 0.0;
  for (int t = 0; t < 30; ++t) {
    const Point y{0.9 + n01(rng), 0.2 + n01(rng), 0.5 + n01(rng)};
    const auto ea = euler_apply(off, y, na), ek = euler_apply(off, y, nk);
    worst_euler = std::max(worst_euler, std::abs(ea - ek) / std::max(1.0, std::abs(ea)));
  }

  const QuasiNorm K = QuasiNorm::koranyi(make_group({1, 1, 2}));
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst_homog = 0.0;
  for (double nu : {-2.0, -0.5, 1.0, 3.0}) {
    const TestFunction h = TestFunction::separable(make_power(nu), AngularPart::constant(1.0) +
                                                                       AngularPart::coordinate_trace(2, 1, 0.3));
    for (int t = 0; t < 20; ++t) {
      const Point y{u(rng), u(rng), u(rng) + 2.5};
      const auto e = euler_apply(h, y, K, RadialOperatorMethod::analytic());
      const auto val = nu * h.eval(y, K);
      worst_homog = std::max(worst_homog, std::abs(e - val) / std::abs(val));
    }
  }
  const TestFunction b = TestFunction::separable(make_bump(0.5, 2.0), AngularPart::constant(1.0));
  double bump_miss = INFINITY;
  for (double nu : {-1.0, 0.0, 1.0, 2.0}) {
    double miss = 0.0;
    for (double r : {0.7, 1.0, 1.4}) {
      const Point y = K.group().dilate(r, sphere_project(K, Point{0.3, 0.1, 0.2}));
      const auto e = euler_apply(b, y, K, RadialOperatorMethod::analytic());
      miss = std::max(miss, std::abs(e - nu * b.eval(y, K)) / std::abs(b.eval(y, K)));
    }
    bump_miss = std::min(bump_miss, miss);
  }
  v.pass = worst_order <= 0.2 && worst_euler <= 1e-10 && worst_homog <= 1e-10 && bump_miss > 0.1;
  v.detail = fmt("order deviation %.3f, Euler gauge dependence %.2g, homogeneous %.2g, bump miss %.3g", worst_order,
                 worst_euler, worst_homog, bump_miss);
  return v;
}

// ---- uncertainty and log-Hardy ----

Verdict criterion7(const MatrixRun& m) {
  Verdict v;
  const QuasiNorm N = QuasiNorm::euclidean(make_group({1, 1, 1}));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ua(0.2, 0.9), ub(1.1, 4.0);
  double min_ratio = INFINITY;
  for (int t = 0; t < 10; ++t) {
    const TestFunction f = TestFunction::separable(make_bump(ua(rng), ub(rng)), AngularPart::constant(1.0));
    const IdentityReport r = run_identity(N, f, job_of(IdentityKind::Uncertainty, 2.0), QuadratureSpec{});
    min_ratio = std::min(min_ratio, r.terms.at("product_ratio"));
  }
  v.pass = m.uncertainty_bad == 0 && min_ratio >= 0.25 && m.loghardy_bad == 0 && m.uncertainty > 0 && m.loghardy > 0;
  v.detail = fmt("uncertainty %zu/%zu ok (min slack %.3g), abelian product ratio min %.4f >= 0.25, log-Hardy %zu/%zu ok",
                 m.uncertainty - m.uncertainty_bad, m.uncertainty, m.min_slack, min_ratio, m.loghardy - m.loghardy_bad,
                 m.loghardy);
  return v;
}

// ---- determinism through the CLI ----

const char* kDeterminismConfig = R"({
  "group": {"weights": [1, 1, 1, 2]},
  "seed": 7,
  "identities": [
    {"id": "HardyL2"},
    {"id": "HardyLp", "p": 3},
    {"id": "Rellich"},
    {"id": "HigherOrder", "k": 2, "alpha": 0.5},
    {"id": "Uncertainty", "p": 2},
    {"id": "LogHardy", "p": 2, "R": [0.5, 1, 2]},
    {"id": "ComplexReduction", "p": 2.5, "z": [0.4, -1.1]},
    {"id": "HardyL2", "path": "general", "function": {"kind": "offcenter", "center": [0.8, 0.1, 0.2, 0.3], "radius": 0.4}}
  ],
  "sharpness": [
    {"inequality": "Hardy", "p": 2, "deltas": [0.1, 0.01], "optimize": {"family": "plateau"}}
  ]
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion8(const std::string& cli, const fs::path& workdir) {
  fs::remove_all(workdir);
  fs::create_directories(workdir);
  const fs::path config = workdir / "determinism.json";
  std::ofstream(config) << kDeterminismConfig;
  std::vector<std::string> csv;
  for (const char* run : {"run1", "run2"}) {
    const fs::path out = workdir / run;
    const std::string cmd = "\"" + cli + "\" all \"" + config.string() + "\" --out \"" + out.string() +
                            "\" --format csv --seed 7 > \"" + (workdir / (std::string(run) + ".log")).string() +
                            "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) return {false, fmt("CLI exited with status %d (see %s.log)", rc, run)};
    csv.push_back(slurp(out / "reports.csv"));
  }
  const bool same = !csv[0].empty() && csv[0] == csv[1];
  return {same, fmt("reports.csv %zu bytes, %s", csv[0].size(), same ? "identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string cli;
  std::string workdir = (fs::temp_directory_path() / "hardy_acceptance").string();
  app.add_option("--cli", cli, "path to the hardy executable")->required()->check(CLI::ExistingFile);
  app.add_option("--workdir", workdir, "scratch directory for CLI runs");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  auto report = [&](int n, const std::string& name, const std::function<Verdict()>& check) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("criterion %d %s: %s: %s\n", n, name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  };

  MatrixRun matrix;
  std::string matrix_error;
  try {
    matrix = run_matrix();
  } catch (const std::exception& e) {
    matrix_error = e.what();
  }
  auto needs_matrix = [&](auto fn) {
    return [&, fn]() -> Verdict {
      if (!matrix_error.empty()) return {false, "matrix run threw: " + matrix_error};
      return fn(matrix);
    };
  };

  report(1, "identity residuals", needs_matrix(criterion1));
  report(2, "remainder signs", needs_matrix(criterion2));
  report(3, "sharp constants", criterion3);
  report(4, "even/odd gate", criterion4);
  report(5, "measure consistency", criterion5);
  report(6, "operator fidelity", criterion6);
  report(7, "uncertainty and log-Hardy", needs_matrix(criterion7));
  report(8, "determinism", [&] { return criterion8(cli, workdir); });
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
