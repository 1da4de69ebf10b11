#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hardy/config.hpp"
#include "hardy/errors.hpp"
#include "hardy/suite.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

void add_run_options(CLI::App* sub, Options& o) {
  sub->add_option("config", o.config, "run file (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--format", o.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  sub->add_option("--workers", o.workers, "concurrent jobs")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "seed for every quasi-random rule (overrides the file)");
}

void print_summary(const hardy::SuiteResult& r) {
  for (const auto& o : r.identities) {
    const auto& rep = o.report;
    std::printf("%s  %-12s %-28s rel=%.3e  %.2fs%s%s\n", rep.pass ? "PASS" : "FAIL",
                hardy::to_string(rep.identity).c_str(), rep.params_string().c_str(), rep.rel_residual, o.seconds,
                rep.error.empty() ? "" : "  error: ", rep.error.c_str());
  }
  for (const auto& o : r.sharpness) {
    const auto& c = o.curve;
    std::printf("%s  %-12s %-28s best=%.6g target=%.6g  %.2fs%s%s\n", o.pass ? "PASS" : "FAIL",
                hardy::to_string(c.inequality).c_str(), c.params_string().c_str(), c.best_quotient, c.target,
                o.seconds, o.error.empty() ? "" : "  error: ", o.error.c_str());
  }
  std::printf("overall: %s (%zu identity, %zu sharpness)\n", r.pass ? "PASS" : "FAIL", r.identities.size(),
              r.sharpness.size());
}

int run(const Options& o, hardy::RunMode mode) {
  hardy::RunConfig cfg;
  try {
    cfg = hardy::load_config(o.config);
  } catch (const hardy::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const hardy::IoError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  if (o.seed) hardy::apply_seed(cfg, *o.seed);
  if (o.workers) cfg.workers = *o.workers;
  if (o.out) cfg.output_dir = *o.out;
  if (o.format) cfg.format = hardy::output_format_from_string(*o.format);

  const hardy::SuiteResult result = hardy::run_suite(cfg, mode);
  print_summary(result);
  try {
    for (const auto& path : hardy::emit(result, cfg.output_dir, cfg.format, std::cout))
      std::printf("wrote %s\n", path.c_str());
  } catch (const hardy::IoError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-type identities and sharp constants on homogeneous groups"};
  app.require_subcommand(1);
  Options opts;
  auto* verify = app.add_subcommand("verify", "run the identity jobs");
  auto* sharp = app.add_subcommand("sharpness", "run the sharpness sweeps");
  auto* all = app.add_subcommand("all", "run every job");
  for (auto* sub : {verify, sharp, all}) add_run_options(sub, opts);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const hardy::RunMode mode = verify->parsed() ? hardy::RunMode::Verify
                              : sharp->parsed() ? hardy::RunMode::Sharpness
                                                : hardy::RunMode::All;
  try {
    return run(opts, mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
