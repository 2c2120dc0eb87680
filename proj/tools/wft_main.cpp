// wft: run scenario files, the random suite, or an h sweep.
//
// Exit status: 0 when every asserted check passed, 1 when one failed, 2 on a
// bad config or degenerate input.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wft/coupling.hpp"
#include "wft/front_tracking.hpp"
#include "wft/functional.hpp"
#include "wft/scenario.hpp"

namespace {

int report(const wft::Scenario& sc, const wft::ScenarioOutcome& outcome) {
  for (const auto& c : outcome.checks) {
    std::cout << c.status << "  " << c.check;
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << '\n';
  }
  std::cout << sc.name << ": " << (outcome.passed ? "PASS" : "FAIL") << ", "
            << outcome.files.size() << " file(s) in " << sc.output_dir << '\n';
  return outcome.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-front-tracking stability checks"};
  app.require_subcommand(1);

  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<double> tolerance;
  // Shared flags go on every subcommand so they may follow it.
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for random data");
    sub->add_option("--mode", mode, "arithmetic")->check(CLI::IsMember({"float", "rational"}));
    sub->add_option("--tolerance", tolerance, "relative tolerance of the float identities")
        ->check(CLI::NonNegativeNumber);
  };

  std::string run_file;
  auto* run = app.add_subcommand("run", "run the checks of one scenario file");
  run->add_option("file", run_file, "scenario JSON")->required()->check(CLI::ExistingFile);

  std::string sweep_file;
  auto* sweep = app.add_subcommand("sweep", "limit study over the scenario's h_list");
  sweep->add_option("file", sweep_file, "scenario JSON")->required()->check(CLI::ExistingFile);

  wft::SuiteOptions suite_opts;
  auto* suite = app.add_subcommand("suite", "random Burgers pairs");
  suite->add_option("--n", suite_opts.n, "number of pairs")->check(CLI::PositiveNumber);
  suite->add_option("--m", suite_opts.m, "weight parameter");
  suite->add_option("--threads", suite_opts.threads, "worker threads, 0 for all cores");

  for (auto* sub : {run, sweep, suite}) common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (tolerance) wft::set_relative_tolerance(*tolerance);
    if (suite->parsed()) {
      if (seed) suite_opts.seed = *seed;
      if (mode) suite_opts.mode = *mode;
      const auto summary = wft::run_random_suite(suite_opts);
      const auto text = summary.to_json(suite_opts).dump(2) + "\n";
      if (out_dir) {
        wft::write_file_atomic(std::filesystem::path(*out_dir) / "suite_summary.json", text);
      }
      std::cout << "suite: " << summary.passed << '/' << summary.n << " passed\n";
      return summary.failed == 0 ? 0 : 1;
    }
    const bool is_run = run->parsed();
    auto sc = wft::load_scenario(is_run ? run_file : sweep_file);
    wft::apply_overrides(sc, {out_dir, mode, seed});
    const auto outcome = is_run ? wft::run_scenario(sc) : wft::run_sweep(sc);
    return report(sc, outcome);
  } catch (const wft::ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return 2;
  } catch (const wft::DegenerateInput& err) {
    std::cerr << "degenerate input: " << err.what() << '\n';
    return 2;
  } catch (const wft::FrontTrackingError& err) {
    std::cerr << "front tracking failed: " << err.what()
              << "\nhint: try --mode rational, or perturb the data\n";
    return 2;
  }
}
