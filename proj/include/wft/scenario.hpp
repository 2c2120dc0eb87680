#ifndef WFT_SCENARIO_HPP_
#define WFT_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace wft {

// A config value is wrong; `path` names it, e.g. "h_list[1]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Scalars are kept as text and parsed once the arithmetic mode is known.
struct FluxSpec {
  std::string name = "burgers";
  std::optional<std::pair<std::string, std::string>> working_interval;
};

struct DataSpec {
  enum class Kind { kLiteral, kRandom, kSampled };
  Kind kind = Kind::kLiteral;
  // kLiteral
  std::vector<std::string> breakpoints;
  std::vector<std::string> values;
  // kRandom
  int n_cells = 8;
  std::pair<double, double> support{-2.0, 2.0};
  std::pair<double, double> states{-2.0, 2.0};
  std::optional<std::uint64_t> seed;
  // kSampled: "ramp", "sine" or "bump" on `support`, zero outside. With
  // `grid_offset` s the states are rounded to (k + s) h.
  std::string shape;
  double amplitude = 1.0;
  std::optional<int> sampled_cells;  // default: one cell per h
  std::optional<std::string> grid_offset;
};

struct Scenario {
  std::string name = "scenario";
  FluxSpec flux;
  DataSpec data_i;
  DataSpec data_ii;
  std::vector<std::string> h_list;  // decreasing; single-h checks use the first
  std::string m = "1";
  std::string s = "0";
  std::string t = "1";
  std::vector<std::string> checks;
  std::string output_dir = "out";
  std::string mode = "float";
  std::uint64_t seed = 1;
  std::optional<std::pair<std::string, std::string>> funnel;  // max_principle
  std::vector<std::string> anchors;                          // characteristics
  std::optional<std::pair<std::string, std::string>> oleinik_window;
};

const std::vector<std::string>& known_checks();

Scenario parse_scenario(const nlohmann::json& config);
Scenario load_scenario(const std::filesystem::path& file);

struct RunOverrides {
  std::optional<std::string> output_dir;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(Scenario& scenario, const RunOverrides& overrides);

struct CheckOutcome {
  std::string check;
  std::string status;  // "pass", "fail" or "skipped"
  std::string detail;
  nlohmann::json report;
};

struct ScenarioOutcome {
  bool passed = true;
  std::vector<CheckOutcome> checks;
  std::vector<std::filesystem::path> files;
  nlohmann::json summary() const;
};

// Runs the requested checks and writes one JSON report per check, a wave
// diagram per run, the classified jumps and any characteristic paths into
// scenario.output_dir. Throws ConfigError or DegenerateInput.
ScenarioOutcome run_scenario(const Scenario& scenario);

// Only the limit study, over scenario.h_list.
ScenarioOutcome run_sweep(const Scenario& scenario);

struct SuiteOptions {
  int n = 20;
  std::uint64_t seed = 1;
  std::string mode = "float";
  std::string m = "1";
  int threads = 0;  // 0: hardware concurrency
};

struct SuiteSummary {
  int n = 0;
  int passed = 0;
  int failed = 0;
  nlohmann::json scenarios = nlohmann::json::array();
  nlohmann::json to_json(const SuiteOptions& options) const;
};

// n random Burgers pairs (at most 8 fronts, states in [-2, 2]) checked with
// l1_identity, weighted_identity, oleinik and theorem31. Same seed, same
// summary, whatever the thread count.
SuiteSummary run_random_suite(const SuiteOptions& options);

// Writes via a temporary file in the same directory and a rename.
void write_file_atomic(const std::filesystem::path& file, const std::string& content);

}  // namespace wft

#endif  // WFT_SCENARIO_HPP_
