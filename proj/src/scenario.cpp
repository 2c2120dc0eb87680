#include "wft/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "wft/characteristics.hpp"
#include "wft/functional.hpp"
#include "wft/random_data.hpp"

namespace wft {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& known_checks() {
  // Also the order in which checks run.
  static const std::vector<std::string> checks{
      "l1_identity", "weighted_identity", "corollary_bound", "theorem31",      "limit_study",
      "theorem51",   "oleinik",           "max_principle",   "characteristics"};
  return checks;
}

void write_file_atomic(const fs::path& file, const std::string& content) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, file);
}

// ---------------------------------------------------------------- parsing

namespace {

std::string scalar_text(const json& j, const std::string& path) {
  if (j.is_number()) return j.dump();
  if (!j.is_string()) throw ConfigError(path, "expected a number or a string like \"1/4\"");
  const auto text = j.get<std::string>();
  try {
    (void)ScalarTraits<Rational>::parse(text);
  } catch (const std::exception&) {
    try {
      std::size_t used = 0;
      (void)std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError(path, "cannot read '" + text + "' as a number");
    }
  }
  return text;
}

double as_double(const std::string& text, const std::string& path) {
  try {
    return ScalarTraits<Rational>::parse(text).convert_to<double>();
  } catch (const std::exception&) {
  }
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw ConfigError(path, "cannot read '" + text + "' as a number");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + key, "missing");
  return obj.at(key);
}

std::pair<std::string, std::string> text_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [lo, hi]");
  auto lo = scalar_text(j[0], path + "[0]");
  auto hi = scalar_text(j[1], path + "[1]");
  if (!(as_double(lo, path) < as_double(hi, path))) throw ConfigError(path, "need lo < hi");
  return {lo, hi};
}

std::pair<double, double> double_pair(const json& j, const std::string& path) {
  auto [lo, hi] = text_pair(j, path);
  return {as_double(lo, path), as_double(hi, path)};
}

void reject_unknown(const json& obj, const std::vector<std::string>& keys,
                    const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw ConfigError(path + it.key(), "unknown key");
    }
  }
}

DataSpec parse_data(const json& j, const std::string& name) {
  const std::string path = name + ".";
  if (!j.is_object()) throw ConfigError(name, "expected an object");
  DataSpec ds;
  if (j.contains("constant")) {
    reject_unknown(j, {"constant"}, path);
    ds.kind = DataSpec::Kind::kLiteral;
    ds.values = {scalar_text(j.at("constant"), path + "constant")};
    return ds;
  }
  if (j.contains("breakpoints") || j.contains("values")) {
    reject_unknown(j, {"breakpoints", "values"}, path);
    const auto& br = require(j, "breakpoints", path);
    const auto& vals = require(j, "values", path);
    if (!br.is_array()) throw ConfigError(path + "breakpoints", "expected an array");
    if (!vals.is_array()) throw ConfigError(path + "values", "expected an array");
    double last = -INFINITY;
    for (std::size_t i = 0; i < br.size(); ++i) {
      const std::string p = path + "breakpoints[" + std::to_string(i) + "]";
      ds.breakpoints.push_back(scalar_text(br[i], p));
      const double x = as_double(ds.breakpoints.back(), p);
      if (!(last < x)) throw ConfigError(p, "breakpoints must be strictly increasing");
      last = x;
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
      ds.values.push_back(scalar_text(vals[i], path + "values[" + std::to_string(i) + "]"));
    }
    if (ds.values.size() != ds.breakpoints.size() + 1) {
      throw ConfigError(path + "values", "need exactly one more value than breakpoints");
    }
    return ds;
  }
  if (!j.contains("generator")) {
    throw ConfigError(name, "expected 'constant', 'breakpoints'/'values' or 'generator'");
  }
  const auto gen = j.at("generator");
  if (!gen.is_string()) throw ConfigError(path + "generator", "expected a string");
  const auto kind = gen.get<std::string>();
  if (kind == "random") {
    reject_unknown(j, {"generator", "n_cells", "support", "states", "seed"}, path);
    ds.kind = DataSpec::Kind::kRandom;
    if (j.contains("n_cells")) {
      if (!j["n_cells"].is_number_integer() || j["n_cells"].get<int>() < 1) {
        throw ConfigError(path + "n_cells", "expected a positive integer");
      }
      ds.n_cells = j["n_cells"].get<int>();
    }
    if (j.contains("support")) ds.support = double_pair(j["support"], path + "support");
    if (j.contains("states")) ds.states = double_pair(j["states"], path + "states");
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) {
        throw ConfigError(path + "seed", "expected a nonnegative integer");
      }
      ds.seed = j["seed"].get<std::uint64_t>();
    }
    return ds;
  }
  if (kind == "sampled") {
    reject_unknown(j, {"generator", "shape", "support", "amplitude", "n_cells", "grid_offset"},
                   path);
    ds.kind = DataSpec::Kind::kSampled;
    const auto& shape = require(j, "shape", path);
    if (!shape.is_string()) throw ConfigError(path + "shape", "expected a string");
    ds.shape = shape.get<std::string>();
    if (ds.shape != "ramp" && ds.shape != "sine" && ds.shape != "bump") {
      throw ConfigError(path + "shape", "expected ramp, sine or bump");
    }
    ds.support = double_pair(require(j, "support", path), path + "support");
    if (j.contains("amplitude")) {
      ds.amplitude = as_double(scalar_text(j["amplitude"], path + "amplitude"), path);
    }
    if (j.contains("n_cells")) {
      if (!j["n_cells"].is_number_integer() || j["n_cells"].get<int>() < 1) {
        throw ConfigError(path + "n_cells", "expected a positive integer");
      }
      ds.sampled_cells = j["n_cells"].get<int>();
    }
    if (j.contains("grid_offset")) {
      ds.grid_offset = scalar_text(j["grid_offset"], path + "grid_offset");
      const double s = as_double(*ds.grid_offset, path + "grid_offset");
      if (s < 0.0 || !(s < 1.0)) throw ConfigError(path + "grid_offset", "expected 0 <= s < 1");
    }
    return ds;
  }
  throw ConfigError(path + "generator", "unknown generator '" + kind + "'");
}

}  // namespace

Scenario parse_scenario(const json& config) {
  if (!config.is_object()) throw ConfigError("<root>", "expected an object");
  reject_unknown(config,
                 {"name", "flux", "data_i", "data_ii", "h_list", "h", "m", "s", "t", "checks",
                  "output_dir", "mode", "seed", "funnel", "anchors", "oleinik_window"},
                 "");
  Scenario sc;
  if (config.contains("name")) {
    if (!config["name"].is_string()) throw ConfigError("name", "expected a string");
    sc.name = config["name"].get<std::string>();
  }
  if (config.contains("flux")) {
    const auto& f = config["flux"];
    if (f.is_string()) {
      sc.flux.name = f.get<std::string>();
    } else if (f.is_object()) {
      reject_unknown(f, {"name", "params", "working_interval"}, "flux.");
      const auto& name = require(f, "name", "flux.");
      if (!name.is_string()) throw ConfigError("flux.name", "expected a string");
      sc.flux.name = name.get<std::string>();
      if (f.contains("params") && !(f["params"].is_array() && f["params"].empty())) {
        throw ConfigError("flux.params", "the built-in fluxes take no parameters");
      }
      if (f.contains("working_interval")) {
        sc.flux.working_interval = text_pair(f["working_interval"], "flux.working_interval");
      }
    } else {
      throw ConfigError("flux", "expected a name or an object");
    }
  }
  if (sc.flux.name != "burgers" && sc.flux.name != "quartic" && sc.flux.name != "exp") {
    throw ConfigError("flux.name", "unknown flux '" + sc.flux.name + "'");
  }
  sc.data_i = parse_data(require(config, "data_i", ""), "data_i");
  sc.data_ii = parse_data(require(config, "data_ii", ""), "data_ii");

  if (config.contains("h") && config.contains("h_list")) {
    throw ConfigError("h", "give either h or h_list");
  }
  if (config.contains("h")) {
    sc.h_list = {scalar_text(config["h"], "h")};
    if (!(as_double(sc.h_list[0], "h") > 0.0)) throw ConfigError("h", "must be > 0");
  } else {
    const auto& hl = require(config, "h_list", "");
    if (!hl.is_array() || hl.empty()) throw ConfigError("h_list", "expected a nonempty array");
    double last = INFINITY;
    for (std::size_t i = 0; i < hl.size(); ++i) {
      const std::string p = "h_list[" + std::to_string(i) + "]";
      sc.h_list.push_back(scalar_text(hl[i], p));
      const double h = as_double(sc.h_list.back(), p);
      if (!(h > 0.0)) throw ConfigError(p, "h must be > 0");
      if (!(h < last)) throw ConfigError(p, "h_list must be strictly decreasing");
      last = h;
    }
  }
  if (config.contains("m")) sc.m = scalar_text(config["m"], "m");
  if (as_double(sc.m, "m") < 0.0) throw ConfigError("m", "must be >= 0");
  if (config.contains("s")) sc.s = scalar_text(config["s"], "s");
  if (config.contains("t")) sc.t = scalar_text(config["t"], "t");
  if (as_double(sc.s, "s") < 0.0) throw ConfigError("s", "must be >= 0");
  if (!(as_double(sc.s, "s") < as_double(sc.t, "t"))) throw ConfigError("t", "must be > s");

  const auto& checks = require(config, "checks", "");
  if (!checks.is_array() || checks.empty()) {
    throw ConfigError("checks", "expected a nonempty array");
  }
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string p = "checks[" + std::to_string(i) + "]";
    if (!checks[i].is_string()) throw ConfigError(p, "expected a string");
    const auto name = checks[i].get<std::string>();
    if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end()) {
      throw ConfigError(p, "unknown check '" + name + "'");
    }
    if (std::find(sc.checks.begin(), sc.checks.end(), name) == sc.checks.end()) {
      sc.checks.push_back(name);
    }
  }
  if (config.contains("output_dir")) {
    if (!config["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
    sc.output_dir = config["output_dir"].get<std::string>();
  }
  if (config.contains("mode")) {
    if (!config["mode"].is_string()) throw ConfigError("mode", "expected a string");
    sc.mode = config["mode"].get<std::string>();
  }
  if (sc.mode != "float" && sc.mode != "rational") {
    throw ConfigError("mode", "expected float or rational");
  }
  if (config.contains("seed")) {
    if (!config["seed"].is_number_unsigned()) {
      throw ConfigError("seed", "expected a nonnegative integer");
    }
    sc.seed = config["seed"].get<std::uint64_t>();
  }
  if (config.contains("funnel")) sc.funnel = text_pair(config["funnel"], "funnel");
  if (std::find(sc.checks.begin(), sc.checks.end(), "max_principle") != sc.checks.end() &&
      !sc.funnel) {
    throw ConfigError("funnel", "required by max_principle");
  }
  if (config.contains("anchors")) {
    const auto& a = config["anchors"];
    if (!a.is_array()) throw ConfigError("anchors", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      sc.anchors.push_back(scalar_text(a[i], "anchors[" + std::to_string(i) + "]"));
    }
  }
  if (config.contains("oleinik_window")) {
    sc.oleinik_window = text_pair(config["oleinik_window"], "oleinik_window");
    if (!(as_double(sc.oleinik_window->first, "oleinik_window") > 0.0)) {
      throw ConfigError("oleinik_window[0]", "the window must exclude t = 0");
    }
  }
  return sc;
}

Scenario load_scenario(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), "cannot open");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(file.string(), std::string("not valid JSON: ") + err.what());
  }
  return parse_scenario(config);
}

void apply_overrides(Scenario& scenario, const RunOverrides& overrides) {
  if (overrides.output_dir) scenario.output_dir = *overrides.output_dir;
  if (overrides.seed) scenario.seed = *overrides.seed;
  if (overrides.mode) {
    if (*overrides.mode != "float" && *overrides.mode != "rational") {
      throw ConfigError("--mode", "expected float or rational");
    }
    scenario.mode = *overrides.mode;
  }
}

json ScenarioOutcome::summary() const {
  json out;
  out["passed"] = passed;
  out["checks"] = json::array();
  for (const auto& c : checks) {
    out["checks"].push_back({{"check", c.check}, {"status", c.status}, {"detail", c.detail}});
  }
  out["files"] = json::array();
  for (const auto& f : files) out["files"].push_back(f.filename().string());
  return out;
}

// ------------------------------------------------------------ reporting

namespace {

template <typename S>
json num(const S& v) {
  if constexpr (ScalarTraits<S>::kExact) {
    return ScalarTraits<S>::to_string(v);
  } else {
    return v;
  }
}

template <typename S>
json to_json(const FunctionalReport<S>& r) {
  json j{{"identity", r.identity},
         {"s", num(r.s)},
         {"t", num(r.t)},
         {"m", num(r.m)},
         {"norm_start", num(r.norm_start)},
         {"norm_end", num(r.norm_end)},
         {"l1_start", num(r.l1_start)},
         {"l1_end", num(r.l1_end)},
         {"lax_term", num(r.lax_term)},
         {"slow_fast_term", num(r.slow_fast_term)},
         {"rs_term", num(r.rs_term)},
         {"event_drop", num(r.event_drop)},
         {"residual", num(r.residual)},
         {"max_interval_residual", num(r.max_interval_residual)},
         {"jumps_seen", r.jumps_seen},
         {"symmetry_failures", r.symmetry_failures},
         {"sign_lemma_failures", r.sign_lemma_failures},
         {"closed_form_checks", r.closed_form_checks},
         {"closed_form_failures", r.closed_form_failures},
         {"event_increase_failures", r.event_increase_failures},
         {"ok", r.ok},
         {"first_violation", r.first_violation}};
  j["intervals"] = json::array();
  for (const auto& iv : r.intervals) {
    j["intervals"].push_back({{"t0", num(iv.t0)},
                              {"t1", num(iv.t1)},
                              {"norm_start", num(iv.norm_start)},
                              {"norm_end", num(iv.norm_end)},
                              {"lax_term", num(iv.lax_term)},
                              {"slow_fast_term", num(iv.slow_fast_term)},
                              {"rs_term", num(iv.rs_term)},
                              {"residual", num(iv.residual)}});
  }
  return j;
}

template <typename S>
json to_json(const BoundReport<S>& r) {
  return {{"lhs", num(r.lhs)},
          {"rhs", num(r.rhs)},
          {"slack", num(r.slack)},
          {"rs_contribution", num(r.rs_contribution)},
          {"rs_bound", num(r.rs_bound)},
          {"ratio", r.ratio},
          {"holds", r.holds},
          {"rs_within_bound", r.rs_within_bound},
          {"detail", r.detail}};
}

template <typename S>
json to_json(const CorollaryReport<S>& r) {
  return {{"weighted", to_json(r.weighted)},
          {"plain", to_json(r.plain)},
          {"sup_rs_b", num(r.sup_rs_b)},
          {"sup_rs_a_jump", num(r.sup_rs_a_jump)},
          {"a_jump_bound", num(r.a_jump_bound)},
          {"integrated_tv_psi", num(r.integrated_tv_psi)},
          {"ok", r.ok}};
}

template <typename S>
json to_json(const Theorem51Report<S>& r) {
  return {{"norm_start", num(r.norm_start)},
          {"norm_end", num(r.norm_end)},
          {"lax_term", num(r.lax_term)},
          {"product_i", num(r.product_i)},
          {"product_ii", num(r.product_ii)},
          {"rs_defect", num(r.rs_defect)},
          {"lhs", num(r.lhs)},
          {"rhs", num(r.rhs)},
          {"slack", num(r.slack)},
          {"holds", r.holds},
          {"first_violation", r.first_violation}};
}

template <typename S>
json to_json(const LimitStudy<S>& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"h", num(row.h)},
                    {"weighted_start", num(row.weighted_start)},
                    {"weighted_end", num(row.weighted_end)},
                    {"lax_term", num(row.lax_term)},
                    {"slow_fast_term", num(row.slow_fast_term)},
                    {"rs_term", num(row.rs_term)},
                    {"l1_rs_term", num(row.l1_rs_term)},
                    {"event_drop", num(row.event_drop)},
                    {"balance_ok", row.balance_ok}});
  }
  return {{"rows", rows},
          {"rs_decrease_ok", r.rs_decrease_ok},
          {"balance_ok", r.balance_ok},
          {"ok", r.ok},
          {"detail", r.detail}};
}

template <typename S>
json to_json(const OleinikReport<S>& r) {
  json j{{"jumps_checked", r.jumps_checked},
         {"violations", r.violations},
         {"max_increase", num(r.max_increase)},
         {"first_violation", r.first_violation},
         {"within_allowance", r.within_allowance()}};
  if (r.allowance) j["allowance"] = num(*r.allowance);
  if (r.c_i) j["c_i"] = *r.c_i;
  if (r.c_ii) j["c_ii"] = *r.c_ii;
  if (r.e) j["e"] = *r.e;
  return j;
}

template <typename S>
json to_json(const NormRate<S>& r) {
  return {{"direct", num(r.direct)},
          {"lax", num(r.lax)},
          {"slow_fast", num(r.slow_fast)},
          {"rs", num(r.rs)},
          {"from_classes", num(r.from_classes())}};
}

template <typename S>
S parse_as(const std::string& text, const std::string& path) {
  try {
    if constexpr (ScalarTraits<S>::kExact) {
      return ScalarTraits<S>::parse(text);
    } else {
      return as_double(text, path);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(path, "cannot read '" + text + "' in " + ScalarTraits<S>::kName + " mode");
  }
}

template <typename S>
S from_double_checked(double v) {
  return ScalarTraits<S>::from_double(v);
}

template <typename S>
Profile<S> build_data(const DataSpec& ds, const std::string& name, const S& h,
                      std::uint64_t seed) {
  const std::string path = name + ".";
  switch (ds.kind) {
    case DataSpec::Kind::kLiteral: {
      std::vector<S> br;
      std::vector<S> vals;
      for (std::size_t i = 0; i < ds.breakpoints.size(); ++i) {
        br.push_back(parse_as<S>(ds.breakpoints[i], path + "breakpoints[" + std::to_string(i) + "]"));
      }
      for (std::size_t i = 0; i < ds.values.size(); ++i) {
        vals.push_back(parse_as<S>(ds.values[i], path + "values[" + std::to_string(i) + "]"));
      }
      return Profile<S>(std::move(br), std::move(vals));
    }
    case DataSpec::Kind::kRandom: {
      RandomProfileOptions opts;
      opts.max_jumps = ds.n_cells;
      opts.x_lo = ds.support.first;
      opts.x_hi = ds.support.second;
      opts.state_lo = ds.states.first;
      opts.state_hi = ds.states.second;
      std::mt19937_64 gen(ds.seed.value_or(seed));
      return random_profile<S>(gen, opts);
    }
    case DataSpec::Kind::kSampled: {
      const double lo = ds.support.first;
      const double hi = ds.support.second;
      const double hd = to_double(h);
      const int n = ds.sampled_cells.value_or(std::max(1, static_cast<int>(std::lround((hi - lo) / hd))));
      std::optional<S> offset;
      if (ds.grid_offset) offset = parse_as<S>(*ds.grid_offset, path + "grid_offset");
      std::vector<S> br;
      std::vector<S> vals{S(0)};
      const S slo = from_double_checked<S>(lo);
      const S width = from_double_checked<S>(hi) - slo;
      for (int i = 0; i <= n; ++i) br.push_back(slo + width * S(i) / S(n));
      const double pi = std::acos(-1.0);
      for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) / n;  // cell midpoint in [0, 1]
        double u = 0.0;
        if (ds.shape == "ramp") u = ds.amplitude * r;
        if (ds.shape == "sine") u = ds.amplitude * std::sin(2 * pi * r);
        if (ds.shape == "bump") u = ds.amplitude * 4 * r * (1 - r);
        if (offset) {
          const double k = std::round(u / hd - to_double(*offset));
          vals.push_back((from_double_checked<S>(k) + *offset) * h);
        } else {
          vals.push_back(from_double_checked<S>(u));
        }
      }
      vals.push_back(S(0));
      return Profile<S>(std::move(br), std::move(vals));
    }
  }
  throw std::logic_error("unreachable");
}

template <typename S>
struct Context {
  const Scenario& sc;
  FluxModel<S> flux;
  std::vector<S> h_list;
  S m;
  S s;
  S t;
  fs::path out;

  std::pair<Profile<S>, Profile<S>> data(const S& h) const {
    return {build_data<S>(sc.data_i, "data_i", h, sc.seed),
            build_data<S>(sc.data_ii, "data_ii", h, sc.seed + 1)};
  }
};

template <typename S>
Context<S> make_context(const Scenario& sc) {
  std::vector<double> params;
  if (sc.flux.working_interval) {
    params = {as_double(sc.flux.working_interval->first, "flux.working_interval[0]"),
              as_double(sc.flux.working_interval->second, "flux.working_interval[1]")};
  }
  FluxModel<S> flux = [&] {
    try {
      return make_flux<S>(sc.flux.name, params);
    } catch (const std::invalid_argument& err) {
      throw ConfigError("flux", err.what());
    }
  }();
  std::vector<S> hs;
  for (std::size_t i = 0; i < sc.h_list.size(); ++i) {
    hs.push_back(parse_as<S>(sc.h_list[i], "h_list[" + std::to_string(i) + "]"));
  }
  return Context<S>{sc,
                    std::move(flux),
                    std::move(hs),
                    parse_as<S>(sc.m, "m"),
                    parse_as<S>(sc.s, "s"),
                    parse_as<S>(sc.t, "t"),
                    fs::path(sc.output_dir)};
}

template <typename S>
std::string wave_csv(const FrontTrackingRun<S>& run) {
  std::ostringstream out;
  out << "front_id,kind,t_start,x_start,t_end,x_end,left_state,right_state,speed\n";
  for (const auto& f : run.fronts()) {
    const S t_end = f.death_time ? *f.death_time : run.horizon();
    out << f.id << ',' << to_string(f.kind) << ',' << ScalarTraits<S>::to_string(f.birth_time)
        << ',' << ScalarTraits<S>::to_string(f.origin_x) << ','
        << ScalarTraits<S>::to_string(t_end) << ','
        << ScalarTraits<S>::to_string(f.position(t_end)) << ','
        << ScalarTraits<S>::to_string(f.left_state) << ','
        << ScalarTraits<S>::to_string(f.right_state) << ','
        << ScalarTraits<S>::to_string(f.speed) << '\n';
  }
  return out.str();
}

template <typename S>
bool psi_compact(const CoefficientField<S>& field, const S& s, const S& t) {
  // Fronts may start together, so look inside the first slab.
  const auto first = field.slabs(s, t).front();
  const auto snap = field.snapshot(S((first.first + first.second) / 2));
  return snap.kappa(0) == S(0) && snap.kappa(snap.piece_count() - 1) == S(0);
}

template <typename S>
void emit(ScenarioOutcome& outcome, const fs::path& file, const std::string& content) {
  write_file_atomic(file, content);
  outcome.files.push_back(file);
}

template <typename S>
CheckOutcome identity_check(const Context<S>& ctx, const CoefficientField<S>& field,
                            bool weighted) {
  CheckOutcome c;
  c.check = weighted ? "weighted_identity" : "l1_identity";
  json rates = json::array();
  bool rates_ok = true;
  for (const auto& [t0, t1] : field.slabs(ctx.s, ctx.t)) {
    const auto snap = field.snapshot(S((t0 + t1) / 2));
    const auto rate = weighted ? norm_rate(snap, std::optional<S>(ctx.m)) : norm_rate(snap);
    const S scale = abs_value(rate.direct) + rate.lax + rate.slow_fast + rate.rs;
    const bool ok = !(identity_tolerance(scale) < abs_value(S(rate.direct - rate.from_classes())));
    rates_ok = rates_ok && ok;
    json r = to_json(rate);
    r["t0"] = num(t0);
    r["t1"] = num(t1);
    rates.push_back(std::move(r));
  }
  c.report["rates"] = rates;
  bool ok = rates_ok;
  if (psi_compact(field, ctx.s, ctx.t)) {
    const auto report = weighted ? weighted_identity_report(field, ctx.m, ctx.s, ctx.t)
                                 : l1_identity_report(field, ctx.s, ctx.t);
    c.report["integrated"] = to_json(report);
    ok = ok && report.ok;
    c.detail = report.first_violation;
  } else {
    c.detail = "psi is not compactly supported; only the rates were checked";
  }
  if (!rates_ok && c.detail.empty()) c.detail = "rate identity fails on some interval";
  c.status = ok ? "pass" : "fail";
  return c;
}

template <typename S>
CheckOutcome needs_compact(const std::string& name) {
  CheckOutcome c;
  c.check = name;
  c.status = "skipped";
  c.detail = "psi is not compactly supported";
  return c;
}

template <typename S>
std::vector<S> default_anchors(const Context<S>& ctx) {
  auto [a, b] = ctx.data(ctx.h_list.front());
  std::vector<S> all = a.breakpoints();
  all.insert(all.end(), b.breakpoints().begin(), b.breakpoints().end());
  if (all.empty()) return {S(0)};
  const S lo = *std::min_element(all.begin(), all.end());
  const S hi = *std::max_element(all.begin(), all.end());
  std::vector<S> out;
  // Odd fractions keep the anchors off grid-valued breakpoints.
  for (int k = 0; k < 5; ++k) out.push_back(lo - S(1) / S(7) + (hi - lo + S(2) / S(7)) * S(2 * k + 1) / S(10));
  return out;
}

template <typename S>
CheckOutcome characteristics_check(const Context<S>& ctx, const PiecewiseField<S>& pf,
                                   ScenarioOutcome& outcome) {
  CheckOutcome c;
  c.check = "characteristics";
  std::vector<S> anchors;
  for (std::size_t i = 0; i < ctx.sc.anchors.size(); ++i) {
    anchors.push_back(parse_as<S>(ctx.sc.anchors[i], "anchors[" + std::to_string(i) + "]"));
  }
  if (anchors.empty()) anchors = default_anchors(ctx);
  std::vector<CharacteristicPath<S>> paths;
  json rows = json::array();
  bool ok = true;
  long rejected = 0;
  const S agree = ScalarTraits<S>::kExact ? S(0) : S(1e-12);
  const auto mesh = mesh_times(pf, ctx.t);
  for (const S& x : anchors) {
    json row{{"anchor", num(x)}};
    try {
      auto path = forward_characteristic(pf, x, ctx.s, ctx.t);
      auto audit = audit_path(pf, path);
      S spread(0);
      for (auto tie : {TieBreak::kPreferLeft, TieBreak::kPreferRight}) {
        TraceOptions<S> opts;
        opts.tie_break = tie;
        const auto other = forward_characteristic(pf, x, ctx.s, ctx.t, opts);
        for (const S& tm : mesh) {
          spread = std::max(spread, abs_value(S(other.position(tm) - path.position(tm))));
        }
      }
      row["forward_end"] = num(path.position(ctx.t));
      row["tie_break_spread"] = num(spread);
      row["forward_audit_ok"] = audit.ok();
      ok = ok && audit.ok() && !(agree < spread);
      paths.push_back(std::move(path));
    } catch (const RarefactionOnPath& err) {
      ++rejected;
      row["forward_rejected"] = err.what();
    }
    for (bool minimal : {true, false}) {
      const std::string key = minimal ? "backward_minimal" : "backward_maximal";
      try {
        auto back = backward_characteristic(pf, x, ctx.t, minimal);
        auto audit = audit_path(pf, back);
        row[key + "_foot"] = num(back.last().second);
        row[key + "_genuine"] = audit.ok();
        ok = ok && audit.ok();
        paths.push_back(std::move(back));
      } catch (const RarefactionOnPath& err) {
        ++rejected;
        row[key + "_rejected"] = err.what();
      }
    }
    rows.push_back(std::move(row));
  }
  std::ostringstream csv;
  write_paths_csv(csv, paths);
  emit<S>(outcome, ctx.out / "paths.csv", csv.str());
  c.report = {{"anchors", rows}, {"rejected", rejected}};
  c.status = ok ? "pass" : "fail";
  if (rejected > 0) c.detail = std::to_string(rejected) + " path(s) stopped at a rarefaction shock";
  return c;
}

template <typename S>
ScenarioOutcome run_typed(const Scenario& sc, bool sweep_only) {
  const auto ctx = make_context<S>(sc);
  ScenarioOutcome outcome;
  fs::create_directories(ctx.out);
  const S& h = ctx.h_list.front();
  auto [data_i, data_ii] = ctx.data(h);
  const auto field = couple(ctx.flux, h, std::move(data_i), std::move(data_ii), ctx.t);
  const bool compact = psi_compact(field, ctx.s, ctx.t);

  auto record = [&](CheckOutcome c) {
    if (c.status == "fail") outcome.passed = false;
    json j = c.report;
    j["check"] = c.check;
    j["status"] = c.status;
    j["detail"] = c.detail;
    j["mode"] = sc.mode;
    emit<S>(outcome, ctx.out / (c.check + ".json"), j.dump(2) + "\n");
    outcome.checks.push_back(std::move(c));
  };

  auto limit = [&] {
    if (!compact) return needs_compact<S>("limit_study");
    CheckOutcome c;
    c.check = "limit_study";
    ScenarioAtH<S> scenario = [&](const S& hh) { return ctx.data(hh); };
    const auto study = limit_study(ctx.flux, scenario, ctx.h_list, ctx.m, ctx.s, ctx.t);
    std::ostringstream csv;
    write_convergence_csv(csv, study);
    emit<S>(outcome, ctx.out / "convergence.csv", csv.str());
    c.report = to_json(study);
    c.status = study.ok ? "pass" : "fail";
    c.detail = study.detail;
    return c;
  };

  if (sweep_only) {
    record(limit());
    return outcome;
  }

  emit<S>(outcome, ctx.out / "run_I_waves.csv", wave_csv(field.run_i()));
  emit<S>(outcome, ctx.out / "run_II_waves.csv", wave_csv(field.run_ii()));
  {
    std::vector<CoefficientSnapshot<S>> snaps;
    for (const auto& [t0, t1] : field.slabs(ctx.s, ctx.t)) {
      snaps.push_back(field.snapshot(S((t0 + t1) / 2)));
    }
    std::ostringstream csv;
    write_jump_table(csv, snaps, ctx.m);
    emit<S>(outcome, ctx.out / "jumps.csv", csv.str());
  }

  std::optional<PiecewiseField<S>> pf;
  auto piecewise = [&]() -> const PiecewiseField<S>& {
    if (!pf) pf = PiecewiseField<S>::from_coefficient(field, ctx.s, ctx.t);
    return *pf;
  };

  for (const auto& name : known_checks()) {
    if (std::find(sc.checks.begin(), sc.checks.end(), name) == sc.checks.end()) continue;
    if (name == "l1_identity" || name == "weighted_identity") {
      record(identity_check(ctx, field, name == "weighted_identity"));
    } else if (name == "corollary_bound") {
      if (!compact) {
        record(needs_compact<S>(name));
        continue;
      }
      const auto r = corollary_bound_report(field, ctx.m, ctx.s, ctx.t);
      record({name, r.ok ? "pass" : "fail", r.weighted.detail, to_json(r)});
    } else if (name == "theorem31") {
      if (!compact) {
        record(needs_compact<S>(name));
        continue;
      }
      const auto r = theorem31_bound_report(field, ctx.s, ctx.t);
      record({name, r.holds && r.rs_within_bound ? "pass" : "fail", r.detail, to_json(r)});
    } else if (name == "limit_study") {
      record(limit());
    } else if (name == "theorem51") {
      if (!compact) {
        record(needs_compact<S>(name));
        continue;
      }
      const auto r = theorem51_check(field, ctx.m, ctx.s, ctx.t);
      record({name, r.holds ? "pass" : "fail", r.first_violation, to_json(r)});
    } else if (name == "oleinik") {
      S lo = S(0) < ctx.s ? ctx.s : S(ctx.t / 10);
      S hi = ctx.t;
      if (sc.oleinik_window) {
        lo = parse_as<S>(sc.oleinik_window->first, "oleinik_window[0]");
        hi = parse_as<S>(sc.oleinik_window->second, "oleinik_window[1]");
        if (lo < ctx.s || ctx.t < hi) {
          throw ConfigError("oleinik_window", "must lie inside [s, t]");
        }
      }
      const auto r = oleinik_report(field, lo, hi);
      json j = to_json(r);
      j["window"] = {num(lo), num(hi)};
      std::string detail = r.first_violation;
      if (r.violations > 0 && r.within_allowance()) {
        detail = "increasing jumps of a stay within sup f'' h (fan members at this h)";
      }
      record({name, r.within_allowance() ? "pass" : "fail", detail, j});
    } else if (name == "max_principle") {
      const S xi0 = parse_as<S>(sc.funnel->first, "funnel[0]");
      const S zeta0 = parse_as<S>(sc.funnel->second, "funnel[1]");
      MaximumPrincipleReport<S> r;
      try {
        r = maximum_principle_check(piecewise(), xi0, zeta0, ctx.t);
      } catch (const std::invalid_argument& err) {
        throw ConfigError("funnel", err.what());
      }
      std::ostringstream csv;
      std::vector<CharacteristicPath<S>> paths{r.left, r.right};
      if (r.conservation) {
        paths.push_back(r.conservation->left);
        paths.push_back(r.conservation->right);
      }
      write_paths_csv(csv, paths);
      emit<S>(outcome, ctx.out / "funnel_paths.csv", csv.str());
      json j{{"samples", r.samples},
             {"violations", r.violations},
             {"first_violation", r.first_violation},
             {"xi_end", num(r.left.position(ctx.t))},
             {"zeta_end", num(r.right.position(ctx.t))}};
      if (r.conservation) {
        j["conservation"] = {{"reference", num(r.conservation->reference)},
                             {"max_error", num(r.conservation->max_error)},
                             {"failures", r.conservation->failures}};
      } else {
        j["conservation_skipped"] = r.conservation_skipped;
      }
      record({name, r.ok() ? "pass" : "fail", r.first_violation, j});
    } else if (name == "characteristics") {
      record(characteristics_check(ctx, piecewise(), outcome));
    }
  }
  emit<S>(outcome, ctx.out / "summary.json", outcome.summary().dump(2) + "\n");
  return outcome;
}

}  // namespace

ScenarioOutcome run_scenario(const Scenario& scenario) {
  if (scenario.mode == "rational") return run_typed<Rational>(scenario, false);
  return run_typed<double>(scenario, false);
}

ScenarioOutcome run_sweep(const Scenario& scenario) {
  if (scenario.mode == "rational") return run_typed<Rational>(scenario, true);
  return run_typed<double>(scenario, true);
}

// ---------------------------------------------------------------- suite

namespace {

template <typename S>
json suite_entry(int index, std::uint64_t seed, const S& h, const S& m) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 gen(seq);
  const S t_end(2);
  for (int attempt = 0;; ++attempt) {
    auto [p, q] = random_profile_pair<S>(gen);
    try {
      const auto field = couple(FluxModel<S>::burgers(), h, p, q, t_end);
      const auto l1 = l1_identity_report(field, S(0), t_end);
      const auto w = weighted_identity_report(field, m, S(0), t_end);
      const auto ol = oleinik_report(field, S(1) / S(10), t_end);
      const auto t31 = theorem31_bound_report(field, S(0), t_end);
      const bool pass = l1.ok && w.ok && ol.within_allowance() && t31.holds && t31.rs_within_bound;
      std::string first = l1.first_violation;
      if (first.empty()) first = w.first_violation;
      if (first.empty() && !ol.within_allowance()) first = ol.first_violation;
      if (first.empty() && !(t31.holds && t31.rs_within_bound)) first = "theorem31 bound fails";
      return {{"index", index},
              {"passed", pass},
              {"redraws", attempt},
              {"fronts_i", p.jump_count()},
              {"fronts_ii", q.jump_count()},
              {"l1_identity", l1.ok},
              {"l1_max_interval_residual", num(l1.max_interval_residual)},
              {"weighted_identity", w.ok},
              {"weighted_max_interval_residual", num(w.max_interval_residual)},
              {"oleinik", ol.within_allowance()},
              {"oleinik_increasing_jumps", ol.violations},
              {"theorem31", t31.holds && t31.rs_within_bound},
              {"first_violation", first}};
    } catch (const DegenerateInput&) {
      if (attempt >= 20) throw;
    }
  }
}

}  // namespace

json SuiteSummary::to_json(const SuiteOptions& options) const {
  return {{"n", n},
          {"seed", options.seed},
          {"mode", options.mode},
          {"m", options.m},
          {"passed", passed},
          {"failed", failed},
          {"scenarios", scenarios}};
}

SuiteSummary run_random_suite(const SuiteOptions& options) {
  if (options.n < 1) throw ConfigError("n", "must be >= 1");
  if (options.mode != "float" && options.mode != "rational") {
    throw ConfigError("mode", "expected float or rational");
  }
  if (as_double(options.m, "m") < 0.0) throw ConfigError("m", "must be >= 0");
  std::vector<json> entries(static_cast<std::size_t>(options.n));
  std::atomic<int> next{0};
  std::mutex error_lock;
  std::exception_ptr error;
  auto worker = [&] {
    for (int i = next++; i < options.n; i = next++) {
      try {
        if (options.mode == "rational") {
          entries[i] = suite_entry<Rational>(i, options.seed, Rational(1, 4),
                                             parse_as<Rational>(options.m, "m"));
        } else {
          entries[i] = suite_entry<double>(i, options.seed, 0.2, parse_as<double>(options.m, "m"));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_lock);
        if (!error) error = std::current_exception();
      }
    }
  };
  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, options.n);
  std::vector<std::thread> pool;
  for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  SuiteSummary summary;
  summary.n = options.n;
  for (auto& e : entries) {
    if (e["passed"].get<bool>()) {
      ++summary.passed;
    } else {
      ++summary.failed;
    }
    summary.scenarios.push_back(std::move(e));
  }
  return summary;
}

}  // namespace wft
