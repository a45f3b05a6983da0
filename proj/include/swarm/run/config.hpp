#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "swarm/core/error.hpp"
#include "swarm/scenarios/ants.hpp"
#include "swarm/scenarios/geese.hpp"
#include "swarm/scenarios/pd.hpp"

namespace swarm::run {

// A full experiment description: which scenario, for how long, under which
// seed, and which metric series to emit.  Loaded from an INI-style file
// with one section per scenario plus a [run] section.
struct run_config {
  std::string scenario;
  std::uint64_t seed = 0;
  bool has_seed = false;
  long steps = 0;
  int bins = 21;
  std::vector<std::string> metrics;
  std::string out_dir;
  bool snapshots = false;

  ants::ant_config ants;
  geese::goose_config geese;
  pd::pd_config pd;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error("bad numeric value for " + key + ": '" + value + "'");
  }
}

inline long to_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error("bad integer value for " + key + ": '" + value + "'");
  }
}

inline int to_int(const std::string& key, const std::string& value) {
  return static_cast<int>(to_long(key, value));
}

inline bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw config_error("bad boolean value for " + key + ": '" + value + "'");
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

// Applies one "section.key = value" assignment.  Shared by the file parser
// and the sweep's --vary overrides so both accept exactly the same keys.
inline void apply_config_entry(run_config& cfg, const std::string& section,
                               const std::string& key, const std::string& value) {
  using detail::to_bool;
  using detail::to_double;
  using detail::to_int;
  using detail::to_long;
  const std::string full = section + "." + key;

  if (section == "run") {
    if (key == "scenario") cfg.scenario = value;
    else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_long(full, value));
      cfg.has_seed = true;
    } else if (key == "steps") cfg.steps = to_long(full, value);
    else if (key == "bins") cfg.bins = to_int(full, value);
    else if (key == "metrics") cfg.metrics = detail::split_list(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "snapshots") cfg.snapshots = to_bool(full, value);
    else throw config_error("unknown config key: " + full);
    return;
  }

  if (section == "ants") {
    auto& a = cfg.ants;
    if (key == "grid") a.grid = to_int(full, value);
    else if (key == "food_sources") a.food_sources = to_int(full, value);
    else if (key == "units_per_source") a.units_per_source = to_double(full, value);
    else if (key == "ants") a.ants = to_int(full, value);
    else if (key == "evaporation") a.evaporation = to_double(full, value);
    else if (key == "deposit") a.deposit = to_double(full, value);
    else if (key == "crowd_threshold") a.crowd_threshold = to_int(full, value);
    else if (key == "view_radius") a.view_radius = to_int(full, value);
    else if (key == "scarcity_threshold") a.scarcity_threshold = to_double(full, value);
    else if (key == "init_force_lo") a.init_force_lo = to_double(full, value);
    else if (key == "init_force_hi") a.init_force_hi = to_double(full, value);
    else if (key == "min_source_distance") a.min_source_distance = to_int(full, value);
    else if (key == "stale_threshold") a.payoffs.stale_threshold = to_double(full, value);
    else if (key == "payoff_gain") a.payoffs.gain = to_double(full, value);
    else if (key == "explore_gain") a.payoffs.explore_gain = to_double(full, value);
    else if (key == "follow_gain") a.payoffs.follow_gain = to_double(full, value);
    else throw config_error("unknown config key: " + full);
    return;
  }

  if (section == "geese") {
    auto& g = cfg.geese;
    if (key == "flock") g.flock = to_int(full, value);
    else if (key == "ideal_gap") g.ideal_gap = to_double(full, value);
    else if (key == "min_gap") g.min_gap = to_double(full, value);
    else if (key == "max_gap") g.max_gap = to_double(full, value);
    else if (key == "ideal_lateral") g.ideal_lateral = to_double(full, value);
    else if (key == "lateral_band") g.lateral_band = to_double(full, value);
    else if (key == "base_speed") g.base_speed = to_double(full, value);
    else if (key == "speed_min") g.speed_min = to_double(full, value);
    else if (key == "speed_max") g.speed_max = to_double(full, value);
    else if (key == "accel") g.accel = to_double(full, value);
    else if (key == "lateral_step") g.lateral_step = to_double(full, value);
    else if (key == "dt") g.dt = to_double(full, value);
    else if (key == "gap_gain") g.gap_gain = to_double(full, value);
    else if (key == "deadband") g.deadband = to_double(full, value);
    else if (key == "view_radius") g.view_radius = to_double(full, value);
    else if (key == "slot_capacity") g.slot_capacity = to_double(full, value);
    else if (key == "init_depth") g.init_depth = to_double(full, value);
    else if (key == "init_width") g.init_width = to_double(full, value);
    else if (key == "scarcity_threshold") g.scarcity_threshold = to_double(full, value);
    else throw config_error("unknown config key: " + full);
    return;
  }

  if (section == "pd") {
    auto& p = cfg.pd;
    if (key == "grid") p.grid = to_int(full, value);
    else if (key == "population") p.population = to_int(full, value);
    else if (key == "mobility") p.mobility = to_bool(full, value);
    else if (key == "intention_max") p.intention_max = to_int(full, value);
    else if (key == "init_lo") p.init_lo = to_int(full, value);
    else if (key == "init_hi") p.init_hi = to_int(full, value);
    else if (key == "neighborhood") p.neighborhood = value;
    else if (key == "both_defect") p.both_defect = to_double(full, value);
    else if (key == "defect_vs_coop") p.defect_vs_coop = to_double(full, value);
    else if (key == "coop_vs_defect") p.coop_vs_defect = to_double(full, value);
    else if (key == "both_coop") p.both_coop = to_double(full, value);
    else throw config_error("unknown config key: " + full);
    return;
  }

  throw config_error("unknown config section: [" + section + "]");
}

// Metric names each scenario can serve.
inline std::vector<std::string> available_metrics(const std::string& scenario) {
  if (scenario == "ants")
    return {"si_local.c1", "si_local.c2",        "si_global",
            "joint_entropy", "swarm_potential.c1", "swarm_potential.c2",
            "mean_route_efficiency"};
  if (scenario == "geese")
    return {"si_local.c1",   "si_local.c2",        "si_global",
            "joint_entropy", "swarm_potential.c1", "swarm_potential.c2"};
  if (scenario == "pd")
    return {"si_local.cooperation", "si_global", "joint_entropy",
            "swarm_potential.cooperation", "cooperation_fraction"};
  return {};
}

inline void validate_config(const run_config& cfg) {
  if (cfg.scenario != "ants" && cfg.scenario != "geese" && cfg.scenario != "pd")
    throw config_error("run.scenario must be one of ants, geese, pd");
  if (!cfg.has_seed) throw config_error("run.seed is required");
  if (cfg.steps < 1) throw config_error("run.steps must be at least 1");
  if (cfg.bins < 2) throw config_error("run.bins must be at least 2");
  if (cfg.metrics.empty()) throw config_error("run.metrics must list at least one metric");
  const auto known = available_metrics(cfg.scenario);
  for (const auto& m : cfg.metrics) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      std::string msg = "metric '" + m + "' not available for scenario '" + cfg.scenario +
                        "'; available:";
      for (const auto& k : known) msg += " " + k;
      throw config_error(msg);
    }
  }
  try {
    if (cfg.scenario == "ants") cfg.ants.validate();
    if (cfg.scenario == "geese") cfg.geese.validate();
    if (cfg.scenario == "pd") cfg.pd.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("bad scenario config: ") + e.what());
  }
}

// INI-style parser: [section] headers, key = value lines, # or ; comments.
inline run_config parse_config_text(const std::string& text) {
  run_config cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("line " + std::to_string(line_no) + ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      throw config_error("line " + std::to_string(line_no) + ": key outside any section");
    apply_config_entry(cfg, section, detail::trim(line.substr(0, eq)),
                       detail::trim(line.substr(eq + 1)));
  }
  // Bin count flows into the scenario policies.
  cfg.ants.bins = cfg.bins;
  cfg.geese.bins = cfg.bins;
  return cfg;
}

inline run_config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// Contradiction names the scenario's metrics refer to.
inline std::vector<std::string> scenario_contradictions(const std::string& scenario) {
  if (scenario == "pd") return {"cooperation"};
  return {"c1", "c2"};
}

}  // namespace swarm::run
