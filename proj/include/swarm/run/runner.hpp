#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "swarm/core/error.hpp"
#include "swarm/metrics/swarm_metrics.hpp"
#include "swarm/run/config.hpp"

namespace swarm::run {

struct metric_row {
  std::string run_id;
  std::uint64_t seed = 0;
  long step = 0;
  std::string metric;
  double value = 0.0;
};

// Shortest representation that round-trips comfortably for our value ranges.
inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf);
}

struct run_result {
  std::vector<metric_row> rows;
  // Per-contradiction comonotonicity audit over the whole trajectory.
  std::map<std::string, comonotonicity_report> audits;
};

namespace detail {

// Uniform handle over the three scenario worlds so the run loop stays flat.
struct scenario_driver {
  std::shared_ptr<void> world;  // keeps the concrete world alive
  std::function<void()> step;
  std::function<swarm_snapshot()> snapshot;
  std::function<double(const std::string&)> scalar_metric;  // scenario extras
  std::function<nlohmann::ordered_json()> snapshot_json;
};

inline scenario_driver make_driver(const run_config& cfg, std::uint64_t seed) {
  scenario_driver d;
  if (cfg.scenario == "ants") {
    auto w = std::make_shared<ants::ant_world>(cfg.ants, seed);
    d.world = w;
    d.step = [w] { w->step(); };
    d.snapshot = [w] { return w->snapshot(); };
    d.scalar_metric = [w](const std::string& name) -> double {
      if (name == "mean_route_efficiency") return w->mean_route_efficiency();
      throw std::logic_error("unknown scalar metric " + name);
    };
    d.snapshot_json = [w] {
      nlohmann::ordered_json agents = nlohmann::ordered_json::array();
      const auto& colony = w->colony();
      for (std::size_t i = 0; i < colony.size(); ++i) {
        const auto& a = colony[i];
        nlohmann::ordered_json j;
        j["id"] = i;
        j["x"] = a.pos.x;
        j["y"] = a.pos.y;
        j["laden"] = a.laden;
        j["c1"] = sharpness(a.ind.state_of("c1"));
        j["c2"] = sharpness(a.ind.state_of("c2"));
        agents.push_back(std::move(j));
      }
      return agents;
    };
    return d;
  }
  if (cfg.scenario == "geese") {
    auto w = std::make_shared<geese::flock>(cfg.geese, seed);
    d.world = w;
    d.step = [w] { w->step(); };
    d.snapshot = [w] { return w->snapshot(); };
    d.scalar_metric = [](const std::string& name) -> double {
      throw std::logic_error("unknown scalar metric " + name);
    };
    d.snapshot_json = [w] {
      nlohmann::ordered_json agents = nlohmann::ordered_json::array();
      const int lead = w->leader();
      const auto& birds = w->birds();
      for (std::size_t i = 0; i < birds.size(); ++i) {
        const auto& g = birds[i];
        nlohmann::ordered_json j;
        j["id"] = i;
        j["x"] = g.x;
        j["y"] = g.y;
        j["speed"] = g.speed;
        j["leader"] = static_cast<int>(i) == lead;
        if (static_cast<int>(i) != lead) {
          j["c1"] = sharpness(g.ind.state_of("c1"));
          j["c2"] = sharpness(g.ind.state_of("c2"));
        }
        agents.push_back(std::move(j));
      }
      return agents;
    };
    return d;
  }
  if (cfg.scenario == "pd") {
    auto w = std::make_shared<pd::pd_world>(cfg.pd, seed);
    d.world = w;
    d.step = [w] { w->round(); };
    d.snapshot = [w] { return w->snapshot(); };
    d.scalar_metric = [w](const std::string& name) -> double {
      if (name == "cooperation_fraction") return w->cooperation_fraction();
      throw std::logic_error("unknown scalar metric " + name);
    };
    d.snapshot_json = [w] {
      nlohmann::ordered_json agents = nlohmann::ordered_json::array();
      const auto& pop = w->agents();
      for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto& a = pop[i];
        nlohmann::ordered_json j;
        j["id"] = i;
        j["x"] = a.x;
        j["y"] = a.y;
        j["intention"] = a.intention;
        j["cooperates"] = a.cooperates();
        agents.push_back(std::move(j));
      }
      return agents;
    };
    return d;
  }
  throw config_error("unknown scenario: " + cfg.scenario);
}

// True for metric names computed from the sharpness snapshot rather than
// scenario-specific counters.
inline bool snapshot_metric(const std::string& name) {
  return name.rfind("si_local.", 0) == 0 || name.rfind("swarm_potential.", 0) == 0 ||
         name == "si_global" || name == "joint_entropy";
}

}  // namespace detail

// Runs one scenario for cfg.steps steps and captures the requested metric
// series.  `run_id` labels the rows; `seed` overrides cfg.seed so sweeps can
// reuse one config.  Optionally streams per-step agent snapshots as JSONL.
inline run_result run_scenario(const run_config& cfg, const std::string& run_id,
                               std::uint64_t seed, std::ostream* snapshot_out = nullptr) {
  auto driver = detail::make_driver(cfg, seed);
  const auto contradictions = scenario_contradictions(cfg.scenario);

  run_result result;
  // Trajectories of binned sharpness per contradiction feed the
  // comonotonicity audit at the end.
  std::map<std::string, std::vector<binned_distribution>> dists;

  for (long t = 1; t <= cfg.steps; ++t) {
    driver.step();
    const auto snap = driver.snapshot();
    snap.validate();

    std::map<std::string, binned_distribution> by_name;
    for (const auto& c : contradictions) {
      auto dist = bin_sharpness(snap.values_of(c), cfg.bins);
      dists[c].push_back(dist);
      by_name.emplace(c, std::move(dist));
    }

    for (const auto& m : cfg.metrics) {
      double value = 0.0;
      if (detail::snapshot_metric(m)) {
        if (m == "si_global") {
          value = si_global(snap, contradictions, cfg.bins);
        } else if (m == "joint_entropy") {
          value = joint_entropy(snap, contradictions, cfg.bins);
        } else {
          const auto dot = m.find('.');
          const std::string which = m.substr(dot + 1);
          const auto it = by_name.find(which);
          if (it == by_name.end()) throw std::logic_error("metric names unknown contradiction");
          value = m.rfind("si_local", 0) == 0 ? si_local(it->second)
                                              : swarm_potential(it->second);
        }
      } else {
        value = driver.scalar_metric(m);
      }
      result.rows.push_back({run_id, seed, t, m, value});
    }

    if (snapshot_out) {
      nlohmann::ordered_json line;
      line["step"] = t;
      line["agents"] = driver.snapshot_json();
      *snapshot_out << line.dump() << "\n";
    }
  }

  for (const auto& [name, series] : dists)
    result.audits.emplace(name, assertion1_report(series));
  return result;
}

inline void write_csv(const std::string& path, const std::vector<metric_row>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "run_id,seed,step,metric,value\n";
  for (const auto& r : rows)
    out << r.run_id << ',' << r.seed << ',' << r.step << ',' << r.metric << ','
        << format_value(r.value) << "\n";
}

namespace detail {

struct series_stats {
  double first = 0.0, last = 0.0, min = 0.0, max = 0.0;
  long count = 0;
};

inline std::map<std::string, series_stats> summarize(const std::vector<metric_row>& rows,
                                                     const std::string& run_id) {
  std::map<std::string, series_stats> stats;
  for (const auto& r : rows) {
    if (r.run_id != run_id) continue;
    auto [it, fresh] = stats.try_emplace(r.metric);
    auto& s = it->second;
    if (fresh) {
      s.first = s.last = s.min = s.max = r.value;
    } else {
      s.last = r.value;
      s.min = std::min(s.min, r.value);
      s.max = std::max(s.max, r.value);
    }
    ++s.count;
  }
  return stats;
}

inline nlohmann::ordered_json stats_json(const std::map<std::string, series_stats>& stats) {
  nlohmann::ordered_json j;
  for (const auto& [name, s] : stats) {
    nlohmann::ordered_json m;
    m["first"] = s.first;
    m["last"] = s.last;
    m["min"] = s.min;
    m["max"] = s.max;
    m["count"] = s.count;
    j[name] = std::move(m);
  }
  return j;
}

inline nlohmann::ordered_json audit_json(
    const std::map<std::string, comonotonicity_report>& audits) {
  nlohmann::ordered_json j;
  for (const auto& [name, a] : audits) {
    nlohmann::ordered_json r;
    r["checked"] = a.checked;
    r["skipped"] = a.skipped;
    r["violations"] = a.violations;
    r["pass"] = a.pass;
    j[name] = std::move(r);
  }
  return j;
}

}  // namespace detail

// Executes a single run into out_dir: metrics.csv, summary.json and, when
// enabled, snapshots.jsonl.
inline void run_to_dir(const run_config& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir);

  std::ofstream snap_file;
  std::ostream* snap_out = nullptr;
  if (cfg.snapshots) {
    snap_file.open(out_dir + "/snapshots.jsonl", std::ios::binary);
    if (!snap_file) throw std::runtime_error("cannot write snapshots.jsonl in " + out_dir);
    snap_out = &snap_file;
  }

  const auto result = run_scenario(cfg, cfg.scenario, cfg.seed, snap_out);
  write_csv(out_dir + "/metrics.csv", result.rows);

  nlohmann::ordered_json summary;
  summary["scenario"] = cfg.scenario;
  summary["seed"] = cfg.seed;
  summary["steps"] = cfg.steps;
  summary["bins"] = cfg.bins;
  summary["metrics"] = detail::stats_json(detail::summarize(result.rows, cfg.scenario));
  summary["comonotonicity"] = detail::audit_json(result.audits);

  std::ofstream js(out_dir + "/summary.json", std::ios::binary);
  if (!js) throw std::runtime_error("cannot write summary.json in " + out_dir);
  js << summary.dump(2) << "\n";
}

// One parameter axis for a sweep: "section.key" plus the values to try.
struct sweep_spec {
  std::string param;  // e.g. "pd.population"
  std::vector<std::string> values;
  int replicates = 1;
};

inline sweep_spec parse_sweep_spec(const std::string& vary, int replicates) {
  sweep_spec spec;
  const auto eq = vary.find('=');
  if (eq == std::string::npos || eq == 0)
    throw config_error("--vary expects section.key=v1,v2,...");
  spec.param = vary.substr(0, eq);
  spec.values = detail::split_list(vary.substr(eq + 1));
  if (spec.values.empty()) throw config_error("--vary lists no values");
  if (spec.param.find('.') == std::string::npos)
    throw config_error("--vary parameter must be section.key");
  spec.replicates = replicates;
  if (replicates < 1) throw config_error("--replicates must be at least 1");
  return spec;
}

inline run_config with_override(const run_config& base, const std::string& param,
                                const std::string& value) {
  run_config cfg = base;
  const auto dot = param.find('.');
  apply_config_entry(cfg, param.substr(0, dot), param.substr(dot + 1), value);
  cfg.ants.bins = cfg.bins;
  cfg.geese.bins = cfg.bins;
  validate_config(cfg);
  return cfg;
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Runs replicates for each parameter value (seeds = base seed + replicate
// index), writes every run's rows plus a per-value median series into one
// metrics.csv, and a summary.json with final-step medians.
inline void sweep_to_dir(const run_config& base, const sweep_spec& spec,
                         const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir);

  std::vector<metric_row> all_rows;
  nlohmann::ordered_json summary;
  summary["parameter"] = spec.param;
  summary["replicates"] = spec.replicates;
  nlohmann::ordered_json per_value;

  for (const auto& value : spec.values) {
    const auto cfg = with_override(base, spec.param, value);
    const std::string value_id = spec.param + "=" + value;

    // (step, metric) -> replicate values, insertion-ordered by first sight.
    std::map<std::pair<long, std::string>, std::vector<double>> samples;
    std::vector<std::pair<long, std::string>> order;

    for (int r = 0; r < spec.replicates; ++r) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
      const std::string run_id = value_id + "#r" + std::to_string(r);
      auto result = run_scenario(cfg, run_id, seed);
      for (const auto& row : result.rows) {
        auto key = std::make_pair(row.step, row.metric);
        auto [it, fresh] = samples.try_emplace(key);
        if (fresh) order.push_back(key);
        it->second.push_back(row.value);
      }
      all_rows.insert(all_rows.end(), result.rows.begin(), result.rows.end());
    }

    nlohmann::ordered_json finals;
    long last_step = 0;
    for (const auto& key : order) last_step = std::max(last_step, key.first);
    for (const auto& key : order) {
      const double med = median_of(samples.at(key));
      all_rows.push_back({"median:" + value_id, cfg.seed, key.first, key.second, med});
      if (key.first == last_step) finals[key.second] = med;
    }
    per_value[value_id] = std::move(finals);
  }

  summary["final_medians"] = std::move(per_value);
  write_csv(out_dir + "/metrics.csv", all_rows);
  std::ofstream js(out_dir + "/summary.json", std::ios::binary);
  if (!js) throw std::runtime_error("cannot write summary.json in " + out_dir);
  js << summary.dump(2) << "\n";
}

}  // namespace swarm::run
