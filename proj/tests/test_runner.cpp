#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "swarm/core/error.hpp"
#include "swarm/run/config.hpp"
#include "swarm/run/runner.hpp"
#include "swarm/run/svg_plot.hpp"

namespace {

using namespace swarm;
namespace fs = std::filesystem;

std::string make_temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("swarm_runner_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

long count_lines(const std::string& text) {
  long n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

run::run_config tiny_pd_config() {
  run::run_config cfg;
  cfg.scenario = "pd";
  cfg.seed = 99;
  cfg.has_seed = true;
  cfg.steps = 5;
  cfg.metrics = {"si_local.cooperation", "si_global", "joint_entropy",
                 "swarm_potential.cooperation", "cooperation_fraction"};
  cfg.pd.grid = 12;
  cfg.pd.population = 30;
  return cfg;
}

TEST(config_parsing, reads_every_section) {
  const std::string text = R"(
# experiment description
[run]
scenario = ants
seed = 1234
steps = 50      ; inline comment
bins = 11
metrics = si_global, joint_entropy
out = results
snapshots = yes

[ants]
grid = 40
units_per_source = 12.5
payoff_gain = 4

[geese]
flock = 14
gap_gain = 1.5
deadband = 0.05

[pd]
population = 800
mobility = true
neighborhood = von_neumann
)";
  const auto cfg = run::parse_config_text(text);
  EXPECT_EQ(cfg.scenario, "ants");
  EXPECT_EQ(cfg.seed, 1234u);
  EXPECT_TRUE(cfg.has_seed);
  EXPECT_EQ(cfg.steps, 50);
  EXPECT_EQ(cfg.bins, 11);
  ASSERT_EQ(cfg.metrics.size(), 2u);
  EXPECT_EQ(cfg.metrics[0], "si_global");
  EXPECT_EQ(cfg.metrics[1], "joint_entropy");
  EXPECT_EQ(cfg.out_dir, "results");
  EXPECT_TRUE(cfg.snapshots);

  EXPECT_EQ(cfg.ants.grid, 40);
  EXPECT_DOUBLE_EQ(cfg.ants.units_per_source, 12.5);
  EXPECT_DOUBLE_EQ(cfg.ants.payoffs.gain, 4.0);
  EXPECT_EQ(cfg.geese.flock, 14);
  EXPECT_DOUBLE_EQ(cfg.geese.gap_gain, 1.5);
  EXPECT_DOUBLE_EQ(cfg.geese.deadband, 0.05);
  EXPECT_EQ(cfg.pd.population, 800);
  EXPECT_TRUE(cfg.pd.mobility);
  EXPECT_EQ(cfg.pd.neighborhood, "von_neumann");

  // The bin count flows into the scenario policies.
  EXPECT_EQ(cfg.ants.bins, 11);
  EXPECT_EQ(cfg.geese.bins, 11);
}

TEST(config_parsing, rejects_malformed_input) {
  EXPECT_THROW(run::parse_config_text("[run\nseed = 1\n"), config_error);
  EXPECT_THROW(run::parse_config_text("seed = 1\n"), config_error);
  EXPECT_THROW(run::parse_config_text("[run]\nseed\n"), config_error);
  EXPECT_THROW(run::parse_config_text("[run]\nwhatever = 1\n"), config_error);
  EXPECT_THROW(run::parse_config_text("[nope]\nk = 1\n"), config_error);
  EXPECT_THROW(run::parse_config_text("[run]\nsteps = fifty\n"), config_error);
  EXPECT_THROW(run::parse_config_text("[run]\nsnapshots = maybe\n"), config_error);
  EXPECT_THROW(run::parse_config_text("[ants]\nevaporation = 0.02x\n"), config_error);
}

TEST(config_validation, rejects_inconsistent_configs) {
  auto broken = [](auto&& mutate) {
    auto cfg = tiny_pd_config();
    mutate(cfg);
    EXPECT_THROW(run::validate_config(cfg), config_error);
  };
  broken([](auto& c) { c.scenario = "bees"; });
  broken([](auto& c) { c.has_seed = false; });
  broken([](auto& c) { c.steps = 0; });
  broken([](auto& c) { c.bins = 1; });
  broken([](auto& c) { c.metrics.clear(); });
  broken([](auto& c) { c.metrics = {"si_global", "mean_route_efficiency"}; });
  broken([](auto& c) { c.pd.population = 0; });
  broken([](auto& c) { c.pd.neighborhood = "hex"; });
  EXPECT_NO_THROW(run::validate_config(tiny_pd_config()));
}

TEST(config_validation, unknown_metric_error_lists_the_choices) {
  auto cfg = tiny_pd_config();
  cfg.metrics = {"nope"};
  try {
    run::validate_config(cfg);
    FAIL() << "expected config_error";
  } catch (const config_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'nope'"), std::string::npos);
    EXPECT_NE(msg.find("available:"), std::string::npos);
    EXPECT_NE(msg.find("cooperation_fraction"), std::string::npos);
  }
}

TEST(config_validation, metric_catalog_matches_scenarios) {
  EXPECT_EQ(run::available_metrics("ants").size(), 7u);
  EXPECT_EQ(run::available_metrics("geese").size(), 6u);
  EXPECT_EQ(run::available_metrics("pd").size(), 5u);
  EXPECT_TRUE(run::available_metrics("bees").empty());

  EXPECT_EQ(run::scenario_contradictions("pd"), std::vector<std::string>{"cooperation"});
  EXPECT_EQ(run::scenario_contradictions("ants"), (std::vector<std::string>{"c1", "c2"}));
}

TEST(runner, emits_one_row_per_step_and_metric) {
  const auto cfg = tiny_pd_config();
  const auto result = run::run_scenario(cfg, "trial", 7);
  const std::size_t m = cfg.metrics.size();
  ASSERT_EQ(result.rows.size(), m * static_cast<std::size_t>(cfg.steps));

  for (std::size_t k = 0; k < result.rows.size(); ++k) {
    const auto& row = result.rows[k];
    EXPECT_EQ(row.run_id, "trial");
    EXPECT_EQ(row.seed, 7u);
    EXPECT_EQ(row.step, static_cast<long>(k / m) + 1);
    EXPECT_EQ(row.metric, cfg.metrics[k % m]);
    if (row.metric == "joint_entropy") {
      EXPECT_GE(row.value, 0.0);
    } else if (row.metric.rfind("swarm_potential", 0) == 0) {
      EXPECT_GE(row.value, -1.0);
      EXPECT_LE(row.value, 1.0);
    } else {
      EXPECT_GE(row.value, 0.0);
      EXPECT_LE(row.value, 1.0);
    }
  }

  // Audit over 5 snapshots pairs up 4 transitions.
  ASSERT_TRUE(result.audits.count("cooperation"));
  const auto& audit = result.audits.at("cooperation");
  EXPECT_EQ(audit.checked + audit.skipped, 4);

  const auto again = run::run_scenario(cfg, "trial", 7);
  for (std::size_t k = 0; k < result.rows.size(); ++k)
    EXPECT_EQ(result.rows[k].value, again.rows[k].value);
}

TEST(runner, streams_one_snapshot_line_per_step) {
  const auto cfg = tiny_pd_config();
  std::ostringstream snap;
  run::run_scenario(cfg, "trial", 7, &snap);
  const std::string text = snap.str();
  EXPECT_EQ(count_lines(text), cfg.steps);

  std::istringstream in(text);
  std::string line;
  long step = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("step").get<long>(), ++step);
    EXPECT_EQ(j.at("agents").size(), static_cast<std::size_t>(cfg.pd.population));
  }
}

TEST(runner, value_formatting_is_compact) {
  EXPECT_EQ(run::format_value(0.1), "0.1");
  EXPECT_EQ(run::format_value(1.0), "1");
  EXPECT_EQ(run::format_value(1e-9), "1e-09");
  EXPECT_EQ(run::format_value(0.123456789123), "0.123456789");
  EXPECT_EQ(run::format_value(0.0), "0");
}

TEST(runner, median_takes_the_middle_or_the_mean) {
  EXPECT_DOUBLE_EQ(run::median_of({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(run::median_of({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_DOUBLE_EQ(run::median_of({5.0}), 5.0);
}

TEST(runner, writes_a_complete_run_directory) {
  auto cfg = tiny_pd_config();
  cfg.snapshots = true;
  const auto dir = make_temp_dir("run_dir");
  run::run_to_dir(cfg, dir);

  const std::string csv = read_file(dir + "/metrics.csv");
  EXPECT_EQ(csv.rfind("run_id,seed,step,metric,value\n", 0), 0u);
  EXPECT_EQ(count_lines(csv), 1 + cfg.steps * static_cast<long>(cfg.metrics.size()));

  // Every data row has five fields and carries the scenario as run id.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    int commas = 0;
    for (char c : line)
      if (c == ',') ++commas;
    EXPECT_EQ(commas, 4);
    EXPECT_EQ(line.rfind("pd,", 0), 0u);
  }

  EXPECT_EQ(count_lines(read_file(dir + "/snapshots.jsonl")), cfg.steps);

  const auto summary = nlohmann::json::parse(read_file(dir + "/summary.json"));
  EXPECT_EQ(summary.at("scenario"), "pd");
  EXPECT_EQ(summary.at("seed").get<std::uint64_t>(), cfg.seed);
  EXPECT_EQ(summary.at("steps").get<long>(), cfg.steps);
  EXPECT_EQ(summary.at("bins").get<int>(), cfg.bins);
  for (const auto& m : cfg.metrics) {
    const auto& s = summary.at("metrics").at(m);
    EXPECT_EQ(s.at("count").get<long>(), cfg.steps);
    EXPECT_GE(s.at("max").get<double>(), s.at("min").get<double>());
  }
  const auto& audit = summary.at("comonotonicity").at("cooperation");
  EXPECT_TRUE(audit.contains("checked"));
  EXPECT_TRUE(audit.contains("skipped"));
  EXPECT_TRUE(audit.contains("violations"));
  EXPECT_TRUE(audit.contains("pass"));

  fs::remove_all(dir);
}

TEST(runner, identical_configs_produce_identical_bytes) {
  auto cfg = tiny_pd_config();
  cfg.snapshots = true;
  const auto dir_a = make_temp_dir("bytes_a");
  const auto dir_b = make_temp_dir("bytes_b");
  run::run_to_dir(cfg, dir_a);
  run::run_to_dir(cfg, dir_b);
  EXPECT_EQ(read_file(dir_a + "/metrics.csv"), read_file(dir_b + "/metrics.csv"));
  EXPECT_EQ(read_file(dir_a + "/snapshots.jsonl"), read_file(dir_b + "/snapshots.jsonl"));
  EXPECT_EQ(read_file(dir_a + "/summary.json"), read_file(dir_b + "/summary.json"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST(sweeps, spec_parsing_checks_its_shape) {
  const auto spec = run::parse_sweep_spec("pd.population=100, 200,300", 3);
  EXPECT_EQ(spec.param, "pd.population");
  ASSERT_EQ(spec.values.size(), 3u);
  EXPECT_EQ(spec.values[1], "200");
  EXPECT_EQ(spec.replicates, 3);

  EXPECT_THROW(run::parse_sweep_spec("pd.population", 1), config_error);
  EXPECT_THROW(run::parse_sweep_spec("=5", 1), config_error);
  EXPECT_THROW(run::parse_sweep_spec("population=5", 1), config_error);
  EXPECT_THROW(run::parse_sweep_spec("pd.population=", 1), config_error);
  EXPECT_THROW(run::parse_sweep_spec("pd.population=5", 0), config_error);
}

TEST(sweeps, overrides_change_one_key_and_revalidate) {
  const auto base = tiny_pd_config();
  const auto changed = run::with_override(base, "pd.population", "64");
  EXPECT_EQ(changed.pd.population, 64);
  EXPECT_EQ(base.pd.population, 30);

  const auto rebinned = run::with_override(base, "run.bins", "7");
  EXPECT_EQ(rebinned.bins, 7);
  EXPECT_EQ(rebinned.ants.bins, 7);
  EXPECT_EQ(rebinned.geese.bins, 7);

  EXPECT_THROW(run::with_override(base, "pd.population", "0"), config_error);
  EXPECT_THROW(run::with_override(base, "pd.nope", "1"), config_error);
}

TEST(sweeps, directory_holds_replicates_and_medians) {
  run::run_config base;
  base.scenario = "pd";
  base.seed = 40;
  base.has_seed = true;
  base.steps = 3;
  base.metrics = {"cooperation_fraction", "si_global"};
  base.pd.grid = 10;
  base.pd.population = 16;

  run::sweep_spec spec;
  spec.param = "pd.population";
  spec.values = {"16", "25"};
  spec.replicates = 2;

  const auto dir = make_temp_dir("sweep");
  run::sweep_to_dir(base, spec, dir);

  const std::string csv = read_file(dir + "/metrics.csv");
  EXPECT_NE(csv.find("pd.population=16#r0,40,"), std::string::npos);
  EXPECT_NE(csv.find("pd.population=16#r1,41,"), std::string::npos);
  EXPECT_NE(csv.find("pd.population=25#r0,40,"), std::string::npos);
  EXPECT_NE(csv.find("pd.population=25#r1,41,"), std::string::npos);
  EXPECT_NE(csv.find("median:pd.population=16,"), std::string::npos);
  EXPECT_NE(csv.find("median:pd.population=25,"), std::string::npos);

  // The median rows agree with in-process reruns of the same seeds.
  const auto cfg16 = run::with_override(base, "pd.population", "16");
  const auto r0 = run::run_scenario(cfg16, "x", 40);
  const auto r1 = run::run_scenario(cfg16, "x", 41);
  const double expect_med = 0.5 * (r0.rows.back().value + r1.rows.back().value);

  double csv_med = -1.0;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("median:pd.population=16,", 0) != 0) continue;
    if (line.find(",3,si_global,") == std::string::npos) continue;
    csv_med = std::stod(line.substr(line.rfind(',') + 1));
  }
  EXPECT_NEAR(csv_med, expect_med, 1e-7);

  const auto summary = nlohmann::json::parse(read_file(dir + "/summary.json"));
  EXPECT_EQ(summary.at("parameter"), "pd.population");
  EXPECT_EQ(summary.at("replicates").get<int>(), 2);
  const auto& finals = summary.at("final_medians");
  ASSERT_TRUE(finals.contains("pd.population=16"));
  ASSERT_TRUE(finals.contains("pd.population=25"));
  EXPECT_NEAR(finals.at("pd.population=16").at("si_global").get<double>(), expect_med, 1e-12);

  fs::remove_all(dir);
}

TEST(plots, renders_an_svg_per_metric) {
  auto cfg = tiny_pd_config();
  const auto dir = make_temp_dir("plot");
  run::run_to_dir(cfg, dir);

  const std::string svg_path = dir + "/coop.svg";
  run::plot_metric(dir + "/metrics.csv", "cooperation_fraction", svg_path);
  const std::string svg = read_file(svg_path);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("cooperation_fraction"), std::string::npos);

  fs::remove_all(dir);
}

TEST(plots, missing_metric_error_lists_what_exists) {
  auto cfg = tiny_pd_config();
  cfg.metrics = {"cooperation_fraction"};
  const auto dir = make_temp_dir("plot_missing");
  run::run_to_dir(cfg, dir);
  try {
    run::plot_metric(dir + "/metrics.csv", "nope", dir + "/x.svg");
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'nope'"), std::string::npos);
    EXPECT_NE(msg.find("available:"), std::string::npos);
    EXPECT_NE(msg.find("cooperation_fraction"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(plots, foreign_files_are_rejected) {
  const auto dir = make_temp_dir("plot_bad");
  {
    std::ofstream out(dir + "/bad.csv", std::ios::binary);
    out << "not,a,metrics,file\n1,2,3,4\n";
  }
  EXPECT_THROW(run::plot_metric(dir + "/bad.csv", "x", dir + "/x.svg"), std::runtime_error);
  EXPECT_THROW(run::plot_metric(dir + "/absent.csv", "x", dir + "/x.svg"), std::runtime_error);
  fs::remove_all(dir);
}

}  // namespace
