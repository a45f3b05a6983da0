// Command line front end: single runs, parameter sweeps, and quick SVG plots.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "swarm/core/error.hpp"
#include "swarm/run/runner.hpp"
#include "swarm/run/svg_plot.hpp"

int main(int argc, char** argv) {
  CLI::App app{"deterministic contradiction-driven swarm simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, vary, csv_in, metric, svg_out;
  std::uint64_t seed_flag = 0;
  bool seed_given = false;
  int replicates = 1;

  auto* run_cmd = app.add_subcommand("run", "run one scenario and write metrics");
  run_cmd->add_option("--config", config_path, "config file (ini)")->required();
  run_cmd->add_option("--seed", seed_flag, "override run.seed")->each([&](const std::string&) {
    seed_given = true;
  });
  run_cmd->add_option("--out", out_dir, "output directory (overrides run.out)");

  auto* sweep_cmd = app.add_subcommand("sweep", "run replicates across parameter values");
  sweep_cmd->add_option("--config", config_path, "config file (ini)")->required();
  sweep_cmd->add_option("--vary", vary, "parameter axis, e.g. pd.population=20,40,60")
      ->required();
  sweep_cmd->add_option("--replicates", replicates, "runs per value (seeds = seed+i)");
  sweep_cmd->add_option("--out", out_dir, "output directory (overrides run.out)");

  auto* plot_cmd = app.add_subcommand("plot", "render one metric from a metrics.csv as svg");
  plot_cmd->add_option("--in", csv_in, "metrics.csv produced by run or sweep")->required();
  plot_cmd->add_option("--metric", metric, "metric name to plot")->required();
  plot_cmd->add_option("--out", svg_out, "output svg path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(run_cmd) || app.got_subcommand(sweep_cmd)) {
      auto cfg = swarm::run::load_config(config_path);
      if (seed_given) {
        cfg.seed = seed_flag;
        cfg.has_seed = true;
      }
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      swarm::run::validate_config(cfg);
      if (cfg.out_dir.empty())
        throw swarm::config_error("no output directory: set run.out or pass --out");

      if (app.got_subcommand(run_cmd)) {
        swarm::run::run_to_dir(cfg, cfg.out_dir);
        std::cout << "wrote " << cfg.out_dir << "/metrics.csv\n";
      } else {
        const auto spec = swarm::run::parse_sweep_spec(vary, replicates);
        swarm::run::sweep_to_dir(cfg, spec, cfg.out_dir);
        std::cout << "wrote " << cfg.out_dir << "/metrics.csv\n";
      }
      return 0;
    }

    swarm::run::plot_metric(csv_in, metric, svg_out);
    std::cout << "wrote " << svg_out << "\n";
    return 0;
  } catch (const swarm::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
