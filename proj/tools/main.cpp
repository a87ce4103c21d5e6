#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gebayes/experiments.hpp"

namespace {

struct CliArgs {
  gebayes::ExperimentOptions opt;
  std::string variant = "none";
};

void add_common(CLI::App* cmd, CliArgs& args, bool needs_variant) {
  cmd->add_option("experiment", args.opt.experiment,
                  "experiment name: linear | advection | emissions | "
                  "powerplant");
  cmd->add_option("--config", args.opt.config_path, "config file overlay");
  cmd->add_option("--seed", [&args](const CLI::results_t& res) {
    args.opt.seed = std::stoull(res[0]);
    return true;
  }, "override the experiment seed");
  cmd->add_option("--out", args.opt.out_dir, "output directory");
  cmd->add_flag("--published-scale", args.opt.published_scale,
                "published sampler settings instead of the quick defaults");
  cmd->add_flag("--balance", args.opt.balance,
                "powerplant: upsample the training minority class");
  if (needs_variant)
    cmd->add_option("--variant", args.variant,
                    "rule set to apply: 'none' or a label written by evolve");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rule-evolving Bayesian regression experiments"};
  app.require_subcommand(1);

  CliArgs args;
  CLI::App* evolve = app.add_subcommand("evolve", "evolve rule candidates");
  CLI::App* fit = app.add_subcommand("fit", "sample the posterior");
  CLI::App* reproduce =
      app.add_subcommand("reproduce", "full pipeline with comparison table");
  CLI::App* metrics =
      app.add_subcommand("metrics", "recompute metrics from trace files");
  add_common(evolve, args, false);
  add_common(fit, args, true);
  add_common(reproduce, args, false);
  add_common(metrics, args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    gebayes::KeyValueConfig cfg = gebayes::resolve_config(args.opt);
    const std::string& out_dir = args.opt.out_dir;
    if (evolve->parsed()) {
      auto candidates = gebayes::run_evolve(cfg, out_dir);
      for (const auto& c : candidates)
        std::cout << c.label << "  cost " << c.cost << "  -> " << c.file
                  << "\n";
    } else if (fit->parsed()) {
      auto outcome = gebayes::run_fit(cfg, out_dir, args.variant);
      std::cout << gebayes::render(outcome.metrics);
      for (const auto& f : outcome.files) std::cout << "wrote " << f << "\n";
    } else if (reproduce->parsed()) {
      auto outcome =
          gebayes::run_reproduce(cfg, out_dir, args.opt.balance);
      std::cout << outcome.table;
      std::cout << "wrote " << out_dir << "/comparison.txt\n";
    } else if (metrics->parsed()) {
      auto report = gebayes::run_metrics(cfg, out_dir, args.variant);
      std::cout << gebayes::render(report);
    }
  } catch (const gebayes::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
