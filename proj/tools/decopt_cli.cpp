#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "decopt/acceptance.hpp"
#include "decopt/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"decopt: deterministic lab for decentralized convex "
               "optimization experiments"};
  app.require_subcommand(0, 1);

  bool assert_mode = false;
  app.add_flag("--assert", assert_mode,
               "run the acceptance suite; exit nonzero on any failure");

  std::string run_config, run_out;
  CLI::App* run = app.add_subcommand("run", "execute one experiment config");
  run->add_option("--config", run_config, "experiment JSON")->required();
  run->add_option("--out", run_out, "output directory")->required();

  std::string sweep_config, sweep_out;
  CLI::App* sw = app.add_subcommand("sweep", "execute a config grid");
  sw->add_option("--config", sweep_config, "sweep JSON")->required();
  sw->add_option("--out", sweep_out, "output directory")->required();

  std::string report_in;
  CLI::App* rep = app.add_subcommand("report", "print the slope table");
  rep->add_option("--in", report_in, "directory with run/sweep output")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (assert_mode) {
      const int failures = decopt::run_acceptance(std::cout);
      return failures == 0 ? 0 : 1;
    }
    if (run->parsed()) {
      const auto cfg = decopt::ExperimentConfig::from_file(run_config);
      const auto result = decopt::run_experiment(cfg);
      decopt::export_run(run_out, result);
      std::cout << decopt::report(run_out);
      return 0;
    }
    if (sw->parsed()) {
      const auto result = decopt::sweep_from_file(sweep_config);
      decopt::export_sweep(sweep_out, result);
      std::cout << decopt::report(sweep_out);
      for (const auto& cell : result.cells)
        if (!cell.error.empty()) return 1;
      return 0;
    }
    if (rep->parsed()) {
      std::cout << decopt::report(report_in);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::cout << app.help();
  return 0;
}
