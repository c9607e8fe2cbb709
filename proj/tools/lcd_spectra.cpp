// Command-line front end: run, resume, oracle, fit and sweep.

#include <CLI11.hpp>
#include <iostream>

#include "lcd/errors.hpp"
#include "lcd/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Decay-rate experiments for a penalized liquid-crystal flow on a periodic box"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Integrate a configuration and fit decay exponents");
  run->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);

  std::string checkpoint_path;
  auto* resume = app.add_subcommand("resume", "Continue a run from a checkpoint");
  resume->add_option("checkpoint", checkpoint_path, "Checkpoint file")->required()->check(CLI::ExistingFile);
  resume->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);

  lcd::OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Heat-semigroup L2 norm of a radial spectrum");
  oracle->add_option("--profile", oracle_args.profile, "flat or gaussian")
      ->check(CLI::IsMember({"flat", "gaussian"}));
  oracle->add_option("--level", oracle_args.level, "Spectrum amplitude");
  oracle->add_option("--cutoff", oracle_args.cutoff, "Flat-profile cutoff radius");
  oracle->add_option("--width", oracle_args.width, "Gaussian width");
  oracle->add_option("--t", oracle_args.times, "Times to evaluate")->required();

  std::string series_path;
  std::string out_path;
  double t_lo = 5.0;
  double t_hi = -1.0;
  auto* fit = app.add_subcommand("fit", "Re-fit an existing series.csv");
  fit->add_option("series", series_path, "series.csv")->required()->check(CLI::ExistingFile);
  fit->add_option("--config", config_path, "Configuration supplying judged series and tolerances")
      ->check(CLI::ExistingFile);
  fit->add_option("--t-lo", t_lo, "Fit window start");
  fit->add_option("--t-hi", t_hi, "Fit window end (default: configuration or last sample)");
  fit->add_option("-o,--output", out_path, "Write the summary here instead of stdout");

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "Run the Cartesian product of a sweep file");
  sweep->add_option("sweep", sweep_path, "Sweep file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? lcd::kExitPass : lcd::kExitError;
  }

  try {
    if (run->parsed()) return lcd::cli_run(config_path, std::cout);
    if (resume->parsed()) return lcd::cli_resume(checkpoint_path, config_path, std::cout);
    if (oracle->parsed()) return lcd::cli_oracle(oracle_args, std::cout, std::cerr);
    if (fit->parsed()) return lcd::cli_fit(series_path, t_lo, t_hi, config_path, out_path, std::cout);
    if (sweep->parsed()) return lcd::cli_sweep(sweep_path, std::cout);
  } catch (const lcd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lcd::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lcd::kExitError;
  }
  return lcd::kExitError;
}
