#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cbdyn/errors.hpp"
#include "cbdyn/harness/config.hpp"
#include "cbdyn/harness/studies.hpp"

namespace {

int exit_code(cbdyn::ErrorKind kind) {
  switch (kind) {
    case cbdyn::ErrorKind::Precondition: return 2;
    case cbdyn::ErrorKind::Numerical: return 3;
    case cbdyn::ErrorKind::Config: return 4;
  }
  return 3;
}

void print_rate(const std::string& what, const cbdyn::RateSummary& rate) {
  if (rate.fit) {
    std::printf("%s: slope %.4f, constant %.4g, log-residual %.3g over %zu epsilons\n", what.c_str(), rate.fit->slope,
                rate.fit->constant(), rate.fit->residual, rate.fit->values.size());
  } else {
    std::printf("%s: %s\n", what.c_str(), rate.note.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Atomistic elastodynamics laboratory: residual and convergence studies, stability maps, Garding checks"};
  app.footer(cbdyn::csv_column_help() +
             "\n\nExit codes: 0 success, 2 precondition/hypothesis failure, 3 numerical failure, 4 config error");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Scenario JSON file")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "RNG seed (overrides seed)");
    sub->add_option("--threads", threads, "Worker threads for the epsilon loop")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", quiet, "Only report errors");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "Integrate one trajectory at the first epsilon");
  CLI::App* residual = app.add_subcommand("residual", "Residual decay study");
  CLI::App* converge = app.add_subcommand("converge", "Atomistic-to-continuum convergence study");
  CLI::App* stability = app.add_subcommand("stability-map", "lambda_LH / lambda_atom / lambda_eps over a deformation grid");
  CLI::App* garding = app.add_subcommand("garding", "Discrete Garding verifier across epsilons");
  for (CLI::App* sub : {simulate, residual, converge, stability, garding}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    const cbdyn::ScenarioConfig config = cbdyn::load_scenario(config_path);
    cbdyn::StudyOptions options;
    options.threads = threads;
    if (!out_dir.empty()) options.output_dir = out_dir;
    for (CLI::App* sub : {simulate, residual, converge, stability, garding}) {
      if (sub->parsed() && sub->count("--seed")) options.seed = seed;
    }
    if (!quiet) {
      for (const auto& w : config.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    }

    if (residual->parsed()) {
      const auto study = cbdyn::run_residual_study(config, options);
      if (!quiet) {
        std::cout << study.table.str();
        print_rate("residual rate", study.rate);
      }
    } else if (converge->parsed()) {
      const auto study = cbdyn::run_convergence_study(config, options);
      if (!quiet) {
        std::cout << study.table.str();
        print_rate("convergence rate", study.rate);
      }
    } else if (stability->parsed()) {
      const auto map = cbdyn::run_stability_map(config, options);
      if (!quiet) std::cout << map.table.str();
    } else if (garding->parsed()) {
      const auto study = cbdyn::run_garding_study(config, options);
      if (!quiet) std::cout << study.table.str();
    } else if (simulate->parsed()) {
      const auto sim = cbdyn::run_simulation(config, options);
      if (!quiet) {
        std::printf("simulate: epsilon %.6g, status %s, %zu diagnostic samples\n", sim.epsilon, sim.status.c_str(),
                    sim.diagnostics.rows().size());
      }
    }
  } catch (const cbdyn::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
