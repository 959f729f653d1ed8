// Command line driver for the delayed push-sum dual averaging simulator.
//
// Subcommands:
//   run        execute one experiment, emit a metrics CSV
//   compare    run PS-DDA against the two plain dual-averaging baselines
//   constants  print the contraction constants table for (m, B, tau_max)
//   verify     run the validation suite on a configured instance
//
// Exit codes: 0 success, 1 validation failure, 2 runtime fault.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psdda/errors.hpp"
#include "psdda/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::optional<int> tau_edge;
  std::optional<long> T;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> step_kind;
  std::optional<double> lambda_coeff;
  std::optional<std::string> delta_mode;
  std::optional<std::string> objective_kind;
  std::optional<double> radius;
  std::optional<double> x_true;
  std::optional<long> stride;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file (see README for keys)");
  cmd->add_option("--preset", args.preset, "instance preset: example1, quad8, sensor8");
  cmd->add_option("--tau-edge", args.tau_edge, "uniform per-edge delay override");
  cmd->add_option("-T,--steps", args.T, "iteration span");
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--step", args.step_kind, "step size kind: basic or optimal");
  cmd->add_option("--Lambda", args.lambda_coeff, "basic step size coefficient");
  cmd->add_option("--delta-mode", args.delta_mode,
                  "delta for the optimal step size: lower_bound or empirical");
  cmd->add_option("--objective", args.objective_kind, "objective kind: quadratic or sensor");
  cmd->add_option("--radius", args.radius, "l1 ball radius (config key \"h\")");
  cmd->add_option("--x-true", args.x_true, "sensor ground truth");
  cmd->add_option("--stride", args.stride, "sampling stride (0 = auto)");
}

psdda::RunConfig resolve_config(const CommonArgs& args) {
  psdda::RunConfig config;
  if (!args.config_path.empty()) config = psdda::load_config(args.config_path);
  if (!args.preset.empty()) config.preset = args.preset;
  if (args.tau_edge) {
    config.delays.uniform = *args.tau_edge;
    config.delays.per_edge.clear();
  }
  if (args.T) config.T = *args.T;
  if (args.seed) config.seed = *args.seed;
  if (args.step_kind) config.step.kind = *args.step_kind;
  if (args.lambda_coeff) config.step.lambda_coeff = *args.lambda_coeff;
  if (args.delta_mode) config.step.delta_mode = *args.delta_mode;
  if (args.objective_kind) config.objective.kind = *args.objective_kind;
  if (args.radius) config.objective.radius = *args.radius;
  if (args.x_true) config.objective.x_true = *args.x_true;
  if (args.stride) config.stride = *args.stride;
  if (config.preset.empty() && config.schedule.empty()) {
    throw psdda::ConfigError("no instance given: pass --preset or --config");
  }
  return config;
}

void emit(const psdda::MetricsTable& table, const std::string& output) {
  if (output.empty() || output == "-") {
    psdda::write_csv(table, std::cout);
  } else {
    psdda::write_csv(table, std::filesystem::path(output));
    std::cerr << "wrote " << output << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Push-sum distributed dual averaging over delayed time-varying digraphs"};
  app.require_subcommand(1);

  CommonArgs run_args, verify_args, compare_args;
  std::string run_output, compare_prefix = "compare";

  CLI::App* cmd_run = app.add_subcommand("run", "execute one experiment");
  add_common_options(cmd_run, run_args);
  cmd_run->add_option("-o,--output", run_output, "CSV output path ('-' for stdout)");

  CLI::App* cmd_compare =
      app.add_subcommand("compare", "PS-DDA vs the plain dual-averaging baselines");
  add_common_options(cmd_compare, compare_args);
  cmd_compare->add_option("-o,--output-prefix", compare_prefix,
                          "prefix for <prefix>_{psdda,dda_doubly,dda_column}.csv");

  int c_m = 0, c_B = 1, c_tau = 0;
  double c_R = 1.0, c_L = 1.0;
  std::vector<long> c_horizons{100, 1000, 10000};
  CLI::App* cmd_constants = app.add_subcommand("constants", "contraction constants table");
  cmd_constants->add_option("-m,--nodes", c_m, "compute node count")->required();
  cmd_constants->add_option("-B,--window", c_B, "window length")->required();
  cmd_constants->add_option("--tau-max", c_tau, "maximum per-edge delay")->required();
  cmd_constants->add_option("-R", c_R, "radius certificate (sqrt of sup psi)");
  cmd_constants->add_option("-L", c_L, "Lipschitz bound");
  cmd_constants->add_option("--at", c_horizons, "horizons for the bound rows");

  CLI::App* cmd_verify = app.add_subcommand("verify", "validation suite for an instance");
  add_common_options(cmd_verify, verify_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      psdda::RunConfig config = resolve_config(run_args);
      if (!run_output.empty()) config.output = run_output;
      const psdda::ExperimentResult result = psdda::run_experiment(config);
      emit(result.table, config.output);
    } else if (cmd_compare->parsed()) {
      const psdda::RunConfig config = resolve_config(compare_args);
      const psdda::CompareResult result = psdda::compare_algorithms(config);
      const std::pair<const char*, const psdda::ExperimentResult*> outputs[] = {
          {"psdda", &result.psdda},
          {"dda_doubly", &result.dda_doubly},
          {"dda_column", &result.dda_column},
      };
      for (const auto& [name, res] : outputs) {
        const std::string path = compare_prefix + "_" + name + ".csv";
        psdda::write_csv(res->table, std::filesystem::path(path));
        std::cout << name << ": final max_f_err = "
                  << psdda::format_double(res->summary.max_f_err_final) << " -> " << path
                  << "\n";
      }
    } else if (cmd_constants->parsed()) {
      std::cout << psdda::constants_report(c_m, c_B, c_tau, c_R, c_L, c_horizons);
    } else if (cmd_verify->parsed()) {
      const psdda::RunConfig config = resolve_config(verify_args);
      const psdda::Report report = psdda::verify(config);
      report.print(std::cout);
      if (!report.pass()) return 1;
    }
  } catch (const psdda::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
