#pragma once

#include <optional>
#include <string>

#include "psdda/baseline.hpp"
#include "psdda/config.hpp"
#include "psdda/metrics.hpp"
#include "psdda/report.hpp"

namespace psdda {

struct ExperimentSummary {
  std::optional<ConvergenceConstants> constants;
  double R = 0.0;
  double L = 0.0;
  double f_star = 0.0;
  double delta_empirical = 0.0;
  double gamma_empirical = 0.0;
  double max_f_err_final = 0.0;
  double bound_final = 0.0;
  double envelope_max_final = 0.0;  // worst-node certified envelope at T
};

struct ExperimentResult {
  MetricsTable table;
  ExperimentSummary summary;
  RunResult run;
  Instance instance;
};

// Executes the configured PS-DDA run and assembles the metrics table: one
// record per (sampled t, node), plus '#' summary notes with the constants.
ExperimentResult run_experiment(const RunConfig& config);

// Same instance and table schema, driven by the plain dual-averaging baseline.
ExperimentResult baseline_dda(const RunConfig& config, BaselineWeighting weighting);

struct CompareResult {
  ExperimentResult psdda;
  ExperimentResult dda_doubly;
  ExperimentResult dda_column;
};

CompareResult compare_algorithms(const RunConfig& config);

// Table of the contraction constants and derived step sizes / bounds for the
// given parameters; `horizons` selects the T values of the bound rows.
std::string constants_report(int m, int window, int tau_max, double R, double L,
                             const std::vector<long>& horizons = {100, 1000, 10000});

// Full validation sweep over the configured instance: connectivity, column
// stochasticity, golden matrices (example1), event-model equivalence at
// reduced T, conservation and feasibility invariants.
Report verify(const RunConfig& config);

}  // namespace psdda
