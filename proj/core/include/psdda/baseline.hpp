#pragma once

#include "psdda/psdda.hpp"

namespace psdda {

// Plain dual averaging over the delay-augmented network, without the
// push-sum reweighting (w is ignored; x_i = project(z_i, alpha)). Two
// weighting choices feed the comparison:
//   doubly_stochastic: lazy-Metropolis weights on the symmetrized active
//     graph, delays applied per direction (a simplified stand-in for delayed
//     DDA with doubly stochastic mixing);
//   column_stochastic: the same out-degree weights the push-sum run uses.
enum class BaselineWeighting { doubly_stochastic, column_stochastic };

// Symmetric doubly stochastic weights on the undirected closure of `active`:
// W_ij = 1/(2 max(deg_i, deg_j)) for linked pairs, remainder on the diagonal.
ColumnStochasticMatrix lazy_metropolis_matrix(const EdgeList& active_sym, int node_count);

// Directed closure helpers: every edge gains its reverse; a reverse edge
// inherits the forward edge's delay unless it exists with its own.
TimeVaryingDigraph symmetrize(const TimeVaryingDigraph& graph);
DelaySpec symmetrize_delays(const TimeVaryingDigraph& sym_graph, const DelaySpec& delays);

RunResult run_baseline_dda(const TimeVaryingDigraph& graph, const DelaySpec& delays,
                           const Objective& objective, const StepSchedule& schedule,
                           const FeasibleSet& set, long T, const Eigen::MatrixXd& x0,
                           BaselineWeighting weighting, const RunOptions& options = {});

}  // namespace psdda
