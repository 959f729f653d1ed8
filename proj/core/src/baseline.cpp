#include "psdda/baseline.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "psdda/errors.hpp"

namespace psdda {

ColumnStochasticMatrix lazy_metropolis_matrix(const EdgeList& active_sym, int node_count) {
  std::vector<int> degree(static_cast<std::size_t>(node_count), 0);
  std::set<std::pair<int, int>> links;  // undirected pairs (lo, hi)
  for (const Edge& e : active_sym) {
    const auto pair = std::minmax(e.src, e.dst);
    if (links.insert({pair.first, pair.second}).second) {
      ++degree[static_cast<std::size_t>(pair.first)];
      ++degree[static_cast<std::size_t>(pair.second)];
    }
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(node_count, node_count);
  for (const auto& [i, j] : links) {
    const double v = 1.0 / (2.0 * std::max(degree[static_cast<std::size_t>(i)],
                                           degree[static_cast<std::size_t>(j)]));
    w(i, j) = v;
    w(j, i) = v;
  }
  for (int i = 0; i < node_count; ++i) {
    w(i, i) = 1.0 - w.row(i).sum();
  }
  return ColumnStochasticMatrix(std::move(w));
}

TimeVaryingDigraph symmetrize(const TimeVaryingDigraph& graph) {
  std::vector<EdgeList> schedule;
  schedule.reserve(static_cast<std::size_t>(graph.schedule_length()));
  for (long t = 0; t < graph.schedule_length(); ++t) {
    std::set<Edge> step;
    for (const Edge& e : graph.edges_at(t)) {
      step.insert(e);
      step.insert({e.dst, e.src});
    }
    schedule.push_back(EdgeList::canonical({step.begin(), step.end()}));
  }
  return TimeVaryingDigraph(graph.node_count(), std::move(schedule), graph.window_length(),
                            graph.cyclic());
}

DelaySpec symmetrize_delays(const TimeVaryingDigraph& sym_graph, const DelaySpec& delays) {
  const EdgeList& sym_union = sym_graph.union_edges();
  std::vector<int> per_edge(static_cast<std::size_t>(sym_union.size()), 0);
  for (int r = 0; r < sym_union.size(); ++r) {
    const Edge e = sym_union[r];
    if (delays.edges().contains(e)) {
      per_edge[static_cast<std::size_t>(r)] = delays.delay(e);
    } else {
      per_edge[static_cast<std::size_t>(r)] = delays.delay(Edge{e.dst, e.src});
    }
  }
  return DelaySpec(sym_union, std::move(per_edge));
}

RunResult run_baseline_dda(const TimeVaryingDigraph& graph, const DelaySpec& delays,
                           const Objective& objective, const StepSchedule& schedule,
                           const FeasibleSet& set, long T, const Eigen::MatrixXd& x0,
                           BaselineWeighting weighting, const RunOptions& options) {
  if (T < 1) throw ConfigError("run needs T >= 1");
  const bool doubly = weighting == BaselineWeighting::doubly_stochastic;
  const TimeVaryingDigraph sim_graph = doubly ? symmetrize(graph) : graph;
  const DelaySpec sim_delays = doubly ? symmetrize_delays(sim_graph, delays) : delays;
  const AugmentedIndexMap map =
      build_index_map(sim_graph.union_edges(), sim_delays, sim_graph.node_count());

  const int m = sim_graph.node_count();
  const int n = map.n();
  const int d = static_cast<int>(x0.cols());
  const EuclideanProjector projector(set);
  const auto [x_star, f_star] = objective.optimum(set);

  // per-slot transition matrices for the chosen weighting
  std::vector<ColumnStochasticMatrix> slots;
  slots.reserve(static_cast<std::size_t>(sim_graph.schedule_length()));
  for (long s = 0; s < sim_graph.schedule_length(); ++s) {
    const EdgeList& active = sim_graph.edges_at(s);
    ColumnStochasticMatrix w = doubly ? lazy_metropolis_matrix(active, m)
                                      : build_p_matrix(active, m);
    slots.push_back(augment_matrix(w, active, map, sim_delays));
  }
  auto q_at = [&](long t) -> const ColumnStochasticMatrix& {
    if (!sim_graph.cyclic() && t >= sim_graph.schedule_length()) {
      throw ConfigError("time " + std::to_string(t) + " past the end of the schedule");
    }
    return slots[static_cast<std::size_t>(t % sim_graph.schedule_length())];
  };

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, d);
  Eigen::MatrixXd x = x0;
  Eigen::MatrixXd x_sum = Eigen::MatrixXd::Zero(m, d);

  RunResult result;
  if (options.diagnostics) result.trajectory.steps.reserve(static_cast<std::size_t>(T));
  auto snapshot = [&]() {
    result.states.w.push_back(Eigen::VectorXd::Ones(m));
    result.states.z.push_back(z.topRows(m));
    result.states.x.push_back(x);
  };
  if (options.record_states) snapshot();

  for (long t = 0; t < T; ++t) {
    Eigen::MatrixXd g(m, d);
    for (int i = 0; i < m; ++i) {
      g.row(i) = objective.subgradient(i, x.row(i).transpose()).transpose();
    }
    z = (q_at(t).matrix() * z).eval();
    z.topRows(m) += g;
    const double alpha = schedule.alpha(t + 1);
    for (int i = 0; i < m; ++i) {
      x.row(i) = projector.project(z.row(i).transpose(), alpha).transpose();
    }
    x_sum += x;
    if (options.record_states) snapshot();

    if (options.diagnostics) {
      StepDiagnostics diag;
      diag.t = t + 1;
      diag.alpha = alpha;
      diag.z_bar = z.colwise().sum().transpose() / static_cast<double>(m);
      diag.y = projector.project(diag.z_bar, alpha);
      diag.network_error.resize(m);
      for (int i = 0; i < m; ++i) {
        diag.network_error[i] = (z.row(i).transpose() - diag.z_bar).norm();
      }
      const Eigen::MatrixXd x_hat = x_sum / static_cast<double>(t + 1);
      diag.f_err.resize(m);
      for (int i = 0; i < m; ++i) {
        diag.f_err[i] = objective.average_value(x_hat.row(i).transpose()) - f_star;
      }
      result.trajectory.steps.push_back(std::move(diag));
    }
  }

  result.x_hat = x_sum / static_cast<double>(T);
  result.final_state.t = T;
  result.final_state.m = m;
  result.final_state.w = Eigen::VectorXd::Ones(n);
  result.final_state.z = std::move(z);
  result.final_state.x = std::move(x);
  result.final_state.x_sum = std::move(x_sum);
  return result;
}

}  // namespace psdda
