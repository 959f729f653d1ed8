#include "psdda/oracle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "psdda/errors.hpp"

namespace psdda {

EventSimResult simulate_event_driven(const TimeVaryingDigraph& graph, const DelaySpec& delays,
                                     const SubgradientSource& subgrads,
                                     const StepSchedule& schedule,
                                     const ProximalProjector& projector, long T,
                                     const Eigen::MatrixXd& x0) {
  if (T < 1) throw ConfigError("simulation needs T >= 1");
  if (delays.edges() != graph.union_edges()) {
    throw ConfigError("delay spec must list the graph's union edges in the same order");
  }
  const int m = graph.node_count();
  const int d = static_cast<int>(x0.cols());
  if (x0.rows() != m) throw ConfigError("x0 must have one row per compute node");
  for (int i = 0; i < m; ++i) {
    if (!projector.domain().contains(x0.row(i).transpose())) {
      throw ConfigError("x0 row " + std::to_string(i) + " is infeasible");
    }
  }
  const EdgeList& union_edges = delays.edges();

  Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(m, d);
  Eigen::MatrixXd x = x0;

  // one FIFO per union edge; front messages are the earliest deliveries
  std::vector<std::deque<InFlightMessage>> channels(
      static_cast<std::size_t>(union_edges.size()));

  EventSimResult result;
  auto snapshot = [&]() {
    result.trajectory.w.push_back(w);
    result.trajectory.z.push_back(z);
    result.trajectory.x.push_back(x);
    double queued = 0.0;
    for (const auto& ch : channels) {
      for (const auto& msg : ch) queued += msg.w_share;
    }
    result.queued_weight.push_back(queued);
  };
  snapshot();

  for (long t = 0; t < T; ++t) {
    const EdgeList& active = graph.edges_at(t);

    Eigen::VectorXd w_next(m);
    Eigen::MatrixXd z_next(m, d);
    for (int j = 0; j < m; ++j) {
      const double split = 1.0 / out_degree(active, j, m);
      w_next[j] = w[j] * split;  // self share applies immediately
      z_next.row(j) = z.row(j) * split;
    }

    // shares on active edges enter the channel with the edge latency
    for (int r = 0; r < union_edges.size(); ++r) {
      const Edge e = union_edges[r];
      if (!active.contains(e)) continue;
      const double split = 1.0 / out_degree(active, e.src, m);
      channels[static_cast<std::size_t>(r)].push_back(
          {e, w[e.src] * split, z.row(e.src).transpose() * split,
           t + delays.delay(r) + 1});
    }

    // due messages are delivered before the local subgradient is added
    for (int r = 0; r < union_edges.size(); ++r) {
      auto& ch = channels[static_cast<std::size_t>(r)];
      while (!ch.empty() && ch.front().deliver_at == t + 1) {
        w_next[ch.front().edge.dst] += ch.front().w_share;
        z_next.row(ch.front().edge.dst) += ch.front().z_share.transpose();
        ch.pop_front();
      }
    }

    for (int j = 0; j < m; ++j) {
      z_next.row(j) += subgrads(j, t, x.row(j).transpose()).transpose();
    }

    w = std::move(w_next);
    z = std::move(z_next);
    const double alpha = schedule.alpha(t + 1);
    for (int j = 0; j < m; ++j) {
      if (!(w[j] > 0.0)) {
        throw std::logic_error("compute node " + std::to_string(j) +
                               " lost its weight at t = " + std::to_string(t + 1));
      }
      x.row(j) = projector.project(z.row(j).transpose() / w[j], alpha).transpose();
    }
    snapshot();
  }
  return result;
}

namespace {

void compare_block(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, long step,
                   const char* label, TrajectoryComparison& out) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double dev = std::abs(a(i, j) - b(i, j));
      if (dev > out.max_deviation) {
        out.max_deviation = dev;
        out.worst_step = step;
        out.worst_component = std::string(label) + "[" + std::to_string(i) + "]" +
                              (a.cols() > 1 ? "[" + std::to_string(j) + "]" : "");
      }
    }
  }
}

}  // namespace

TrajectoryComparison compare_trajectories(const ComputeTrajectory& a,
                                          const ComputeTrajectory& b, double tol) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("trajectories have different lengths");
  }
  TrajectoryComparison out;
  for (long s = 0; s < a.length(); ++s) {
    const auto k = static_cast<std::size_t>(s);
    if (a.w[k].size() != b.w[k].size() || a.z[k].rows() != b.z[k].rows() ||
        a.z[k].cols() != b.z[k].cols()) {
      throw std::invalid_argument("trajectory shapes differ at step " + std::to_string(s));
    }
    compare_block(a.w[k], b.w[k], s, "w", out);
    compare_block(a.z[k], b.z[k], s, "z", out);
    compare_block(a.x[k], b.x[k], s, "x", out);
  }
  out.pass = out.max_deviation <= tol;
  return out;
}

RandomInstance random_instance(SplitMix64& rng, int max_nodes, int max_delay, int max_window) {
  const int m = rng.uniform_int(2, max_nodes);
  const int window = rng.uniform_int(1, max_window);

  // random union edge set, at least one edge, at most 2m
  std::set<Edge> union_set;
  const int want = rng.uniform_int(1, 2 * m);
  for (int k = 0; k < 4 * want && static_cast<int>(union_set.size()) < want; ++k) {
    const int i = rng.uniform_int(0, m - 1);
    const int j = rng.uniform_int(0, m - 1);
    if (i != j) union_set.insert({i, j});
  }
  if (union_set.empty()) union_set.insert({0, 1});
  const EdgeList union_edges = EdgeList::canonical({union_set.begin(), union_set.end()});

  // each window covers the union: every edge lands in at least one slot
  const int windows = rng.uniform_int(1, 2);
  std::vector<std::vector<Edge>> slots(static_cast<std::size_t>(window * windows));
  for (int w = 0; w < windows; ++w) {
    for (const Edge& e : union_edges) {
      bool placed = false;
      for (int b = 0; b < window; ++b) {
        if (rng.uniform01() < 0.5) {
          slots[static_cast<std::size_t>(w) * window + b].push_back(e);
          placed = true;
        }
      }
      if (!placed) {
        const int b = rng.uniform_int(0, window - 1);
        slots[static_cast<std::size_t>(w) * window + b].push_back(e);
      }
    }
  }
  std::vector<EdgeList> schedule;
  schedule.reserve(slots.size());
  for (auto& s : slots) schedule.push_back(EdgeList::canonical(std::move(s)));

  TimeVaryingDigraph graph(m, std::move(schedule), window, /*cyclic=*/true);
  std::vector<int> per_edge(static_cast<std::size_t>(union_edges.size()));
  for (auto& tau : per_edge) tau = rng.uniform_int(0, max_delay);
  DelaySpec delays(graph.union_edges(), std::move(per_edge));
  return {std::move(graph), std::move(delays)};
}

Report equivalence_suite(int count, std::uint64_t seed, double tol, long max_T) {
  Report report;
  SplitMix64 rng(seed);
  for (int k = 0; k < count; ++k) {
    RandomInstance inst = random_instance(rng);
    const int m = inst.graph.node_count();
    const int d = rng.uniform_int(1, 3);
    const long T = rng.uniform_int(10, static_cast<int>(max_T));
    const double h = 3.0;
    const FeasibleSet set = FeasibleSet::l1_ball(h);
    const EuclideanProjector projector(set);
    const StepSchedule schedule = StepSchedule::basic(1.0);
    const SubgradientSource source = fixed_random_source(d, rng.next());
    const Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(m, d);

    AugmentedSystem system(inst.graph, inst.delays);
    RunOptions options;
    options.diagnostics = false;
    options.record_states = true;
    const RunResult matrix_run =
        run(system, source, schedule, projector, T, x0, nullptr, 0.0, options);
    const EventSimResult event_run = simulate_event_driven(
        inst.graph, inst.delays, source, schedule, projector, T, x0);

    const TrajectoryComparison cmp =
        compare_trajectories(matrix_run.states, event_run.trajectory, tol);
    std::string detail = "m=" + std::to_string(m) + " tau=" +
                         std::to_string(inst.delays.tau_total()) + " T=" + std::to_string(T) +
                         " max_dev=" + std::to_string(cmp.max_deviation);
    if (!cmp.pass) {
      detail += " at step " + std::to_string(cmp.worst_step) + " " + cmp.worst_component;
    }
    report.add("instance " + std::to_string(k), cmp.pass, detail);
  }
  return report;
}

}  // namespace psdda
