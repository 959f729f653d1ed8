#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "psdda/psdda.hpp"
#include "psdda/random.hpp"

namespace psdda {

// A (w, z) share travelling along one edge. A message sent at step s over an
// edge with delay tau is aggregated by the receiver at step s + tau + 1, the
// unique convention under which the queue model and the augmented-matrix
// model coincide.
struct InFlightMessage {
  Edge edge;
  double w_share = 0.0;
  Eigen::VectorXd z_share;
  long deliver_at = 0;
};

struct EventSimResult {
  ComputeTrajectory trajectory;       // snapshots at t = 0..T
  std::vector<double> queued_weight;  // total w held in flight, at t = 0..T
};

// Independent event-driven implementation of the delayed protocol: compute
// nodes split their state into out-degree shares, active edges queue shares
// with the edge latency, due shares are delivered and summed before the local
// subgradient is added and x is projected. FIFO per edge, deterministic
// iteration in canonical edge order.
EventSimResult simulate_event_driven(const TimeVaryingDigraph& graph, const DelaySpec& delays,
                                     const SubgradientSource& subgrads,
                                     const StepSchedule& schedule,
                                     const ProximalProjector& projector, long T,
                                     const Eigen::MatrixXd& x0);

struct TrajectoryComparison {
  bool pass = false;
  double max_deviation = 0.0;
  long worst_step = -1;
  std::string worst_component;  // e.g. "w[2]" or "z[1][0]"
};

// Componentwise comparison of two compute-node trajectories of equal shape.
TrajectoryComparison compare_trajectories(const ComputeTrajectory& a,
                                          const ComputeTrajectory& b, double tol);

// Seeded random (graph, delays) instances whose windows share one union by
// construction; used for the randomized equivalence and stochasticity suites.
struct RandomInstance {
  TimeVaryingDigraph graph;
  DelaySpec delays;
};

RandomInstance random_instance(SplitMix64& rng, int max_nodes = 5, int max_delay = 3,
                               int max_window = 3);

// Runs `count` random instances through both the matrix and the event model
// with a fixed pseudo-random subgradient sequence and compares (w, z, x).
Report equivalence_suite(int count, std::uint64_t seed, double tol, long max_T = 50);

}  // namespace psdda
