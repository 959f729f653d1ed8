#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "psdda/delay_augment.hpp"
#include "psdda/objectives.hpp"

namespace psdda {

// Projection induced by a proximal function psi:
//   project(v, alpha) = argmin_{x in X} { <v, x> + psi(x)/alpha }.
// Only the Euclidean psi ships; the interface admits other geometries.
class ProximalProjector {
public:
  virtual ~ProximalProjector() = default;
  virtual Eigen::VectorXd project(const Eigen::VectorXd& v, double alpha) const = 0;
  virtual double psi(const Eigen::VectorXd& x) const = 0;
  virtual const FeasibleSet& domain() const = 0;
};

// psi(x) = 0.5*||x||^2, for which the projection is the Euclidean projection
// of -alpha*v onto the set.
class EuclideanProjector final : public ProximalProjector {
public:
  explicit EuclideanProjector(FeasibleSet set) : set_(set) {}
  Eigen::VectorXd project(const Eigen::VectorXd& v, double alpha) const override;
  double psi(const Eigen::VectorXd& x) const override { return 0.5 * x.squaredNorm(); }
  const FeasibleSet& domain() const override { return set_; }

private:
  FeasibleSet set_;
};

// Non-increasing step size alpha(t) for t >= 1.
//   basic:   Lambda / sqrt(t)
//   optimal: R / (L sqrt(1 + 6 Gamma)) / sqrt(t)
//   custom:  any user-supplied non-increasing positive sequence
class StepSchedule {
public:
  enum class Kind { basic, optimal, custom };

  static StepSchedule basic(double lambda_coeff);
  static StepSchedule optimal(double R, double L, double gamma);
  static StepSchedule custom(std::function<double(long)> alpha);

  double alpha(long t) const;  // throws for t < 1
  Kind kind() const { return kind_; }
  double coefficient() const { return coefficient_; }  // NaN for custom

private:
  Kind kind_ = Kind::basic;
  double coefficient_ = 1.0;
  std::function<double(long)> custom_;
};

// Full algorithm state over the augmented network: push-sum weights w,
// dual variables z for all m+tau nodes, primal estimates x and their running
// sums for the compute nodes only.
struct SystemState {
  long t = 0;
  int m = 0;                // compute nodes; w,z have m+tau rows
  Eigen::VectorXd w;        // m+tau
  Eigen::MatrixXd z;        // (m+tau) x d
  Eigen::MatrixXd x;        // m x d
  Eigen::MatrixXd x_sum;    // m x d, sum of x(1..t)

  int tau() const { return static_cast<int>(w.size()) - m; }
  int dimension() const { return static_cast<int>(z.cols()); }
  Eigen::MatrixXd x_hat() const;  // running average x_sum / t, t >= 1
};

// w = 1 on compute nodes and 0 on delay nodes, z = 0, x = x0 (all rows
// feasible), t = 0.
SystemState init_state(int m, int tau, int d, const Eigen::MatrixXd& x0,
                       const FeasibleSet& set);

// One synchronous round: w <- Q w; z <- Q z + [g; 0]; x_i <- project(z_i/w_i)
// for compute nodes. Throws if a compute-node weight is not positive or the
// subgradients are not finite.
SystemState step(SystemState state, const ColumnStochasticMatrix& q,
                 const Eigen::MatrixXd& subgrads, const StepSchedule& schedule,
                 const ProximalProjector& projector);

// Optimal-step error bound 2 R L sqrt(1 + 6 Gamma) / sqrt(T).
double error_bound(long T, double R, double L, double gamma);

// Produces g_i(t); the third argument is x_i(t) for sources that are real
// subgradients, ignored by fixed test sequences.
using SubgradientSource =
    std::function<Eigen::VectorXd(int node, long t, const Eigen::VectorXd& x)>;

SubgradientSource objective_source(const Objective& objective);

// Fixed pseudo-random sequence g_i(t) in [-scale, scale]^d, independent of x;
// value depends only on (seed, node, t).
SubgradientSource fixed_random_source(int d, std::uint64_t seed, double scale = 1.0);

struct StepDiagnostics {
  long t = 0;
  double alpha = 0.0;
  Eigen::VectorXd z_bar;          // d: (1/m) sum over all m+tau nodes of z_i
  Eigen::VectorXd y;              // d: project(z_bar, alpha)
  Eigen::VectorXd network_error;  // m: ||z_i/w_i - z_bar||
  Eigen::VectorXd f_err;          // m: f(x_hat_i(t)) - f*, NaN without an objective
};

struct RunTrajectory {
  std::vector<StepDiagnostics> steps;  // steps[k] is diagnostics at t = k+1
  const StepDiagnostics& at(long t) const;  // 1-based
  long length() const { return static_cast<long>(steps.size()); }
};

// Compute-node state snapshots at t = 0..T (used for cross-model checks).
struct ComputeTrajectory {
  std::vector<Eigen::VectorXd> w;  // m
  std::vector<Eigen::MatrixXd> z;  // m x d
  std::vector<Eigen::MatrixXd> x;  // m x d
  long length() const { return static_cast<long>(w.size()); }
};

struct RunOptions {
  bool diagnostics = true;
  bool record_states = false;
};

struct RunResult {
  RunTrajectory trajectory;
  ComputeTrajectory states;  // empty unless record_states
  SystemState final_state;
  Eigen::MatrixXd x_hat;     // m x d running average at T
};

// Executes T rounds of the delayed push-sum dual averaging iteration, cycling
// the schedule. The objective pointer is only used for f_err diagnostics.
RunResult run(const AugmentedSystem& system, const SubgradientSource& subgrads,
              const StepSchedule& schedule, const ProximalProjector& projector, long T,
              const Eigen::MatrixXd& x0, const Objective* objective = nullptr,
              double f_star = 0.0, const RunOptions& options = {});

// Convenience overload matching the natural inputs.
RunResult run(const TimeVaryingDigraph& graph, const DelaySpec& delays,
              const Objective& objective, const StepSchedule& schedule,
              const FeasibleSet& set, long T, const Eigen::MatrixXd& x0,
              const RunOptions& options = {});

// Certified upper envelope on f(x_hat_node(T)) - f(x*) assembled from the
// recorded per-step network errors:
//   (L/T) sum_t alpha(t) e_node(t) + (L^2/2T) sum_t alpha(t)
//   + psi(x*) / (T alpha(T)) + (2L/mT) sum_t sum_j alpha(t) e_j(t).
double suboptimality_envelope(const RunTrajectory& trajectory, int node, long T, double L,
                              double psi_xstar);

}  // namespace psdda
