#include "psdda/psdda.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "psdda/errors.hpp"
#include "psdda/random.hpp"

namespace psdda {

Eigen::VectorXd EuclideanProjector::project(const Eigen::VectorXd& v, double alpha) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("projection step size must be positive");
  return set_.project(-alpha * v);
}

StepSchedule StepSchedule::basic(double lambda_coeff) {
  if (!(lambda_coeff > 0.0)) throw ConfigError("basic step size needs Lambda > 0");
  StepSchedule s;
  s.kind_ = Kind::basic;
  s.coefficient_ = lambda_coeff;
  return s;
}

StepSchedule StepSchedule::optimal(double R, double L, double gamma) {
  if (!(R > 0.0) || !(L > 0.0) || !(gamma >= 0.0)) {
    throw ConfigError("optimal step size needs R > 0, L > 0, Gamma >= 0");
  }
  const double coeff = R / (L * std::sqrt(1.0 + 6.0 * gamma));
  if (!(coeff > 0.0)) {
    throw ConfigError("optimal step size collapsed to zero; Gamma too large");
  }
  StepSchedule s;
  s.kind_ = Kind::optimal;
  s.coefficient_ = coeff;
  return s;
}

StepSchedule StepSchedule::custom(std::function<double(long)> alpha) {
  StepSchedule s;
  s.kind_ = Kind::custom;
  s.coefficient_ = std::numeric_limits<double>::quiet_NaN();
  s.custom_ = std::move(alpha);
  return s;
}

double StepSchedule::alpha(long t) const {
  if (t < 1) throw std::domain_error("step size is defined for t >= 1");
  if (kind_ == Kind::custom) return custom_(t);
  return coefficient_ / std::sqrt(static_cast<double>(t));
}

Eigen::MatrixXd SystemState::x_hat() const {
  if (t < 1) throw std::logic_error("running average needs at least one step");
  return x_sum / static_cast<double>(t);
}

SystemState init_state(int m, int tau, int d, const Eigen::MatrixXd& x0,
                       const FeasibleSet& set) {
  if (m < 1 || tau < 0 || d < 1) throw ConfigError("state dimensions must be positive");
  if (x0.rows() != m || x0.cols() != d) {
    throw ConfigError("x0 must be " + std::to_string(m) + "x" + std::to_string(d));
  }
  for (int i = 0; i < m; ++i) {
    if (!set.contains(x0.row(i).transpose())) {
      throw ConfigError("x0 row " + std::to_string(i) + " is infeasible");
    }
  }
  SystemState s;
  s.t = 0;
  s.m = m;
  s.w = Eigen::VectorXd::Zero(m + tau);
  s.w.head(m).setOnes();
  s.z = Eigen::MatrixXd::Zero(m + tau, d);
  s.x = x0;
  s.x_sum = Eigen::MatrixXd::Zero(m, d);
  return s;
}

SystemState step(SystemState state, const ColumnStochasticMatrix& q,
                 const Eigen::MatrixXd& subgrads, const StepSchedule& schedule,
                 const ProximalProjector& projector) {
  const int n = static_cast<int>(state.w.size());
  const int m = state.m;
  const int d = state.dimension();
  if (q.dim() != n) {
    throw std::invalid_argument("transition matrix dimension " + std::to_string(q.dim()) +
                                " does not match state dimension " + std::to_string(n));
  }
  if (subgrads.rows() != m || subgrads.cols() != d) {
    throw std::invalid_argument("subgradients must be m x d");
  }
  if (!subgrads.allFinite()) throw std::invalid_argument("non-finite subgradients");

  state.w = (q.matrix() * state.w).eval();
  state.z = (q.matrix() * state.z).eval();
  state.z.topRows(m) += subgrads;  // delay nodes carry zero subgradients
  state.t += 1;

  const double alpha = schedule.alpha(state.t);
  for (int i = 0; i < m; ++i) {
    if (!(state.w[i] > 0.0)) {
      throw std::logic_error("compute node " + std::to_string(i) +
                             " lost its push-sum weight at t = " + std::to_string(state.t));
    }
    state.x.row(i) =
        projector.project(state.z.row(i).transpose() / state.w[i], alpha).transpose();
  }
  state.x_sum += state.x;
  return state;
}

double error_bound(long T, double R, double L, double gamma) {
  if (T < 1) throw std::invalid_argument("error bound needs T >= 1");
  return 2.0 * R * L * std::sqrt(1.0 + 6.0 * gamma) / std::sqrt(static_cast<double>(T));
}

SubgradientSource objective_source(const Objective& objective) {
  return [&objective](int node, long /*t*/, const Eigen::VectorXd& x) {
    return objective.subgradient(node, x);
  };
}

SubgradientSource fixed_random_source(int d, std::uint64_t seed, double scale) {
  return [d, seed, scale](int node, long t, const Eigen::VectorXd& /*x*/) {
    SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(node + 1)) ^
                   (0xc2b2ae3d27d4eb4fULL * static_cast<std::uint64_t>(t + 1)));
    Eigen::VectorXd g(d);
    for (int k = 0; k < d; ++k) g[k] = rng.uniform(-scale, scale);
    return g;
  };
}

const StepDiagnostics& RunTrajectory::at(long t) const {
  if (t < 1 || t > length()) throw std::out_of_range("no diagnostics recorded at t");
  return steps[static_cast<std::size_t>(t - 1)];
}

RunResult run(const AugmentedSystem& system, const SubgradientSource& subgrads,
              const StepSchedule& schedule, const ProximalProjector& projector, long T,
              const Eigen::MatrixXd& x0, const Objective* objective, double f_star,
              const RunOptions& options) {
  if (T < 1) throw ConfigError("run needs T >= 1");
  const int m = system.m();
  const int tau = system.tau();
  const int d = static_cast<int>(x0.cols());

  SystemState state = init_state(m, tau, d, x0, projector.domain());
  RunResult result;
  if (options.diagnostics) result.trajectory.steps.reserve(static_cast<std::size_t>(T));

  auto snapshot = [&]() {
    result.states.w.push_back(state.w.head(m));
    result.states.z.push_back(state.z.topRows(m));
    result.states.x.push_back(state.x);
  };
  if (options.record_states) snapshot();

  Eigen::MatrixXd g(m, d);
  for (long t = 0; t < T; ++t) {
    for (int i = 0; i < m; ++i) {
      g.row(i) = subgrads(i, t, state.x.row(i).transpose()).transpose();
    }
    state = step(std::move(state), system.q_at(t), g, schedule, projector);
    if (options.record_states) snapshot();

    if (options.diagnostics) {
      StepDiagnostics diag;
      diag.t = state.t;
      diag.alpha = schedule.alpha(state.t);
      diag.z_bar = state.z.colwise().sum().transpose() / static_cast<double>(m);
      diag.y = projector.project(diag.z_bar, diag.alpha);
      diag.network_error.resize(m);
      for (int i = 0; i < m; ++i) {
        diag.network_error[i] =
            (state.z.row(i).transpose() / state.w[i] - diag.z_bar).norm();
      }
      diag.f_err = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::quiet_NaN());
      if (objective != nullptr) {
        const Eigen::MatrixXd x_hat = state.x_hat();
        for (int i = 0; i < m; ++i) {
          diag.f_err[i] = objective->average_value(x_hat.row(i).transpose()) - f_star;
        }
      }
      result.trajectory.steps.push_back(std::move(diag));
    }
  }

  result.x_hat = state.x_hat();
  result.final_state = std::move(state);
  return result;
}

RunResult run(const TimeVaryingDigraph& graph, const DelaySpec& delays,
              const Objective& objective, const StepSchedule& schedule,
              const FeasibleSet& set, long T, const Eigen::MatrixXd& x0,
              const RunOptions& options) {
  AugmentedSystem system(graph, delays);
  EuclideanProjector projector(set);
  const auto [x_star, f_star] = objective.optimum(set);
  return run(system, objective_source(objective), schedule, projector, T, x0, &objective,
             f_star, options);
}

double suboptimality_envelope(const RunTrajectory& trajectory, int node, long T, double L,
                              double psi_xstar) {
  if (T < 1 || trajectory.length() < T) {
    throw std::invalid_argument("trajectory does not cover the requested horizon");
  }
  const int m = static_cast<int>(trajectory.steps.front().network_error.size());
  if (node < 0 || node >= m) throw std::invalid_argument("node out of range");

  double own_term = 0.0;
  double alpha_sum = 0.0;
  double all_term = 0.0;
  for (long t = 1; t <= T; ++t) {
    const StepDiagnostics& diag = trajectory.at(t);
    own_term += diag.alpha * diag.network_error[node];
    alpha_sum += diag.alpha;
    all_term += diag.alpha * diag.network_error.sum();
  }
  const double alpha_T = trajectory.at(T).alpha;
  const double Td = static_cast<double>(T);
  return L / Td * own_term + L * L / (2.0 * Td) * alpha_sum + psi_xstar / (Td * alpha_T) +
         2.0 * L / (static_cast<double>(m) * Td) * all_term;
}

}  // namespace psdda
