#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "psdda/graph.hpp"

namespace psdda {

// Dense nonnegative square matrix whose columns each sum to 1. Validated on
// construction; immutable afterwards.
class ColumnStochasticMatrix {
public:
  static constexpr double kColumnSumTol = 1e-12;

  explicit ColumnStochasticMatrix(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double operator()(int row, int col) const { return entries_(row, col); }

private:
  Eigen::MatrixXd entries_;
};

// Out-degree weight matrix of an edge set: entry (i, j) is 1/d_j when j sends
// to i (including i = j via the implicit self-loop), 0 otherwise.
ColumnStochasticMatrix build_p_matrix(const EdgeList& active, int node_count);

// State transition product Q(t)·Q(t-1)···Q(s); identity when t < s.
// matrices[k] is the matrix at time k, so indices s..t must be in range.
ColumnStochasticMatrix transition_product(std::span<const ColumnStochasticMatrix> matrices,
                                          long t, long s);

// Constants of the contraction analysis for a network with m nodes, window
// length B and maximum per-edge delay tau_max:
//
//   Omega  = (m-1)B + m(tau_max+1), required >= 3
//   C      = 4 (1 + m^Omega) / (1 - m^-Omega)
//   lambda = (1 - m^-Omega)^(1/Omega)
//   delta  >= m^-(Omega+1)       (lower bound on the compute-row mass)
//   t_star = argmax_t t·lambda^(t-1)
//   Gamma  = (m C / delta) (1/((1-lambda) lambda) + t_star lambda^(t_star-1))
//
// lambda sits so close to 1 at realistic sizes that 1-lambda underflows the
// spacing of doubles near 1; log_lambda and one_minus_lambda carry the
// accurate values and every derived quantity is evaluated from them.
struct ConvergenceConstants {
  int m = 0;
  int window = 0;   // B
  int tau_max = 0;
  std::int64_t omega = 0;
  double C = 0.0;
  double lambda = 0.0;            // exp(log_lambda); may round to 1.0
  double log_lambda = 0.0;        // log1p(-m^-Omega)/Omega, exact to double precision
  double one_minus_lambda = 0.0;  // -expm1(log_lambda)
  double delta_lb = 0.0;          // m^-(Omega+1)
  double t_star = 0.0;            // integer-valued; can exceed the int64 range
  double gamma = 0.0;             // Gamma evaluated with delta = delta_lb
  double log_gamma = 0.0;         // ln(gamma), finite even when gamma overflows
};

// Pure function of (m, B, tau_max); throws ConfigError when Omega < 3.
ConvergenceConstants convergence_constants(int m, int window, int tau_max);

// Gamma re-evaluated with a different delta (e.g. one measured from a long
// product instead of the conservative lower bound).
double gamma_with_delta(const ConvergenceConstants& c, double delta);

// C·lambda^steps, evaluated in log space.
double contraction_bound(const ConvergenceConstants& c, double steps);

// Largest difference between two entries of one row: max_{j,j'} |Q_ij - Q_ij'|.
// Bounds twice the distance of the row to any common limit value.
double column_spread(const ColumnStochasticMatrix& q, int row);

}  // namespace psdda
