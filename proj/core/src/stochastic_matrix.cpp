#include "psdda/stochastic_matrix.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "psdda/errors.hpp"

namespace psdda {

ColumnStochasticMatrix::ColumnStochasticMatrix(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("column stochastic matrix must be square");
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      const double v = entries_(i, j);
      if (!(v >= 0.0)) {
        throw std::invalid_argument("negative or non-finite entry at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kColumnSumTol) {
      throw std::invalid_argument("column " + std::to_string(j) + " sums to " +
                                  std::to_string(sum) + ", not 1");
    }
  }
}

ColumnStochasticMatrix build_p_matrix(const EdgeList& active, int node_count) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(node_count, node_count);
  for (int j = 0; j < node_count; ++j) {
    const double weight = 1.0 / out_degree(active, j, node_count);
    p(j, j) = weight;
    for (const Edge& e : active) {
      if (e.src == j) p(e.dst, j) = weight;
    }
  }
  return ColumnStochasticMatrix(std::move(p));
}

ColumnStochasticMatrix transition_product(std::span<const ColumnStochasticMatrix> matrices,
                                          long t, long s) {
  if (matrices.empty()) {
    throw std::invalid_argument("transition_product needs at least one matrix for its dimension");
  }
  const int n = matrices.front().dim();
  for (const auto& q : matrices) {
    if (q.dim() != n) throw std::invalid_argument("transition_product: dimension mismatch");
  }
  if (t < s) {
    return ColumnStochasticMatrix(Eigen::MatrixXd::Identity(n, n));
  }
  if (s < 0 || t >= static_cast<long>(matrices.size())) {
    throw std::invalid_argument("transition_product: indices " + std::to_string(s) + ".." +
                                std::to_string(t) + " outside the supplied range");
  }
  Eigen::MatrixXd acc = matrices[static_cast<std::size_t>(s)].matrix();
  for (long k = s + 1; k <= t; ++k) {
    acc = (matrices[static_cast<std::size_t>(k)].matrix() * acc).eval();
  }
  return ColumnStochasticMatrix(std::move(acc));
}

namespace {

// t · lambda^(t-1) evaluated in log space; t need not fit an integer type.
double t_lambda_pow(double t, double log_lambda) {
  return std::exp(std::log(t) + (t - 1.0) * log_lambda);
}

}  // namespace

ConvergenceConstants convergence_constants(int m, int window, int tau_max) {
  if (m < 1 || window < 1 || tau_max < 0) {
    throw ConfigError("convergence constants need m >= 1, B >= 1, tau_max >= 0");
  }
  ConvergenceConstants c;
  c.m = m;
  c.window = window;
  c.tau_max = tau_max;
  c.omega = static_cast<std::int64_t>(m - 1) * window +
            static_cast<std::int64_t>(m) * (tau_max + 1);
  if (c.omega < 3) {
    throw ConfigError("Omega = " + std::to_string(c.omega) +
                      " < 3; parameters too small for the contraction bound");
  }

  const double log_m = std::log(static_cast<double>(m));
  const double omega = static_cast<double>(c.omega);
  const double m_pow_neg_omega = std::exp(-omega * log_m);  // m^-Omega

  c.log_lambda = std::log1p(-m_pow_neg_omega) / omega;
  c.lambda = std::exp(c.log_lambda);
  c.one_minus_lambda = -std::expm1(c.log_lambda);
  c.C = 4.0 * (1.0 + std::exp(omega * log_m)) / (-std::expm1(-omega * log_m));
  c.delta_lb = std::exp(-(omega + 1.0) * log_m);

  // Continuous maximizer of t·lambda^(t-1) is -1/log(lambda); the integer
  // argmax is adjacent. Ties break toward the smaller t.
  double best_t = 1.0;
  double best_v = t_lambda_pow(1.0, c.log_lambda);
  const double cont = -1.0 / c.log_lambda;
  for (const double cand : {std::floor(cont), std::ceil(cont)}) {
    if (cand < 1.0 || !std::isfinite(cand)) continue;
    const double v = t_lambda_pow(cand, c.log_lambda);
    if (v > best_v || (v == best_v && cand < best_t)) {
      best_t = cand;
      best_v = v;
    }
  }
  c.t_star = best_t;
  c.gamma = gamma_with_delta(c, c.delta_lb);

  // ln(Gamma) assembled from log-space pieces so extreme parameter sets that
  // push the direct value past the double range still report a magnitude
  const double log_neg_log_lambda = c.log_lambda < 0.0
                                        ? std::log(-c.log_lambda)
                                        : -omega * log_m - std::log(omega);
  const double log_C = std::log(4.0) + omega * log_m + std::log1p(m_pow_neg_omega) -
                       std::log1p(-m_pow_neg_omega);
  const double log_geo = c.one_minus_lambda > 0.0
                             ? -std::log(c.one_minus_lambda) - c.log_lambda
                             : -log_neg_log_lambda;
  const double log_peak = std::log(c.t_star) + (c.t_star - 1.0) * c.log_lambda;
  const double hi = std::max(log_geo, log_peak);
  const double log_bracket = hi + std::log1p(std::exp(std::min(log_geo, log_peak) - hi));
  c.log_gamma = log_m + log_C + (omega + 1.0) * log_m + log_bracket;
  return c;
}

double gamma_with_delta(const ConvergenceConstants& c, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double geometric_term = 1.0 / (c.one_minus_lambda * std::exp(c.log_lambda));
  const double peak_term = t_lambda_pow(c.t_star, c.log_lambda);
  return (static_cast<double>(c.m) * c.C / delta) * (geometric_term + peak_term);
}

double contraction_bound(const ConvergenceConstants& c, double steps) {
  return c.C * std::exp(steps * c.log_lambda);
}

double column_spread(const ColumnStochasticMatrix& q, int row) {
  if (row < 0 || row >= q.dim()) throw std::invalid_argument("row out of range");
  const auto r = q.matrix().row(row);
  return r.maxCoeff() - r.minCoeff();
}

}  // namespace psdda
