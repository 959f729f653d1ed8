#include "psdda/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "psdda/errors.hpp"
#include "psdda/random.hpp"

namespace psdda {

FeasibleSet FeasibleSet::l1_ball(double h) {
  if (!(h > 0.0)) throw ConfigError("l1 ball radius must be positive");
  return FeasibleSet{Kind::l1_ball, h};
}

bool FeasibleSet::contains(const Eigen::VectorXd& x, double tol) const {
  return x.lpNorm<1>() <= radius + tol;
}

Eigen::VectorXd FeasibleSet::project(const Eigen::VectorXd& v) const {
  return project_l1_ball(v, radius);
}

double FeasibleSet::psi_sup() const {
  // max of ||x||_2 over ||x||_1 <= h is h, attained at the vertices
  return 0.5 * radius * radius;
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("l1 ball radius must be positive");
  if (v.lpNorm<1>() <= h) return v;

  // threshold from the sorted-magnitude prefix scan
  std::vector<double> mag(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) mag[static_cast<std::size_t>(i)] = std::abs(v[i]);
  std::sort(mag.begin(), mag.end(), std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    prefix += mag[k];
    const double cand = (prefix - h) / static_cast<double>(k + 1);
    if (k + 1 == mag.size() || mag[k + 1] <= cand) {
      theta = cand;
      break;
    }
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double shrunk = std::max(std::abs(v[i]) - theta, 0.0);
    out[i] = v[i] >= 0.0 ? shrunk : -shrunk;
  }
  return out;
}

double Objective::average_value(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  for (int i = 0; i < node_count(); ++i) sum += value(i, x);
  return sum / node_count();
}

QuadraticObjective::QuadraticObjective(Eigen::MatrixXd targets) : targets_(std::move(targets)) {
  if (targets_.rows() < 1 || targets_.cols() < 1) {
    throw ConfigError("quadratic objective needs at least one node and one dimension");
  }
  if (!targets_.allFinite()) throw ConfigError("quadratic targets must be finite");
}

QuadraticObjective QuadraticObjective::seeded(int node_count, int dimension, double range,
                                              std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd u(node_count, dimension);
  for (int i = 0; i < node_count; ++i) {
    for (int j = 0; j < dimension; ++j) u(i, j) = rng.uniform(-range, range);
  }
  return QuadraticObjective(std::move(u));
}

double QuadraticObjective::value(int node, const Eigen::VectorXd& x) const {
  return (x - targets_.row(node).transpose()).squaredNorm();
}

Eigen::VectorXd QuadraticObjective::subgradient(int node, const Eigen::VectorXd& x) const {
  return 2.0 * (x - targets_.row(node).transpose());
}

double QuadraticObjective::lipschitz_bound(const FeasibleSet& set) const {
  // ||grad f_i(x)|| = 2||x - U_i|| <= 2(||x||_2 + ||U_i||_2), sup ||x||_2 = h
  double max_target = 0.0;
  for (int i = 0; i < node_count(); ++i) {
    max_target = std::max(max_target, targets_.row(i).norm());
  }
  return 2.0 * (set.radius + max_target);
}

std::pair<Eigen::VectorXd, double> QuadraticObjective::optimum(const FeasibleSet& set) const {
  // f(x) = ||x - u_bar||^2 + const, so x* is the projection of the mean target
  const Eigen::VectorXd u_bar = targets_.colwise().mean().transpose();
  Eigen::VectorXd x_star = set.project(u_bar);
  return {x_star, average_value(x_star)};
}

SensorObjective::SensorObjective(Eigen::VectorXd gains, Eigen::VectorXd offsets, double x_true)
    : gains_(std::move(gains)), offsets_(std::move(offsets)), x_true_(x_true) {
  if (gains_.size() != offsets_.size() || gains_.size() < 1) {
    throw ConfigError("sensor objective needs matching, nonempty gain and offset vectors");
  }
  if (!gains_.allFinite() || !offsets_.allFinite() || !std::isfinite(x_true_)) {
    throw ConfigError("sensor parameters must be finite");
  }
  readings_ = gains_ * x_true_ + offsets_;
}

SensorObjective SensorObjective::seeded(int node_count, double x_true, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXd a(node_count), b(node_count);
  for (int i = 0; i < node_count; ++i) a[i] = rng.uniform(1.0, 2.0);
  for (int i = 0; i < node_count; ++i) b[i] = rng.uniform(-0.5, 0.5);
  return SensorObjective(std::move(a), std::move(b), x_true);
}

double SensorObjective::value(int node, const Eigen::VectorXd& x) const {
  const double e = readings_[node] - x[0];
  return 0.5 * e * e;
}

Eigen::VectorXd SensorObjective::subgradient(int node, const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(1);
  g[0] = -(readings_[node] - x[0]);
  return g;
}

double SensorObjective::lipschitz_bound(const FeasibleSet& set) const {
  // |grad f_i(xhat)| = |xhat - r_i| <= h + |r_i|
  double bound = 0.0;
  for (int i = 0; i < node_count(); ++i) {
    bound = std::max(bound, set.radius + std::abs(readings_[i]));
  }
  return bound;
}

std::pair<Eigen::VectorXd, double> SensorObjective::optimum(const FeasibleSet& set) const {
  const double r_bar = readings_.mean();
  Eigen::VectorXd x_star(1);
  x_star[0] = std::clamp(r_bar, -set.radius, set.radius);
  return {x_star, average_value(x_star)};
}

}  // namespace psdda
