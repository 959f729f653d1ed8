#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <utility>

namespace psdda {

// Closed convex constraint set. Only the l1 ball ships; the enum leaves room
// for boxes and other norm balls behind the same surface.
struct FeasibleSet {
  enum class Kind { l1_ball };

  Kind kind = Kind::l1_ball;
  double radius = 1.0;

  static FeasibleSet l1_ball(double h);

  bool contains(const Eigen::VectorXd& x, double tol = 1e-12) const;
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;  // Euclidean projection

  // sup over the set of psi(x) = 0.5*||x||^2; the certificate for R^2.
  double psi_sup() const;
};

// Euclidean projection onto the l1 ball of radius h: identity inside,
// soft-thresholding with a sort-and-scan threshold outside.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double h);

// Separable objective f(x) = (1/m) sum_i f_i(x). Implementations expose
// per-node values and subgradients, a Lipschitz certificate over a feasible
// set, and the closed-form constrained optimum.
class Objective {
public:
  virtual ~Objective() = default;

  virtual int node_count() const = 0;
  virtual int dimension() const = 0;
  virtual double value(int node, const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd subgradient(int node, const Eigen::VectorXd& x) const = 0;

  // Upper bound on sup over the set of ||grad f_i||, for every node.
  virtual double lipschitz_bound(const FeasibleSet& set) const = 0;

  // (x*, f(x*)) of min f over the set.
  virtual std::pair<Eigen::VectorXd, double> optimum(const FeasibleSet& set) const = 0;

  std::pair<double, Eigen::VectorXd> value_and_subgrad(int node, const Eigen::VectorXd& x) const {
    return {value(node, x), subgradient(node, x)};
  }

  // f(x) = (1/m) sum_i f_i(x)
  double average_value(const Eigen::VectorXd& x) const;
};

// f_i(x) = ||x - U_i||^2 with a per-node target row U_i.
class QuadraticObjective final : public Objective {
public:
  explicit QuadraticObjective(Eigen::MatrixXd targets);

  // Targets uniform on [-range, range]^d, reproducible from the seed.
  static QuadraticObjective seeded(int node_count, int dimension, double range,
                                   std::uint64_t seed);

  const Eigen::MatrixXd& targets() const { return targets_; }

  int node_count() const override { return static_cast<int>(targets_.rows()); }
  int dimension() const override { return static_cast<int>(targets_.cols()); }
  double value(int node, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd subgradient(int node, const Eigen::VectorXd& x) const override;
  double lipschitz_bound(const FeasibleSet& set) const override;
  std::pair<Eigen::VectorXd, double> optimum(const FeasibleSet& set) const override;

private:
  Eigen::MatrixXd targets_;
};

// Scalar estimation: sensor i reads r_i = a_i * x_true + b_i and pays
// f_i(xhat) = 0.5 (r_i - xhat)^2.
class SensorObjective final : public Objective {
public:
  SensorObjective(Eigen::VectorXd gains, Eigen::VectorXd offsets, double x_true);

  // Gains uniform on [1,2], offsets uniform on [-1/2,1/2].
  static SensorObjective seeded(int node_count, double x_true, std::uint64_t seed);

  const Eigen::VectorXd& readings() const { return readings_; }

  int node_count() const override { return static_cast<int>(gains_.size()); }
  int dimension() const override { return 1; }
  double value(int node, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd subgradient(int node, const Eigen::VectorXd& x) const override;
  double lipschitz_bound(const FeasibleSet& set) const override;
  std::pair<Eigen::VectorXd, double> optimum(const FeasibleSet& set) const override;

private:
  Eigen::VectorXd gains_;
  Eigen::VectorXd offsets_;
  double x_true_;
  Eigen::VectorXd readings_;
};

}  // namespace psdda
