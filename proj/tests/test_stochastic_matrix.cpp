#include <cmath>
#include <vector>

#include "doctest.h"
#include "psdda/errors.hpp"
#include "psdda/random.hpp"
#include "psdda/delay_augment.hpp"
#include "psdda/stochastic_matrix.hpp"
#include "test_helpers.hpp"

using namespace psdda;

namespace {

Eigen::MatrixXd mat3(std::initializer_list<double> rows) {
  Eigen::MatrixXd m(3, 3);
  int k = 0;
  for (const double v : rows) m(k / 3, k % 3) = v, ++k;
  return m;
}

}  // namespace

TEST_CASE("construction validates nonnegativity and column sums") {
  CHECK_NOTHROW(ColumnStochasticMatrix(Eigen::MatrixXd::Identity(4, 4)));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 0) = 0.5;  // column sums to 0.5
  CHECK_THROWS_AS(ColumnStochasticMatrix{bad}, std::invalid_argument);
  Eigen::MatrixXd neg(2, 2);
  neg << 1.5, 0.0, -0.5, 1.0;
  CHECK_THROWS_AS(ColumnStochasticMatrix{neg}, std::invalid_argument);
  CHECK_THROWS_AS(ColumnStochasticMatrix(Eigen::MatrixXd::Ones(2, 3)), std::invalid_argument);
}

TEST_CASE("out-degree weight matrices of the ring graphs") {
  const EdgeList g1 = EdgeList::canonical({{0, 1}});
  const EdgeList g3 = EdgeList::canonical({{2, 0}});

  const ColumnStochasticMatrix p1 = build_p_matrix(g1, 3);
  CHECK(psdda::testing::exact_equal(p1.matrix(), mat3({0.5, 0, 0,
                                                       0.5, 1, 0,
                                                       0, 0, 1})));

  const ColumnStochasticMatrix p3 = build_p_matrix(g3, 3);
  CHECK(psdda::testing::exact_equal(p3.matrix(), mat3({1, 0, 0.5,
                                                       0, 1, 0,
                                                       0, 0, 0.5})));

  CHECK(psdda::testing::exact_equal(build_p_matrix(EdgeList{}, 3).matrix(),
                                    Eigen::MatrixXd::Identity(3, 3)));
}

TEST_CASE("transition product branches") {
  const std::vector<ColumnStochasticMatrix> mats{
      build_p_matrix(EdgeList::canonical({{0, 1}}), 3),
      build_p_matrix(EdgeList::canonical({{1, 2}}), 3)};

  // identity branch when t < s
  const ColumnStochasticMatrix id = transition_product(mats, 0, 5);
  CHECK(psdda::testing::exact_equal(id.matrix(), Eigen::MatrixXd::Identity(3, 3)));

  // t == s returns the matrix itself
  CHECK(psdda::testing::exact_equal(transition_product(mats, 1, 1).matrix(), mats[1].matrix()));

  // two-factor product has exact unit column sums (dyadic entries)
  const ColumnStochasticMatrix prod = transition_product(mats, 1, 0);
  CHECK(psdda::testing::exact_equal(prod.matrix(), mats[1].matrix() * mats[0].matrix()));
  for (int j = 0; j < 3; ++j) {
    CHECK(prod.matrix().col(j).sum() == 1.0);
  }

  CHECK_THROWS_AS(transition_product(mats, 2, 0), std::invalid_argument);
}

TEST_CASE("contraction constants for the worked parameter sets") {
  const ConvergenceConstants ring = convergence_constants(3, 3, 2);
  CHECK(ring.omega == 15);  // (3-1)*3 + 3*(2+1)
  const ConvergenceConstants bench = convergence_constants(8, 4, 4);
  CHECK(bench.omega == 68);  // 7*4 + 8*5

  // lambda^Omega == 1 - m^-Omega, checked through the log form
  for (const auto& c : {ring, bench}) {
    const double lhs = std::exp(static_cast<double>(c.omega) * c.log_lambda);
    const double rhs = 1.0 - std::pow(1.0 / c.m, static_cast<double>(c.omega));
    CHECK(std::abs(lhs - rhs) <= 1e-12);
    CHECK(c.C > 0.0);
    CHECK(c.delta_lb > 0.0);
    CHECK(c.one_minus_lambda > 0.0);
    CHECK(c.log_lambda < 0.0);
    CHECK(c.gamma > 0.0);
    CHECK(std::isfinite(c.gamma));
  }

  // identical inputs give identical outputs
  const ConvergenceConstants again = convergence_constants(8, 4, 4);
  CHECK(again.gamma == bench.gamma);
  CHECK(again.t_star == bench.t_star);
  CHECK(again.log_lambda == bench.log_lambda);
}

TEST_CASE("constants reject parameters below the bound's domain") {
  CHECK_THROWS_AS(convergence_constants(1, 1, 0), ConfigError);   // Omega = 1
  CHECK_THROWS_AS(convergence_constants(2, 1, -1), ConfigError);  // bad tau
  CHECK_NOTHROW(convergence_constants(2, 1, 0));                  // Omega = 3 boundary
}

TEST_CASE("t_star matches a brute-force scan of t lambda^(t-1)") {
  // small Omega values keep lambda far enough from 1 to scan directly
  for (const auto [m, B, tau] : {std::array{2, 1, 0}, std::array{2, 2, 1}, std::array{3, 1, 0}}) {
    const ConvergenceConstants c = convergence_constants(m, B, tau);
    double best_v = 0.0;
    double best_t = 0.0;
    for (long t = 1; t <= 2000; ++t) {
      const double v = static_cast<double>(t) * std::pow(c.lambda, static_cast<double>(t - 1));
      if (v > best_v) {
        best_v = v;
        best_t = static_cast<double>(t);
      }
    }
    CHECK(c.t_star == doctest::Approx(best_t));
  }
}

TEST_CASE("log-space gamma matches the direct value and survives overflow") {
  for (const auto [m, B, tau] : {std::array{3, 3, 2}, std::array{8, 4, 4}}) {
    const ConvergenceConstants c = convergence_constants(m, B, tau);
    CHECK(std::exp(c.log_gamma) == doctest::Approx(c.gamma).epsilon(1e-10));
  }
  // far past the double range: the direct value saturates, the log stays finite
  const ConvergenceConstants huge = convergence_constants(8, 4, 40);
  CHECK(std::isinf(huge.gamma));
  CHECK(std::isfinite(huge.log_gamma));
  CHECK(huge.log_gamma > 709.0);  // bigger than any finite double's log
}

TEST_CASE("gamma grows when delta shrinks") {
  const ConvergenceConstants c = convergence_constants(3, 3, 2);
  CHECK(gamma_with_delta(c, c.delta_lb) == c.gamma);
  CHECK(gamma_with_delta(c, 0.5) < c.gamma);  // delta_lb << 0.5
  CHECK_THROWS_AS(gamma_with_delta(c, 0.0), std::invalid_argument);
}

TEST_CASE("cycled ring products contract the column spread") {
  const std::vector<EdgeList> ring{EdgeList::canonical({{0, 1}}),
                                   EdgeList::canonical({{1, 2}}),
                                   EdgeList::canonical({{2, 0}})};
  std::vector<ColumnStochasticMatrix> q;
  // 61 matrices of the delayed ring: Q(t) for t = 0..60
  {
    const TimeVaryingDigraph g(3, ring, 3, true);
    const DelaySpec delays = DelaySpec::uniform(g.union_edges(), 2);
    const AugmentedIndexMap map = build_index_map(g.union_edges(), delays, 3);
    for (long t = 0; t <= 60; ++t) {
      const EdgeList& active = g.edges_at(t);
      q.push_back(augment_matrix(build_p_matrix(active, 3), active, map, delays));
    }
  }
  const ColumnStochasticMatrix product = transition_product(q, 60, 0);
  const ConvergenceConstants c = convergence_constants(3, 3, 2);
  const double bound = 2.0 * contraction_bound(c, 60.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(column_spread(product, i) <= bound);
  }
}

TEST_CASE("column spread") {
  // rank-one: all columns equal -> zero spread in every row
  Eigen::MatrixXd ones = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0);
  const ColumnStochasticMatrix r1(ones);
  for (int i = 0; i < 3; ++i) CHECK(column_spread(r1, i) == 0.0);

  const ColumnStochasticMatrix id(Eigen::MatrixXd::Identity(2, 2));
  CHECK(column_spread(id, 0) == 1.0);
  CHECK(column_spread(id, 1) == 1.0);

  CHECK_THROWS_AS(column_spread(id, 2), std::invalid_argument);
}
