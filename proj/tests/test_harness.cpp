#include <cmath>
#include <sstream>

#include "doctest.h"
#include "psdda/errors.hpp"
#include "psdda/experiment.hpp"
#include "test_helpers.hpp"

using namespace psdda;

TEST_CASE("config JSON round-trip") {
  RunConfig c;
  c.preset = "quad8";
  c.T = 500;
  c.seed = 99;
  c.delays.uniform = 4;
  c.step.kind = "basic";
  c.step.lambda_coeff = 0.25;
  c.stride = 5;
  const std::string text = config_to_json_text(c);
  const RunConfig back = config_from_json_text(text);
  CHECK(back.preset == c.preset);
  CHECK(back.T == c.T);
  CHECK(back.seed == c.seed);
  CHECK(back.delays.uniform == c.delays.uniform);
  CHECK(back.step.lambda_coeff == c.step.lambda_coeff);
  CHECK(back.stride == c.stride);

  CHECK_THROWS_AS(config_from_json_text("{ not json"), ConfigError);
}

TEST_CASE("an explicit union order pins the delay-node layout") {
  const std::string text = R"({
    "m": 3, "B": 3,
    "schedule": [[[0,1]], [[1,2]], [[2,0]]],
    "union_order": [[2,0], [1,2], [0,1]],
    "delays": {"uniform": 1},
    "T": 5
  })";
  const Instance inst = build_instance(config_from_json_text(text));
  CHECK(inst.graph.union_edges()[0] == Edge{2, 0});
  const AugmentedIndexMap map =
      build_index_map(inst.graph.union_edges(), inst.delays, 3);
  CHECK(map.chain_node(0, 0) == 3);  // first chain node now belongs to (2,0)
}

TEST_CASE("per-edge delays parse from JSON") {
  const std::string text = R"({
    "m": 3, "B": 3,
    "schedule": [[[0,1]], [[1,2]], [[2,0]]],
    "delays": {"edges": [[[0,1],2], [[1,2],0], [[2,0],1]]},
    "T": 10
  })";
  const RunConfig c = config_from_json_text(text);
  const Instance inst = build_instance(c);
  CHECK(inst.delays.delay(Edge{0, 1}) == 2);
  CHECK(inst.delays.delay(Edge{1, 2}) == 0);
  CHECK(inst.delays.tau_total() == 3);
}

TEST_CASE("presets resolve to the documented instances") {
  RunConfig quad;
  quad.preset = "quad8";
  quad.T = 10;
  const Instance qi = build_instance(quad);
  CHECK(qi.graph.node_count() == 8);
  CHECK(qi.graph.window_length() == 4);
  CHECK(qi.graph.union_edges().size() == 10);
  CHECK(qi.delays.tau_max() == 4);
  CHECK(qi.constants.has_value());
  CHECK(qi.constants->omega == 68);
  CHECK(qi.set.radius == 3.0);
  CHECK(validate_b_connectivity(qi.graph).pass);

  RunConfig sensor;
  sensor.preset = "sensor8";
  sensor.T = 10;
  const Instance si = build_instance(sensor);
  CHECK(si.set.radius == 0.1);
  CHECK(si.objective->dimension() == 1);

  RunConfig ring;
  ring.preset = "example1";
  ring.T = 10;
  const Instance ri = build_instance(ring);
  CHECK(ri.graph.node_count() == 3);
  CHECK(ri.delays.tau_max() == 2);
  CHECK(ri.constants->omega == 15);

  RunConfig bogus;
  bogus.preset = "nope";
  CHECK_THROWS_AS(build_instance(bogus), ConfigError);
}

TEST_CASE("the eight-node preset graphs weight to the published matrices") {
  // out-degree weight matrices of the four benchmark graphs, 8x8, exact
  const double w1[8][8] = {
      {0.5, 0, 0, 0, 0, 0, 0, 0},   {0, 1, 0, 0, 0, 0, 0, 0},
      {0.5, 0, 1, 0, 0, 0, 0, 0},   {0, 0, 0, 1, 0, 0, 0, 0},
      {0, 0, 0, 0, 0.5, 0, 0, 0},   {0, 0, 0, 0, 0, 1, 0, 0},
      {0, 0, 0, 0, 0, 0, 1, 0},     {0, 0, 0, 0, 0.5, 0, 0, 1},
  };
  const double w2[8][8] = {
      {1, 0, 0, 0, 0, 0.5, 0, 0},   {0, 0.5, 0, 0, 0, 0, 0, 0},
      {0, 0, 1, 0, 0, 0, 0, 0},     {0, 0, 0, 0.5, 0, 0, 0, 0},
      {0, 0.5, 0, 0, 1, 0, 0, 0},   {0, 0, 0, 0, 0, 0.5, 0, 0},
      {0, 0, 0, 0.5, 0, 0, 1, 0},   {0, 0, 0, 0, 0, 0, 0, 1},
  };
  const double w3[8][8] = {
      {1, 0, 0, 0, 0, 0, 0, 0},     {0, 0.5, 0, 0, 0, 0, 0, 0},
      {0, 0, 1, 0, 0, 0, 0, 0},     {0, 0.5, 0, 1, 0, 0, 0, 0},
      {0, 0, 0, 0, 1, 0, 0, 0},     {0, 0, 0, 0, 0, 1, 0, 0.5},
      {0, 0, 0, 0, 0, 0, 1, 0},     {0, 0, 0, 0, 0, 0, 0, 0.5},
  };
  const double w4[8][8] = {
      {1, 0, 0, 0, 0.5, 0, 0, 0},   {0, 1, 0.5, 0, 0, 0, 0, 0},
      {0, 0, 0.5, 0, 0, 0, 0, 0},   {0, 0, 0, 1, 0, 0, 0, 0},
      {0, 0, 0, 0, 0.5, 0, 0, 0},   {0, 0, 0, 0, 0, 1, 0.5, 0},
      {0, 0, 0, 0, 0, 0, 0.5, 0},   {0, 0, 0, 0, 0, 0, 0, 1},
  };

  RunConfig c;
  c.preset = "quad8";
  c.T = 1;
  const Instance inst = build_instance(c);
  const double(*expected[4])[8] = {w1, w2, w3, w4};
  for (int s = 0; s < 4; ++s) {
    const Eigen::MatrixXd p =
        build_p_matrix(inst.graph.edges_at(s), inst.graph.node_count()).matrix();
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        CAPTURE(s);
        CAPTURE(i);
        CAPTURE(j);
        CHECK(p(i, j) == expected[s][i][j]);
      }
    }
  }
}

TEST_CASE("instance validation errors carry precise messages") {
  RunConfig c;
  c.m = 3;
  c.window = 3;
  c.schedule = {{{0, 1}}, {{1, 2}}, {{2, 0}}};
  c.T = 10;
  c.delays.per_edge = {{{0, 1}, 1}, {{1, 2}, 1}};  // (2,0) missing
  CHECK_THROWS_WITH_AS(build_instance(c), doctest::Contains("(2,0)"), ConfigError);

  c.delays.per_edge = {{{0, 1}, 1}, {{1, 2}, 1}, {{2, 0}, 1}, {{0, 2}, 1}};
  CHECK_THROWS_WITH_AS(build_instance(c), doctest::Contains("(0,2)"), ConfigError);
}

TEST_CASE("CSV writing round-trips records exactly") {
  MetricsTable table;
  table.notes = {"algo: psdda", "final: max_f_err=0.25"};
  table.records.push_back({1, 0, 0.123456789012345678, 1e-300, 0.5, 1e100});
  table.records.push_back({10, 7, -3.0e-9, 0.0, 0.1581138830084189, 42.0});

  std::ostringstream os;
  write_csv(table, os);
  std::istringstream is(os.str());
  const MetricsTable back = read_csv(is);
  CHECK(back.notes == table.notes);
  REQUIRE(back.records.size() == table.records.size());
  for (std::size_t k = 0; k < table.records.size(); ++k) {
    CHECK(back.records[k] == table.records[k]);
  }
}

TEST_CASE("experiment output is deterministic for a fixed config") {
  RunConfig c;
  c.preset = "example1";
  c.T = 40;
  c.seed = 2024;
  const ExperimentResult a = run_experiment(c);
  const ExperimentResult b = run_experiment(c);
  std::ostringstream sa, sb;
  write_csv(a.table, sa);
  write_csv(b.table, sb);
  CHECK(sa.str() == sb.str());
  CHECK(!a.table.records.empty());
}

TEST_CASE("metrics respect the sampling stride and final row") {
  RunConfig c;
  c.preset = "example1";
  c.T = 47;
  c.stride = 10;
  const ExperimentResult res = run_experiment(c);
  long max_t = 0;
  for (const auto& r : res.table.records) {
    CHECK((r.t % 10 == 0 || r.t == 47));
    max_t = std::max(max_t, r.t);
  }
  CHECK(max_t == 47);

  // f_err >= -1e-9 on every record (f* is the true optimum)
  for (const auto& r : res.table.records) CHECK(r.f_err >= -1e-9);
}

TEST_CASE("every record stays under the certified envelope") {
  RunConfig c;
  c.preset = "example1";
  c.T = 60;
  const ExperimentResult res = run_experiment(c);
  const double psi_xstar = 0.5 * res.instance.x_star.squaredNorm();
  for (const auto& r : res.table.records) {
    const double envelope =
        suboptimality_envelope(res.run.trajectory, r.node, r.t, res.instance.L, psi_xstar);
    CHECK(r.f_err <= envelope + 1e-12);
  }
}

TEST_CASE("a one-step run emits a single record per node") {
  RunConfig c;
  c.preset = "example1";
  c.T = 1;
  const ExperimentResult res = run_experiment(c);
  CHECK(res.table.records.size() == 3);
  for (const auto& r : res.table.records) CHECK(r.t == 1);
  CHECK(psdda::testing::exact_equal(res.run.x_hat, res.run.final_state.x));
}

TEST_CASE("custom step sequences are honored") {
  const StepSchedule fixed = StepSchedule::custom([](long) { return 0.125; });
  CHECK(fixed.alpha(1) == 0.125);
  CHECK(fixed.alpha(1000) == 0.125);
  CHECK(std::isnan(fixed.coefficient()));
}

TEST_CASE("explicit x0 is honored and validated") {
  RunConfig c;
  c.preset = "example1";
  c.T = 5;
  c.x0 = {0.5, 0.5, -0.5, 0.5, 0.0, -1.0};  // 3 nodes x 2 dims
  const Instance inst = build_instance(c);
  CHECK(inst.x0(0, 0) == 0.5);
  CHECK(inst.x0(2, 1) == -1.0);

  c.x0 = {4.0, 0.0, 0.0, 0.0, 0.0, 0.0};  // row 0 outside the ball of radius 3
  CHECK_THROWS_WITH_AS(build_instance(c), doctest::Contains("row 0"), ConfigError);

  c.x0 = {1.0};  // wrong length
  CHECK_THROWS_AS(build_instance(c), ConfigError);
}

TEST_CASE("baseline on a single node matches push-sum exactly") {
  RunConfig c;
  c.m = 1;
  c.window = 1;
  c.schedule = {{}};
  c.T = 50;
  c.objective.kind = "quadratic";
  c.objective.dimension = 2;
  const ExperimentResult ps = run_experiment(c);
  const ExperimentResult base = baseline_dda(c, BaselineWeighting::column_stochastic);
  CHECK(psdda::testing::max_abs_diff(ps.run.x_hat, base.run.x_hat) == 0.0);
  const ExperimentResult doubly = baseline_dda(c, BaselineWeighting::doubly_stochastic);
  CHECK(psdda::testing::max_abs_diff(ps.run.x_hat, doubly.run.x_hat) == 0.0);
}

TEST_CASE("baseline with zero delays on a symmetric graph converges") {
  RunConfig c;
  c.m = 3;
  c.window = 1;
  c.schedule = {{{0, 1}, {1, 0}, {1, 2}, {2, 1}}};
  c.delays.uniform = 0;
  c.T = 3000;
  c.seed = 404;
  const ExperimentResult base = baseline_dda(c, BaselineWeighting::doubly_stochastic);
  const ExperimentResult ps = run_experiment(c);
  CHECK(base.summary.max_f_err_final < 0.15);
  // both algorithms settle near the optimum on this easy instance
  CHECK(ps.summary.max_f_err_final < 0.15);
}

TEST_CASE("compare produces three aligned tables") {
  RunConfig c;
  c.preset = "quad8";
  c.T = 30;
  const CompareResult cmp = compare_algorithms(c);
  REQUIRE(cmp.psdda.table.records.size() == cmp.dda_doubly.table.records.size());
  REQUIRE(cmp.psdda.table.records.size() == cmp.dda_column.table.records.size());
  for (std::size_t k = 0; k < cmp.psdda.table.records.size(); ++k) {
    CHECK(cmp.psdda.table.records[k].t == cmp.dda_doubly.table.records[k].t);
    CHECK(cmp.psdda.table.records[k].node == cmp.dda_column.table.records[k].node);
  }
  CHECK(cmp.dda_doubly.table.notes.front() == "algo: dda_doubly (simplified)");
}

TEST_CASE("constants report rows") {
  const std::string ring = constants_report(3, 3, 2, 1.0, 1.0);
  CHECK(ring.find("Omega            15") != std::string::npos);
  const std::string bench = constants_report(8, 4, 4, 2.1213203435596424, 11.7);
  CHECK(bench.find("Omega            68") != std::string::npos);
  CHECK(bench.find("bound(T=10000)") != std::string::npos);
  CHECK_THROWS_AS(constants_report(1, 1, 0, 1.0, 1.0), ConfigError);  // Omega = 1
}

TEST_CASE("verify passes on the golden preset") {
  RunConfig c;
  c.preset = "example1";
  c.T = 30;
  const Report report = verify(c);
  if (!report.pass()) {
    for (const auto& chk : report.checks) {
      if (!chk.pass) MESSAGE(chk.name, ": ", chk.detail);
    }
  }
  CHECK(report.pass());

  // golden rows are present for the preset
  bool golden_seen = false;
  for (const auto& chk : report.checks) {
    if (chk.name.find("golden") != std::string::npos) golden_seen = true;
  }
  CHECK(golden_seen);
}

TEST_CASE("verify reports the offending edge of a corrupted delay spec") {
  RunConfig c;
  c.m = 3;
  c.window = 3;
  c.schedule = {{{0, 1}}, {{1, 2}}, {{2, 0}}};
  c.T = 10;
  c.delays.per_edge = {{{0, 1}, 2}, {{1, 2}, 2}};  // (2,0) lacks a delay
  const Report report = verify(c);
  CHECK(!report.pass());
  REQUIRE(!report.checks.empty());
  CHECK(report.checks.front().name == "config valid");
  CHECK(report.checks.front().detail.find("(2,0)") != std::string::npos);
}

TEST_CASE("run_experiment rejects disconnected instances, naming the window") {
  RunConfig c;
  c.m = 2;
  c.window = 1;
  c.schedule = {{{0, 1}}};
  c.T = 10;
  CHECK_THROWS_WITH_AS(run_experiment(c), doctest::Contains("window 0"), ConfigError);
}

TEST_CASE("verify flags a disconnected window") {
  RunConfig c;
  c.m = 2;
  c.window = 1;
  c.schedule = {{{0, 1}}};
  c.T = 10;
  const Report report = verify(c);
  CHECK(!report.pass());
  bool found = false;
  for (const auto& chk : report.checks) {
    if (chk.name.find("strongly connected") != std::string::npos) found = !chk.pass;
  }
  CHECK(found);
}
