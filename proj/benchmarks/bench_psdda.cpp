#include <benchmark/benchmark.h>

#include "psdda/oracle_sim.hpp"

namespace {

using namespace psdda;

RandomInstance bench_instance(int max_nodes, int max_delay) {
  SplitMix64 rng(4242);
  return random_instance(rng, max_nodes, max_delay);
}

void BM_AugmentMatrix(benchmark::State& state) {
  const int tau = static_cast<int>(state.range(0));
  TimeVaryingDigraph g(3,
                       {EdgeList::canonical({{0, 1}}), EdgeList::canonical({{1, 2}}),
                        EdgeList::canonical({{2, 0}})},
                       3, true);
  const DelaySpec delays = DelaySpec::uniform(g.union_edges(), tau);
  const AugmentedIndexMap map = build_index_map(g.union_edges(), delays, 3);
  const EdgeList active = EdgeList::canonical({{0, 1}});
  const ColumnStochasticMatrix p = build_p_matrix(active, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(augment_matrix(p, active, map, delays));
  }
}
BENCHMARK(BM_AugmentMatrix)->Arg(2)->Arg(8)->Arg(32);

void BM_Step(benchmark::State& state) {
  const int tau = static_cast<int>(state.range(0));
  TimeVaryingDigraph g(8,
                       {EdgeList::canonical({{0, 2}, {4, 7}}),
                        EdgeList::canonical({{1, 4}, {3, 6}, {5, 0}}),
                        EdgeList::canonical({{1, 3}, {7, 5}}),
                        EdgeList::canonical({{2, 1}, {4, 0}, {6, 5}})},
                       4, true);
  AugmentedSystem system(g, DelaySpec::uniform(g.union_edges(), tau));
  const FeasibleSet ball = FeasibleSet::l1_ball(3.0);
  const EuclideanProjector proj(ball);
  const StepSchedule schedule = StepSchedule::basic(0.2);
  SystemState s = init_state(8, system.tau(), 2, Eigen::MatrixXd::Zero(8, 2), ball);
  Eigen::MatrixXd subgrads = Eigen::MatrixXd::Constant(8, 2, 0.1);
  for (auto _ : state) {
    s = step(std::move(s), system.q_at(s.t), subgrads, schedule, proj);
    benchmark::DoNotOptimize(s.w.sum());
  }
}
BENCHMARK(BM_Step)->Arg(0)->Arg(4)->Arg(8);

void BM_TransitionProduct(benchmark::State& state) {
  const RandomInstance inst = bench_instance(6, 3);
  AugmentedSystem system(inst.graph, inst.delays);
  const long slots = inst.graph.schedule_length();
  for (auto _ : state) {
    Eigen::MatrixXd prod = system.q_at(0).matrix();
    for (long t = 1; t < 4 * slots; ++t) {
      prod = (system.q_at(t).matrix() * prod).eval();
    }
    benchmark::DoNotOptimize(prod.sum());
  }
}
BENCHMARK(BM_TransitionProduct);

void BM_EventSim(benchmark::State& state) {
  const RandomInstance inst = bench_instance(5, 3);
  const FeasibleSet ball = FeasibleSet::l1_ball(3.0);
  const EuclideanProjector proj(ball);
  const StepSchedule schedule = StepSchedule::basic(1.0);
  const SubgradientSource source = fixed_random_source(2, 99);
  const Eigen::MatrixXd x0 = Eigen::MatrixXd::Zero(inst.graph.node_count(), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_event_driven(inst.graph, inst.delays, source, schedule, proj, 50, x0));
  }
}
BENCHMARK(BM_EventSim);

}  // namespace

BENCHMARK_MAIN();
