#include "psdda/delay_augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "psdda/errors.hpp"

namespace psdda {

DelaySpec::DelaySpec(EdgeList union_edges, std::vector<int> per_edge)
    : edges_(std::move(union_edges)), per_edge_(std::move(per_edge)) {
  if (per_edge_.size() != static_cast<std::size_t>(edges_.size())) {
    throw ConfigError("delay list length does not match the union edge count");
  }
  for (std::size_t r = 0; r < per_edge_.size(); ++r) {
    if (per_edge_[r] < 0) {
      throw ConfigError("edge " + to_string(edges_[static_cast<int>(r)]) +
                        " has a negative delay");
    }
    tau_max_ = std::max(tau_max_, per_edge_[r]);
    tau_total_ += per_edge_[r];
  }
}

DelaySpec DelaySpec::uniform(const EdgeList& union_edges, int tau_edge) {
  return DelaySpec(union_edges,
                   std::vector<int>(static_cast<std::size_t>(union_edges.size()), tau_edge));
}

DelaySpec DelaySpec::from_pairs(const EdgeList& union_edges,
                                const std::vector<std::pair<Edge, int>>& pairs) {
  std::vector<int> per_edge(static_cast<std::size_t>(union_edges.size()), -1);
  for (const auto& [edge, tau] : pairs) {
    const int r = union_edges.index_of(edge);
    if (r < 0) {
      throw ConfigError("delay given for edge " + to_string(edge) +
                        " which is not in the union edge set");
    }
    if (per_edge[static_cast<std::size_t>(r)] >= 0) {
      throw ConfigError("edge " + to_string(edge) + " has two delay entries");
    }
    per_edge[static_cast<std::size_t>(r)] = tau;
  }
  for (int r = 0; r < union_edges.size(); ++r) {
    if (per_edge[static_cast<std::size_t>(r)] < 0) {
      throw ConfigError("edge " + to_string(union_edges[r]) + " lacks a delay");
    }
  }
  return DelaySpec(union_edges, std::move(per_edge));
}

int DelaySpec::delay(const Edge& e) const {
  const int r = edges_.index_of(e);
  if (r < 0) throw ConfigError("edge " + to_string(e) + " is not in the union edge set");
  return delay(r);
}

AugmentedIndexMap::AugmentedIndexMap(int compute_nodes, std::vector<int> chain_start,
                                     std::vector<int> chain_len)
    : m_(compute_nodes), chain_start_(std::move(chain_start)), chain_len_(std::move(chain_len)) {
  for (const int len : chain_len_) tau_ += len;
}

int AugmentedIndexMap::chain_node(int edge_index, int k) const {
  const int len = chain_len_[static_cast<std::size_t>(edge_index)];
  if (k < 0 || k >= len) {
    throw std::out_of_range("chain position " + std::to_string(k) + " out of range for edge " +
                            std::to_string(edge_index));
  }
  return chain_start_[static_cast<std::size_t>(edge_index)] + k;
}

AugmentedIndexMap build_index_map(const EdgeList& union_edges, const DelaySpec& delays,
                                  int compute_nodes) {
  if (!delays.edges().same_set(union_edges)) {
    throw ConfigError("delay spec does not cover exactly the union edges");
  }
  std::vector<int> start(static_cast<std::size_t>(union_edges.size()), -1);
  std::vector<int> len(static_cast<std::size_t>(union_edges.size()), 0);
  int next = compute_nodes;
  for (int r = 0; r < union_edges.size(); ++r) {
    const int tau = delays.delay(union_edges[r]);
    len[static_cast<std::size_t>(r)] = tau;
    if (tau > 0) {
      start[static_cast<std::size_t>(r)] = next;
      next += tau;
    }
  }
  return AugmentedIndexMap(compute_nodes, std::move(start), std::move(len));
}

ColumnStochasticMatrix augment_matrix(const ColumnStochasticMatrix& p, const EdgeList& active,
                                      const AugmentedIndexMap& map, const DelaySpec& delays) {
  const int m = map.m();
  const int n = map.n();
  if (p.dim() != m) {
    throw ConfigError("P has dimension " + std::to_string(p.dim()) + ", expected " +
                      std::to_string(m));
  }
  const EdgeList& union_edges = delays.edges();
  for (const Edge& e : active) {
    if (!union_edges.contains(e)) {
      throw ConfigError("active edge " + to_string(e) + " is outside the union edge set");
    }
  }

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  q.topLeftCorner(m, m) = p.matrix();

  for (int r = 0; r < union_edges.size(); ++r) {
    const Edge e = union_edges[r];
    const int tau = delays.delay(r);
    if (tau == 0) continue;  // direct entry stays
    if (active.contains(e)) {
      // reroute the direct weight through the head of the chain
      q(map.chain_first(r), e.src) = p(e.dst, e.src);
      q(e.dst, e.src) = 0.0;
    }
    for (int k = 0; k + 1 < tau; ++k) {
      q(map.chain_node(r, k + 1), map.chain_node(r, k)) = 1.0;
    }
    q(e.dst, map.chain_last(r)) = 1.0;
  }
  return ColumnStochasticMatrix(std::move(q));
}

Report validate_augmented(const Eigen::MatrixXd& q, const AugmentedIndexMap& map) {
  Report report;
  const int n = static_cast<int>(q.rows());
  bool dims_ok = q.rows() == q.cols() && n == map.n();
  report.add("dimension matches index map", dims_ok,
             "matrix " + std::to_string(n) + ", map " + std::to_string(map.n()));
  if (!dims_ok) return report;

  bool sums_ok = true;
  std::string sums_detail;
  for (int j = 0; j < n; ++j) {
    const double sum = q.col(j).sum();
    if (!(std::abs(sum - 1.0) <= ColumnStochasticMatrix::kColumnSumTol) ||
        q.col(j).minCoeff() < 0.0) {
      sums_ok = false;
      sums_detail = "column " + std::to_string(j) + " sums to " + std::to_string(sum);
      break;
    }
  }
  report.add("columns nonnegative and summing to 1", sums_ok, sums_detail);

  bool chains_ok = true;
  std::string chain_detail;
  for (int j = map.m(); j < n && chains_ok; ++j) {
    int units = 0;
    int nonzeros = 0;
    for (int i = 0; i < n; ++i) {
      const double v = q(i, j);
      if (v != 0.0) ++nonzeros;
      if (v == 1.0) ++units;
    }
    if (units != 1 || nonzeros != 1) {
      chains_ok = false;
      chain_detail = "chain column " + std::to_string(j) + " has " +
                     std::to_string(nonzeros) + " entries (" + std::to_string(units) +
                     " unit)";
    }
  }
  report.add("each chain column forwards exactly once", chains_ok, chain_detail);

  bool diag_ok = true;
  std::string diag_detail;
  for (int i = 0; i < map.m(); ++i) {
    if (!(q(i, i) > 0.0)) {
      diag_ok = false;
      diag_detail = "compute node " + std::to_string(i) + " has no self-loop mass";
      break;
    }
  }
  report.add("compute-node self-loops undelayed", diag_ok, diag_detail);
  return report;
}

Report validate_augmented(const ColumnStochasticMatrix& q, const AugmentedIndexMap& map) {
  return validate_augmented(q.matrix(), map);
}

AugmentedSystem::AugmentedSystem(TimeVaryingDigraph graph, DelaySpec delays)
    : graph_(std::move(graph)), delays_(std::move(delays)) {
  // exact order match: the delay-node layout follows this shared enumeration
  if (delays_.edges() != graph_.union_edges()) {
    throw ConfigError("delay spec must list the graph's union edges in the same order");
  }
  map_ = build_index_map(delays_.edges(), delays_, graph_.node_count());
  const long slots = graph_.schedule_length();
  p_slots_.reserve(static_cast<std::size_t>(slots));
  q_slots_.reserve(static_cast<std::size_t>(slots));
  for (long t = 0; t < slots; ++t) {
    const EdgeList& active = graph_.edges_at(t);
    p_slots_.push_back(build_p_matrix(active, graph_.node_count()));
    q_slots_.push_back(augment_matrix(p_slots_.back(), active, map_, delays_));
  }
}

const ColumnStochasticMatrix& AugmentedSystem::p_at(long t) const {
  if (t < 0) throw ConfigError("negative time index");
  if (graph_.cyclic()) return p_slots_[static_cast<std::size_t>(t % graph_.schedule_length())];
  if (t >= graph_.schedule_length()) {
    throw ConfigError("time " + std::to_string(t) + " past the end of the schedule");
  }
  return p_slots_[static_cast<std::size_t>(t)];
}

const ColumnStochasticMatrix& AugmentedSystem::q_at(long t) const {
  if (t < 0) throw ConfigError("negative time index");
  if (graph_.cyclic()) return q_slots_[static_cast<std::size_t>(t % graph_.schedule_length())];
  if (t >= graph_.schedule_length()) {
    throw ConfigError("time " + std::to_string(t) + " past the end of the schedule");
  }
  return q_slots_[static_cast<std::size_t>(t)];
}

double empirical_delta(const AugmentedSystem& system, long steps) {
  const int m = system.m();
  Eigen::MatrixXd product = system.q_at(0).matrix();
  double lo = std::numeric_limits<double>::infinity();
  for (long t = 0;;) {
    for (int i = 0; i < m; ++i) {
      lo = std::min(lo, product.row(i).head(m).sum());
    }
    if (++t > steps) break;
    product = (system.q_at(t).matrix() * product).eval();
  }
  return lo;
}

}  // namespace psdda
