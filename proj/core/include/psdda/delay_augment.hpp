#pragma once

#include <utility>
#include <vector>

#include "psdda/graph.hpp"
#include "psdda/report.hpp"
#include "psdda/stochastic_matrix.hpp"

namespace psdda {

// Per-edge communication delays, aligned to the canonical union edge order.
// An edge with delay tau is realized as a chain of tau forwarding nodes;
// self-loops carry no delay by construction (they are never stored as edges).
class DelaySpec {
public:
  DelaySpec(EdgeList union_edges, std::vector<int> per_edge);
  static DelaySpec uniform(const EdgeList& union_edges, int tau_edge);
  // Exact cover required: every union edge once, no unknown edges.
  static DelaySpec from_pairs(const EdgeList& union_edges,
                              const std::vector<std::pair<Edge, int>>& pairs);

  const EdgeList& edges() const { return edges_; }
  int delay(int edge_index) const { return per_edge_[static_cast<std::size_t>(edge_index)]; }
  int delay(const Edge& e) const;
  int tau_max() const { return tau_max_; }
  int tau_total() const { return tau_total_; }

private:
  EdgeList edges_;
  std::vector<int> per_edge_;
  int tau_max_ = 0;
  int tau_total_ = 0;
};

// Global indexing of the augmented network: compute nodes occupy 0..m-1 and
// delay nodes m..m+tau-1, assigned contiguously per edge in canonical edge
// order with chain positions ascending.
class AugmentedIndexMap {
public:
  AugmentedIndexMap() = default;
  AugmentedIndexMap(int compute_nodes, std::vector<int> chain_start, std::vector<int> chain_len);

  int m() const { return m_; }
  int tau() const { return tau_; }
  int n() const { return m_ + tau_; }

  int chain_length(int edge_index) const { return chain_len_[static_cast<std::size_t>(edge_index)]; }
  // Global index of the k-th delay node of edge r, k in [0, chain_length(r)).
  int chain_node(int edge_index, int k) const;
  int chain_first(int edge_index) const { return chain_node(edge_index, 0); }
  int chain_last(int edge_index) const {
    return chain_node(edge_index, chain_length(edge_index) - 1);
  }

private:
  int m_ = 0;
  int tau_ = 0;
  std::vector<int> chain_start_;  // global index of first chain node, -1 for zero-delay edges
  std::vector<int> chain_len_;
};

AugmentedIndexMap build_index_map(const EdgeList& union_edges, const DelaySpec& delays,
                                  int compute_nodes);

// Inserts the delay chains into P: an active delayed edge (i, j) has its
// direct entry removed and its weight routed to the head of the chain; every
// chain node always forwards its whole state one hop; the tail always feeds j.
// Zero-delay edges keep their direct entry, so Q == P when all delays vanish.
ColumnStochasticMatrix augment_matrix(const ColumnStochasticMatrix& p, const EdgeList& active,
                                      const AugmentedIndexMap& map, const DelaySpec& delays);

// Column stochasticity, one unit forward link per chain column, positive
// compute-node diagonals (self-loops are undelayed). Takes a raw matrix so
// corrupted candidates can be diagnosed instead of rejected at construction.
Report validate_augmented(const Eigen::MatrixXd& q, const AugmentedIndexMap& map);
Report validate_augmented(const ColumnStochasticMatrix& q, const AugmentedIndexMap& map);

// A validated (graph, delays) pair with the per-slot P(t) and Q(t) matrices
// built once; all state needed to drive a delayed run.
class AugmentedSystem {
public:
  AugmentedSystem(TimeVaryingDigraph graph, DelaySpec delays);

  const TimeVaryingDigraph& graph() const { return graph_; }
  const DelaySpec& delays() const { return delays_; }
  const AugmentedIndexMap& index_map() const { return map_; }
  int m() const { return graph_.node_count(); }
  int tau() const { return delays_.tau_total(); }
  int n() const { return map_.n(); }

  const ColumnStochasticMatrix& p_at(long t) const;
  const ColumnStochasticMatrix& q_at(long t) const;

private:
  TimeVaryingDigraph graph_;
  DelaySpec delays_;
  AugmentedIndexMap map_;
  std::vector<ColumnStochasticMatrix> p_slots_;
  std::vector<ColumnStochasticMatrix> q_slots_;
};

// Smallest compute-row mass of the running product Q(t:0) observed over the
// given horizon: min over t <= steps and compute rows i of sum_j<m [Q(t:0)]_ij.
double empirical_delta(const AugmentedSystem& system, long steps);

}  // namespace psdda
