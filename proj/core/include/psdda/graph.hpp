#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psdda/report.hpp"

namespace psdda {

// Directed edge between compute nodes. Node indices are 0-based everywhere.
// Self-loops are implicit in the weight rule and never stored.
struct Edge {
  int src = 0;
  int dst = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

std::string to_string(const Edge& e);

// Ordered, duplicate-free enumeration of directed edges. The order is the
// canonical enumeration used for delay-node placement: lexicographic by
// (src, dst) unless an explicit order is supplied.
class EdgeList {
public:
  EdgeList() = default;

  // Sorts lexicographically. Throws ConfigError on duplicates, self-loops,
  // or negative endpoints.
  static EdgeList canonical(std::vector<Edge> edges);

  // Keeps the given order (for configs that pin the delay-node layout).
  static EdgeList explicit_order(std::vector<Edge> edges);

  int size() const { return static_cast<int>(edges_.size()); }
  bool empty() const { return edges_.empty(); }
  const Edge& operator[](int r) const { return edges_[static_cast<std::size_t>(r)]; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool contains(const Edge& e) const { return index_of(e) >= 0; }
  int index_of(const Edge& e) const;  // -1 when absent

  bool same_set(const EdgeList& other) const;  // order-insensitive comparison
  int max_node() const;                        // -1 when empty

  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }

  friend bool operator==(const EdgeList&, const EdgeList&) = default;

private:
  explicit EdgeList(std::vector<Edge> edges) : edges_(std::move(edges)) {}
  std::vector<Edge> edges_;
};

// Time-varying directed communication topology over m nodes. The schedule
// holds one edge set per step; window_length (B) steps form a window, and
// every complete window must have the same union edge set. When cyclic, the
// schedule repeats forever and its length must be a positive multiple of B.
class TimeVaryingDigraph {
public:
  TimeVaryingDigraph(int node_count, std::vector<EdgeList> schedule, int window_length,
                     bool cyclic = true,
                     std::optional<EdgeList> union_order = std::nullopt);

  int node_count() const { return m_; }
  int window_length() const { return window_length_; }
  bool cyclic() const { return cyclic_; }
  long schedule_length() const { return static_cast<long>(schedule_.size()); }
  long window_count() const;  // complete windows stored in the schedule

  // Edge set active at step t (cyclic schedules wrap; otherwise throws past the end).
  const EdgeList& edges_at(long t) const;

  // The common union over every window, in canonical order.
  const EdgeList& union_edges() const { return union_; }

private:
  int m_;
  int window_length_;
  bool cyclic_;
  std::vector<EdgeList> schedule_;
  EdgeList union_;
};

// Union of the window_length edge sets in the given window, canonically ordered.
EdgeList union_edges(const TimeVaryingDigraph& g, long window);

// Out-degree of `node` in `active` including the implicit self-loop; always >= 1.
int out_degree(const EdgeList& active, int node, int node_count);

bool strongly_connected(const EdgeList& edges, int node_count);

struct WindowConnectivity {
  long window = 0;
  bool strongly_connected = false;
};

struct ConnectivityReport {
  std::vector<WindowConnectivity> windows;
  bool pass = false;
  Report as_report() const;
};

// Checks strong connectivity of the union digraph of every window (one period
// for cyclic schedules). Failures are report entries, not faults.
ConnectivityReport validate_b_connectivity(const TimeVaryingDigraph& g);

}  // namespace psdda
