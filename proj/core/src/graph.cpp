#include "psdda/graph.hpp"

#include <algorithm>
#include <set>

#include "psdda/errors.hpp"

namespace psdda {

std::string to_string(const Edge& e) {
  return "(" + std::to_string(e.src) + "," + std::to_string(e.dst) + ")";
}

namespace {

void check_edges(const std::vector<Edge>& edges) {
  for (const Edge& e : edges) {
    if (e.src < 0 || e.dst < 0) {
      throw ConfigError("edge " + to_string(e) + " has a negative endpoint");
    }
    if (e.src == e.dst) {
      throw ConfigError("self-loop edge " + to_string(e) +
                        " is not allowed; self-loops are implicit");
    }
  }
}

void check_no_duplicates(const std::vector<Edge>& edges) {
  std::set<Edge> seen;
  for (const Edge& e : edges) {
    if (!seen.insert(e).second) {
      throw ConfigError("duplicate edge " + to_string(e));
    }
  }
}

}  // namespace

EdgeList EdgeList::canonical(std::vector<Edge> edges) {
  check_edges(edges);
  check_no_duplicates(edges);
  std::sort(edges.begin(), edges.end());
  return EdgeList(std::move(edges));
}

EdgeList EdgeList::explicit_order(std::vector<Edge> edges) {
  check_edges(edges);
  check_no_duplicates(edges);
  return EdgeList(std::move(edges));
}

int EdgeList::index_of(const Edge& e) const {
  for (std::size_t r = 0; r < edges_.size(); ++r) {
    if (edges_[r] == e) return static_cast<int>(r);
  }
  return -1;
}

bool EdgeList::same_set(const EdgeList& other) const {
  if (size() != other.size()) return false;
  std::set<Edge> a(edges_.begin(), edges_.end());
  std::set<Edge> b(other.edges_.begin(), other.edges_.end());
  return a == b;
}

int EdgeList::max_node() const {
  int hi = -1;
  for (const Edge& e : edges_) hi = std::max({hi, e.src, e.dst});
  return hi;
}

TimeVaryingDigraph::TimeVaryingDigraph(int node_count, std::vector<EdgeList> schedule,
                                       int window_length, bool cyclic,
                                       std::optional<EdgeList> union_order)
    : m_(node_count),
      window_length_(window_length),
      cyclic_(cyclic),
      schedule_(std::move(schedule)) {
  if (m_ <= 0) throw ConfigError("node count must be positive");
  if (window_length_ <= 0) throw ConfigError("window length must be positive");
  if (schedule_.empty()) throw ConfigError("schedule must hold at least one edge set");
  if (cyclic_ && schedule_length() % window_length_ != 0) {
    throw ConfigError("cyclic schedule length " + std::to_string(schedule_length()) +
                      " is not a multiple of the window length " +
                      std::to_string(window_length_));
  }
  for (const EdgeList& step : schedule_) {
    if (step.max_node() >= m_) {
      throw ConfigError("edge endpoint " + std::to_string(step.max_node()) +
                        " exceeds node count " + std::to_string(m_));
    }
  }

  // Every complete window must produce one and the same union edge set; a
  // trailing partial window may only use edges from it.
  const long complete = window_count();
  std::set<Edge> first_union;
  for (long w = 0; w < std::max<long>(complete, 1); ++w) {
    std::set<Edge> u;
    const long lo = w * window_length_;
    const long hi = std::min<long>(lo + window_length_, schedule_length());
    for (long t = lo; t < hi; ++t) {
      const auto& step = schedule_[static_cast<std::size_t>(t)];
      u.insert(step.begin(), step.end());
    }
    if (w == 0) {
      first_union = std::move(u);
    } else if (u != first_union) {
      throw ConfigError("window " + std::to_string(w) +
                        " has a different union edge set than window 0; the delay "
                        "model requires one fixed union");
    }
  }
  if (complete == 0) {
    // schedule shorter than one window: its union is the union set
    // (degenerate, but keeps single-shot schedules usable)
  } else if (schedule_length() % window_length_ != 0) {
    const long lo = complete * window_length_;
    for (long t = lo; t < schedule_length(); ++t) {
      for (const Edge& e : schedule_[static_cast<std::size_t>(t)]) {
        if (first_union.find(e) == first_union.end()) {
          throw ConfigError("trailing partial window uses edge " + to_string(e) +
                            " outside the common union");
        }
      }
    }
  }

  union_ = EdgeList::canonical({first_union.begin(), first_union.end()});
  if (union_order.has_value()) {
    if (!union_order->same_set(union_)) {
      throw ConfigError("explicit union order does not list exactly the union edges");
    }
    union_ = *union_order;
  }
}

long TimeVaryingDigraph::window_count() const {
  return schedule_length() / window_length_;
}

const EdgeList& TimeVaryingDigraph::edges_at(long t) const {
  if (t < 0) throw ConfigError("negative time index");
  if (cyclic_) {
    return schedule_[static_cast<std::size_t>(t % schedule_length())];
  }
  if (t >= schedule_length()) {
    throw ConfigError("time " + std::to_string(t) +
                      " is past the end of a non-cyclic schedule of length " +
                      std::to_string(schedule_length()));
  }
  return schedule_[static_cast<std::size_t>(t)];
}

EdgeList union_edges(const TimeVaryingDigraph& g, long window) {
  if (window < 0) throw ConfigError("window index must be nonnegative");
  const long lo = window * g.window_length();
  const long hi = lo + g.window_length() - 1;
  if (!g.cyclic() && hi >= g.schedule_length()) {
    throw ConfigError("window " + std::to_string(window) +
                      " is out of range for a non-cyclic schedule");
  }
  std::set<Edge> u;
  for (long t = lo; t <= hi; ++t) {
    const EdgeList& step = g.edges_at(t);
    u.insert(step.begin(), step.end());
  }
  return EdgeList::canonical({u.begin(), u.end()});
}

int out_degree(const EdgeList& active, int node, int node_count) {
  if (node < 0 || node >= node_count) {
    throw ConfigError("node " + std::to_string(node) + " out of range 0.." +
                      std::to_string(node_count - 1));
  }
  int degree = 1;  // implicit self-loop
  for (const Edge& e : active) {
    if (e.src == node) ++degree;
  }
  return degree;
}

bool strongly_connected(const EdgeList& edges, int node_count) {
  if (node_count <= 0) return false;
  if (node_count == 1) return true;
  std::vector<std::vector<int>> out(static_cast<std::size_t>(node_count));
  std::vector<std::vector<int>> in(static_cast<std::size_t>(node_count));
  for (const Edge& e : edges) {
    out[static_cast<std::size_t>(e.src)].push_back(e.dst);
    in[static_cast<std::size_t>(e.dst)].push_back(e.src);
  }
  auto reaches_all = [&](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(static_cast<std::size_t>(node_count), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const int u : adj[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          ++count;
          stack.push_back(u);
        }
      }
    }
    return count == node_count;
  };
  return reaches_all(out) && reaches_all(in);
}

Report ConnectivityReport::as_report() const {
  Report r;
  for (const auto& w : windows) {
    r.add("window " + std::to_string(w.window) + " strongly connected",
          w.strongly_connected);
  }
  return r;
}

ConnectivityReport validate_b_connectivity(const TimeVaryingDigraph& g) {
  ConnectivityReport report;
  const long windows = g.cyclic() ? g.window_count()
                                  : std::max<long>(g.window_count(), 1);
  for (long w = 0; w < windows; ++w) {
    EdgeList u = (!g.cyclic() && (w + 1) * g.window_length() > g.schedule_length())
                     ? g.union_edges()
                     : union_edges(g, w);
    report.windows.push_back({w, strongly_connected(u, g.node_count())});
  }
  report.pass = std::all_of(report.windows.begin(), report.windows.end(),
                            [](const WindowConnectivity& w) { return w.strongly_connected; });
  return report;
}

}  // namespace psdda
