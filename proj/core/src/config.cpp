#include "psdda/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "psdda/errors.hpp"
#include "psdda/random.hpp"

namespace psdda {

using nlohmann::json;

namespace {

std::vector<std::vector<std::array<int, 2>>> parse_schedule(const json& j) {
  std::vector<std::vector<std::array<int, 2>>> schedule;
  for (const auto& step : j) {
    std::vector<std::array<int, 2>> edges;
    for (const auto& e : step) {
      if (!e.is_array() || e.size() != 2) {
        throw ConfigError("schedule edges must be [src, dst] pairs");
      }
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    schedule.push_back(std::move(edges));
  }
  return schedule;
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  c.preset = j.value("preset", c.preset);
  c.m = j.value("m", c.m);
  c.window = j.value("B", c.window);
  c.cyclic = j.value("cyclic", c.cyclic);
  if (j.contains("schedule")) c.schedule = parse_schedule(j["schedule"]);
  if (j.contains("union_order")) {
    for (const auto& e : j["union_order"]) {
      c.union_order.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    }
  }
  if (j.contains("delays")) {
    const json& d = j["delays"];
    if (d.is_number_integer()) {
      c.delays.uniform = d.get<int>();
    } else if (d.is_object() && d.contains("uniform")) {
      c.delays.uniform = d["uniform"].get<int>();
    } else if (d.is_object() && d.contains("edges")) {
      for (const auto& entry : d["edges"]) {
        const auto& e = entry.at(0);
        c.delays.per_edge.push_back(
            {Edge{e.at(0).get<int>(), e.at(1).get<int>()}, entry.at(1).get<int>()});
      }
    } else {
      throw ConfigError("delays must be an integer, {\"uniform\": k} or {\"edges\": [...]}");
    }
  }
  if (j.contains("objective")) {
    const json& o = j["objective"];
    c.objective.kind = o.value("kind", c.objective.kind);
    c.objective.dimension = o.value("dimension", c.objective.dimension);
    if (o.contains("h")) c.objective.radius = o["h"].get<double>();
    c.objective.target_range = o.value("target_range", c.objective.target_range);
    c.objective.x_true = o.value("x_true", c.objective.x_true);
  }
  if (j.contains("step")) {
    const json& s = j["step"];
    c.step.kind = s.value("kind", c.step.kind);
    if (s.contains("Lambda")) c.step.lambda_coeff = s["Lambda"].get<double>();
    c.step.delta_mode = s.value("delta_mode", c.step.delta_mode);
  }
  c.T = j.value("T", c.T);
  c.seed = j.value("seed", c.seed);
  c.output = j.value("output", c.output);
  c.stride = j.value("stride", c.stride);
  c.oracle_tol = j.value("oracle_tol", c.oracle_tol);
  if (j.contains("x0")) c.x0 = j["x0"].get<std::vector<double>>();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const RunConfig& c) {
  json j;
  if (!c.preset.empty()) j["preset"] = c.preset;
  if (c.m > 0) j["m"] = c.m;
  j["B"] = c.window;
  j["cyclic"] = c.cyclic;
  if (!c.schedule.empty()) j["schedule"] = c.schedule;
  if (!c.union_order.empty()) j["union_order"] = c.union_order;
  if (c.delays.uniform.has_value()) {
    j["delays"] = {{"uniform", *c.delays.uniform}};
  } else if (!c.delays.per_edge.empty()) {
    json edges = json::array();
    for (const auto& [e, tau] : c.delays.per_edge) {
      edges.push_back(json::array({json::array({e.src, e.dst}), tau}));
    }
    j["delays"] = {{"edges", edges}};
  }
  j["objective"] = {{"kind", c.objective.kind},
                    {"dimension", c.objective.dimension},
                    {"target_range", c.objective.target_range},
                    {"x_true", c.objective.x_true}};
  if (c.objective.radius.has_value()) j["objective"]["h"] = *c.objective.radius;
  j["step"] = {{"kind", c.step.kind}, {"delta_mode", c.step.delta_mode}};
  if (c.step.lambda_coeff.has_value()) j["step"]["Lambda"] = *c.step.lambda_coeff;
  j["T"] = c.T;
  j["seed"] = c.seed;
  if (!c.output.empty()) j["output"] = c.output;
  if (c.stride > 0) j["stride"] = c.stride;
  j["oracle_tol"] = c.oracle_tol;
  if (!c.x0.empty()) j["x0"] = c.x0;
  return j.dump(2);
}

namespace {

// Three-node ring whose window activates one edge at a time; with uniform
// delay 2 its augmented matrices are the worked golden example.
void preset_example1(RunConfig& c) {
  c.m = 3;
  c.window = 3;
  c.schedule = {{{0, 1}}, {{1, 2}}, {{2, 0}}};
  if (!c.delays.uniform && c.delays.per_edge.empty()) c.delays.uniform = 2;
}

// Eight nodes, four graphs per window; the benchmark topology shared by the
// quadratic and sensor experiment families.
void preset_graphs_8(RunConfig& c) {
  c.m = 8;
  c.window = 4;
  c.schedule = {
      {{0, 2}, {4, 7}},
      {{1, 4}, {3, 6}, {5, 0}},
      {{1, 3}, {7, 5}},
      {{2, 1}, {4, 0}, {6, 5}},
  };
  if (!c.delays.uniform && c.delays.per_edge.empty()) c.delays.uniform = 4;
}

}  // namespace

void apply_preset(RunConfig& c) {
  if (c.preset.empty()) return;
  if (!c.schedule.empty()) {
    throw ConfigError("give either a preset or an explicit schedule, not both");
  }
  if (c.preset == "example1") {
    preset_example1(c);
  } else if (c.preset == "quad8") {
    preset_graphs_8(c);
    c.objective.kind = "quadratic";
  } else if (c.preset == "sensor8") {
    preset_graphs_8(c);
    c.objective.kind = "sensor";
  } else {
    throw ConfigError("unknown preset '" + c.preset +
                      "' (available: example1, quad8, sensor8)");
  }
}

double Instance::bound_at(long t) const {
  if (!constants.has_value()) return std::numeric_limits<double>::infinity();
  return error_bound(t, R, L, gamma_used);
}

Instance build_instance(const RunConfig& input) {
  RunConfig c = input;
  apply_preset(c);

  if (c.m <= 0) throw ConfigError("node count m must be positive");
  if (c.schedule.empty()) throw ConfigError("config has no graph schedule");
  if (c.T < 1) throw ConfigError("T must be >= 1");

  std::vector<EdgeList> schedule;
  schedule.reserve(c.schedule.size());
  for (const auto& step : c.schedule) {
    std::vector<Edge> edges;
    edges.reserve(step.size());
    for (const auto& e : step) edges.push_back({e[0], e[1]});
    schedule.push_back(EdgeList::canonical(std::move(edges)));
  }
  std::optional<EdgeList> union_order;
  if (!c.union_order.empty()) {
    std::vector<Edge> edges;
    edges.reserve(c.union_order.size());
    for (const auto& e : c.union_order) edges.push_back({e[0], e[1]});
    union_order = EdgeList::explicit_order(std::move(edges));
  }
  TimeVaryingDigraph graph(c.m, std::move(schedule), c.window, c.cyclic, union_order);

  DelaySpec delays = [&]() {
    if (c.delays.uniform.has_value()) {
      return DelaySpec::uniform(graph.union_edges(), *c.delays.uniform);
    }
    if (!c.delays.per_edge.empty()) {
      return DelaySpec::from_pairs(graph.union_edges(), c.delays.per_edge);
    }
    return DelaySpec::uniform(graph.union_edges(), 0);
  }();

  const double default_radius = c.objective.kind == "sensor" ? 0.1 : 3.0;
  const FeasibleSet set = FeasibleSet::l1_ball(c.objective.radius.value_or(default_radius));

  std::shared_ptr<Objective> objective;
  const std::uint64_t objective_seed = derive_seed(c.seed, "objective");
  if (c.objective.kind == "quadratic") {
    objective = std::make_shared<QuadraticObjective>(QuadraticObjective::seeded(
        c.m, c.objective.dimension, c.objective.target_range, objective_seed));
  } else if (c.objective.kind == "sensor") {
    objective = std::make_shared<SensorObjective>(
        SensorObjective::seeded(c.m, c.objective.x_true, objective_seed));
  } else {
    throw ConfigError("unknown objective kind '" + c.objective.kind +
                      "' (available: quadratic, sensor)");
  }

  std::optional<ConvergenceConstants> constants;
  try {
    constants = convergence_constants(c.m, c.window, delays.tau_max());
  } catch (const ConfigError&) {
    constants.reset();  // Omega < 3: bound out of domain, simulation still valid
  }

  const double R = std::sqrt(set.psi_sup());
  const double L = objective->lipschitz_bound(set);
  auto [x_star, f_star] = objective->optimum(set);

  double gamma_used = constants ? constants->gamma : std::numeric_limits<double>::infinity();
  StepSchedule step_schedule = StepSchedule::basic(1.0);
  if (c.step.kind == "basic") {
    step_schedule = StepSchedule::basic(c.step.lambda_coeff.value_or(R / L));
  } else if (c.step.kind == "optimal") {
    if (!constants) {
      throw ConfigError("optimal step size needs Omega >= 3");
    }
    if (c.step.delta_mode == "empirical") {
      AugmentedSystem system(graph, delays);
      const long horizon = std::max<long>(4 * constants->omega, 200);
      gamma_used = gamma_with_delta(*constants, empirical_delta(system, horizon));
    } else if (c.step.delta_mode != "lower_bound") {
      throw ConfigError("delta_mode must be lower_bound or empirical");
    }
    step_schedule = StepSchedule::optimal(R, L, gamma_used);
  } else {
    throw ConfigError("step kind must be basic or optimal");
  }

  const int d = objective->dimension();
  Eigen::MatrixXd x0;
  if (c.x0.empty()) {
    x0 = Eigen::MatrixXd::Zero(c.m, d);
  } else {
    if (c.x0.size() != static_cast<std::size_t>(c.m) * static_cast<std::size_t>(d)) {
      throw ConfigError("x0 must hold m*d values (row-major)");
    }
    x0.resize(c.m, d);
    for (int i = 0; i < c.m; ++i) {
      for (int k = 0; k < d; ++k) {
        x0(i, k) = c.x0[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) +
                        static_cast<std::size_t>(k)];
      }
    }
    for (int i = 0; i < c.m; ++i) {
      if (!set.contains(x0.row(i).transpose())) {
        throw ConfigError("x0 row " + std::to_string(i) + " lies outside the feasible set");
      }
    }
  }

  return Instance{std::move(graph), std::move(delays),   std::move(objective),
                  set,              std::move(step_schedule), std::move(x0),
                  c.T,              constants,           R,
                  L,                std::move(x_star),   f_star,
                  gamma_used};
}

}  // namespace psdda
