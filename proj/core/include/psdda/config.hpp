#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psdda/delay_augment.hpp"
#include "psdda/objectives.hpp"
#include "psdda/psdda.hpp"

namespace psdda {

inline constexpr std::uint64_t kDefaultSeed = 12345;

struct DelayConfig {
  std::optional<int> uniform;                    // same delay on every union edge
  std::vector<std::pair<Edge, int>> per_edge;    // or an explicit exact cover
};

struct ObjectiveConfig {
  std::string kind = "quadratic";   // quadratic | sensor
  int dimension = 2;                // quadratic only; sensor is scalar
  std::optional<double> radius;     // feasible l1 ball; defaults per kind (3.0 / 0.1)
  double target_range = 2.0;        // quadratic targets uniform on [-range, range]^d
  double x_true = 0.0;              // sensor ground truth
};

struct StepConfig {
  std::string kind = "basic";           // basic | optimal
  std::optional<double> lambda_coeff;   // basic; defaults to R/L
  std::string delta_mode = "lower_bound";  // optimal: lower_bound | empirical
};

// Everything needed to reproduce a run. Serializable to/from JSON with the
// documented key set (see README).
struct RunConfig {
  std::string preset;  // "", example1, quad8, sensor8
  int m = 0;
  int window = 1;
  bool cyclic = true;
  std::vector<std::vector<std::array<int, 2>>> schedule;  // per-step edge lists
  // optional explicit enumeration of the union edges; pins the delay-node layout
  std::vector<std::array<int, 2>> union_order;
  DelayConfig delays;
  ObjectiveConfig objective;
  StepConfig step;
  long T = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::string output;     // CSV path, "-" or "" for stdout
  long stride = 0;        // sampling stride; 0 picks 1 for T <= 1000 else 10
  double oracle_tol = 1e-10;   // verify: trajectory equivalence tolerance
  std::vector<double> x0;      // flattened m x d row-major; empty = zeros

  long effective_stride() const { return stride > 0 ? stride : (T <= 1000 ? 1 : 10); }
};

RunConfig config_from_json_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_json_text(const RunConfig& config);

// Fills graph/objective fields from the named preset; explicit fields win.
void apply_preset(RunConfig& config);

// A validated, fully resolved instance ready to run.
struct Instance {
  TimeVaryingDigraph graph;
  DelaySpec delays;
  std::shared_ptr<Objective> objective;
  FeasibleSet set;
  StepSchedule schedule;
  Eigen::MatrixXd x0;
  long T = 0;
  // Absent when Omega < 3 (bound theory out of domain; simulation still runs).
  std::optional<ConvergenceConstants> constants;
  double R = 0.0;
  double L = 0.0;
  Eigen::VectorXd x_star;
  double f_star = 0.0;
  double gamma_used = 0.0;  // the Gamma behind the schedule/bound columns

  // Error bound at horizon t; +inf when constants are absent.
  double bound_at(long t) const;
};

// Resolves presets, validates the graph and delay spec, derives constants,
// R, L and the step schedule. Throws ConfigError with precise messages.
Instance build_instance(const RunConfig& config);

}  // namespace psdda
