#ifndef FRACINV_EXPERIMENT_HPP
#define FRACINV_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracinv/direct_solver.hpp"
#include "fracinv/inverse.hpp"
#include "fracinv/spectral_domain.hpp"

namespace fracinv {

using Json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Diffusivity used to synthesise data.
///   a1:       sin(5 pi t) + 1.3
///   a2:       piecewise "smile", left-closed pieces [0,1/3], (1/3,2/3), [2/3,1]
///   constant: c
///   table:    linear interpolation of values on a uniform partition of [0, T]
struct CoefficientSpec {
  enum class Kind { a1, a2, constant, table };
  Kind kind = Kind::a1;
  double c = 1.0;
  Vector table;

  double operator()(double t, double horizon) const;
  Vector sample(const TimeGrid& grid) const;
  Json to_json() const;
  static CoefficientSpec from_json(const Json& j);
};

enum class SweepParameter { alpha, epsilon0, delta };

std::string to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(const std::string& name);

/// Fully resolved experiment description. Function descriptors are kept in
/// their JSON form so a summary can embed and replay them.
struct ExperimentConfig {
  DomainKind domain = DomainKind::interval;
  Point x0 = Point::Zero();
  double alpha = 0.9;
  double T = 1.0;
  int Nt = 1000;
  int modes = 32;
  Json u0 = "neg_sin_pi_x";
  Json source = Json::object();
  CoefficientSpec coefficient;
  double epsilon0 = 1e-6;
  int max_iters = 500;
  double delta = 0.0;
  std::uint64_t seed = 1;
  bool inverse_crime = false;
  int fine_factor = 2;
  bool check_assumptions = true;
  int snapshots = 3;
  std::string output_dir = "out";
  std::optional<SweepParameter> sweep_parameter;
  std::vector<double> sweep_values;

  Json to_json() const;
  /// Accepts either a bare config object or a summary document carrying one
  /// under "config". Missing keys take their defaults.
  static ExperimentConfig from_json(const Json& j);
};

ExperimentConfig load_config(const std::filesystem::path& path);

SpatialField parse_spatial(const Json& j);
TimeProfile parse_profile(const Json& j, double horizon);
SourceSpec parse_source(const Json& j, double horizon);

/// Eigensystem and modal data for a config, on its own grid.
struct Problem {
  TimeGrid grid;
  EigenSystem es;
  ProblemData pd;
};

Problem build_problem(const ExperimentConfig& cfg);
Problem build_problem(const ExperimentConfig& cfg, const TimeGrid& grid);

/// Exact flux for the configured coefficient on cfg's grid. Unless
/// inverse_crime is set, the forward solve runs on a grid fine_factor times
/// finer and is restricted to the coarse nodes.
FluxTrace synthesize_flux(const ExperimentConfig& cfg, const Problem& problem);

struct DirectOutcome {
  Problem problem;
  Vector a_true;
  ModeTrace trace;
  FluxTrace flux;
};

struct InvertOutcome {
  Problem problem;
  Vector a_true;
  AssumptionReport report;
  ReconstructionResult result;
  double l2_error = 0.0;
  double rel_l2_error = 0.0;
};

struct SweepRow {
  double value = 0.0;
  int n_iters = 0;
  bool converged = false;
  double l2_error = 0.0;
  double rel_l2_error = 0.0;
  std::string status = "ok";
};

struct SweepOutcome {
  SweepParameter parameter;
  std::vector<SweepRow> rows;
  std::optional<double> slope;  // log-log slope of error vs value (epsilon0, delta)
};

DirectOutcome direct(const ExperimentConfig& cfg);
InvertOutcome invert(const ExperimentConfig& cfg);
SweepOutcome sweep(const ExperimentConfig& cfg, SweepParameter parameter, const std::vector<double>& values);

/// Each run_* writes its CSV plus summary.json into cfg.output_dir.
DirectOutcome run_direct(const ExperimentConfig& cfg);
InvertOutcome run_invert(const ExperimentConfig& cfg);
SweepOutcome run_sweep(const ExperimentConfig& cfg, SweepParameter parameter, const std::vector<double>& values);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Numerical property checks of the Mittag-Leffler evaluator (bound,
/// positivity, complete monotonicity, derivative identity).
std::vector<CheckResult> special_function_checks();

struct ValidateOutcome {
  AssumptionReport report;
  std::vector<CheckResult> checks;
  bool passed() const;
};

ValidateOutcome run_validate(const ExperimentConfig& cfg);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation (average ranks for ties).
double spearman(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

}  // namespace fracinv

#endif  // FRACINV_EXPERIMENT_HPP
