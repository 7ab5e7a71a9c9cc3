#include "fracinv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fracinv/special_functions.hpp"

namespace fracinv {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

Vector json_vector(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + "[" + std::to_string(i) + "]: expected a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json vector_json(const Eigen::Ref<const Vector>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

Json default_u0(DomainKind kind) {
  return kind == DomainKind::interval ? Json("neg_sin_pi_x") : Json("neg_sin_pi_xy_bubble");
}

Json default_source(DomainKind kind) {
  return Json{{"separable", {{"w", default_u0(kind)}, {"f", {{"affine", {1.0, 1.0}}}}}}};
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

void write_summary(const ExperimentConfig& cfg, const std::string& command, const Json& results) {
  const Json doc{{"command", command}, {"config", cfg.to_json()}, {"results", results}};
  write_text(std::filesystem::path(cfg.output_dir) / "summary.json", doc.dump(2) + "\n");
}

Json report_json(const AssumptionReport& rep) {
  Json j{{"initial_nonnegative", rep.initial_nonnegative},
         {"source_nonnegative", rep.source_nonnegative},
         {"distinguished_mode", rep.distinguished_mode ? Json(*rep.distinguished_mode) : Json(nullptr)},
         {"flux_positive", rep.flux_positive},
         {"existence_form", rep.existence_form},
         {"existence_bound", rep.existence_bound},
         {"inverse_ready", rep.inverse_ready()},
         {"existence_ready", rep.existence_ready()},
         {"notes", rep.notes}};
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Coefficients

double CoefficientSpec::operator()(double t, double horizon) const {
  switch (kind) {
    case Kind::a1:
      return std::sin(5.0 * kPi * t) + 1.3;
    case Kind::a2:
      if (t <= 1.0 / 3.0) return 0.8 * std::sin(3.0 * kPi * t) + 1.5;
      if (t < 2.0 / 3.0) return -0.5 * std::sin(3.0 * kPi * t - kPi) + 0.6;
      return 0.8 * std::sin(3.0 * kPi * t - 2.0 * kPi) + 1.5;
    case Kind::constant:
      return c;
    case Kind::table: {
      const Eigen::Index cells = table.size() - 1;
      const double s = std::clamp(t / horizon, 0.0, 1.0) * static_cast<double>(cells);
      const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(s), cells - 1);
      const double r = s - static_cast<double>(i);
      return (1.0 - r) * table[i] + r * table[i + 1];
    }
  }
  return 0.0;
}

Vector CoefficientSpec::sample(const TimeGrid& grid) const {
  Vector v(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) v[k] = (*this)(grid.node(k), grid.horizon());
  return v;
}

Json CoefficientSpec::to_json() const {
  switch (kind) {
    case Kind::a1:
      return "a1";
    case Kind::a2:
      return "a2";
    case Kind::constant:
      return Json{{"constant", c}};
    case Kind::table:
      return Json{{"table", vector_json(table)}};
  }
  return nullptr;
}

CoefficientSpec CoefficientSpec::from_json(const Json& j) {
  CoefficientSpec spec;
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "a1") return spec;
    if (name == "a2") {
      spec.kind = Kind::a2;
      return spec;
    }
    throw ConfigError("coefficient: unknown variant '" + name + "' (expected a1, a2, {constant}, {table})");
  }
  if (j.is_number()) {
    spec.kind = Kind::constant;
    spec.c = j.get<double>();
  } else if (j.is_object() && j.contains("constant")) {
    spec.kind = Kind::constant;
    spec.c = j.at("constant").get<double>();
  } else if (j.is_object() && j.contains("table")) {
    spec.kind = Kind::table;
    spec.table = json_vector(j.at("table"), "coefficient.table");
    require(spec.table.size() >= 2, "coefficient.table: need at least 2 values");
    require((spec.table.array() > 0.0).all(), "coefficient.table: values must be positive");
    return spec;
  } else {
    throw ConfigError("coefficient: expected \"a1\", \"a2\", {\"constant\": c} or {\"table\": [...]}");
  }
  require(spec.c > 0.0, "coefficient.constant: must be positive");
  return spec;
}

// ---------------------------------------------------------------------------
// Config

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::alpha:
      return "alpha";
    case SweepParameter::epsilon0:
      return "epsilon0";
    case SweepParameter::delta:
      return "delta";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "alpha") return SweepParameter::alpha;
  if (name == "epsilon0") return SweepParameter::epsilon0;
  if (name == "delta") return SweepParameter::delta;
  throw ConfigError("sweep parameter must be alpha, epsilon0 or delta, got '" + name + "'");
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["domain"] = fracinv::to_string(domain);
  j["x0"] = domain == DomainKind::interval ? Json(x0.x()) : Json{x0.x(), x0.y()};
  j["alpha"] = alpha;
  j["T"] = T;
  j["Nt"] = Nt;
  j["modes"] = modes;
  j["u0"] = u0;
  j["source"] = source;
  j["coefficient"] = coefficient.to_json();
  j["epsilon0"] = epsilon0;
  j["max_iters"] = max_iters;
  j["delta"] = delta;
  j["seed"] = seed;
  j["inverse_crime"] = inverse_crime;
  j["fine_factor"] = fine_factor;
  j["check_assumptions"] = check_assumptions;
  j["snapshots"] = snapshots;
  j["output_dir"] = output_dir;
  if (sweep_parameter) {
    j["sweep"] = Json{{"parameter", fracinv::to_string(*sweep_parameter)}, {"values", sweep_values}};
  }
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const Json& input) {
  const Json& j = (input.is_object() && input.contains("config")) ? input.at("config") : input;
  require(j.is_object(), "config: top level must be an object");

  static const std::vector<std::string> known = {
      "domain",   "x0",       "alpha",     "T",           "Nt",          "modes",
      "u0",       "source",   "coefficient", "epsilon0",  "max_iters",   "delta",
      "seed",     "inverse_crime", "fine_factor", "check_assumptions", "snapshots", "output_dir",
      "sweep"};
  for (const auto& [key, value] : j.items()) {
    require(std::find(known.begin(), known.end(), key) != known.end(), "config: unknown key '" + key + "'");
  }

  ExperimentConfig cfg;
  const auto domain = get_or<std::string>(j, "domain", "interval");
  if (domain == "interval") {
    cfg.domain = DomainKind::interval;
  } else if (domain == "square") {
    cfg.domain = DomainKind::square;
  } else {
    throw ConfigError("config key 'domain': expected interval or square, got '" + domain + "'");
  }

  if (cfg.domain == DomainKind::interval) {
    cfg.x0 = {get_or<double>(j, "x0", 0.0), 0.0};
    cfg.modes = get_or<int>(j, "modes", 32);
  } else {
    const Json x0 = j.contains("x0") ? j.at("x0") : Json{0.0, 0.5};
    require(x0.is_array() && x0.size() == 2, "config key 'x0': square domain needs [x, y]");
    cfg.x0 = {x0[0].get<double>(), x0[1].get<double>()};
    cfg.modes = get_or<int>(j, "modes", 64);
  }
  cfg.alpha = get_or<double>(j, "alpha", cfg.alpha);
  cfg.T = get_or<double>(j, "T", cfg.T);
  cfg.Nt = get_or<int>(j, "Nt", cfg.Nt);
  cfg.u0 = j.contains("u0") ? j.at("u0") : default_u0(cfg.domain);
  cfg.source = j.contains("source") ? j.at("source") : default_source(cfg.domain);
  if (j.contains("coefficient")) cfg.coefficient = CoefficientSpec::from_json(j.at("coefficient"));
  cfg.epsilon0 = get_or<double>(j, "epsilon0", cfg.epsilon0);
  cfg.max_iters = get_or<int>(j, "max_iters", cfg.max_iters);
  cfg.delta = get_or<double>(j, "delta", cfg.delta);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.inverse_crime = get_or<bool>(j, "inverse_crime", cfg.inverse_crime);
  cfg.fine_factor = get_or<int>(j, "fine_factor", cfg.fine_factor);
  cfg.check_assumptions = get_or<bool>(j, "check_assumptions", cfg.check_assumptions);
  cfg.snapshots = get_or<int>(j, "snapshots", cfg.snapshots);
  cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir);
  if (j.contains("sweep")) {
    const Json& s = j.at("sweep");
    require(s.is_object() && s.contains("parameter") && s.contains("values"),
            "config key 'sweep': expected {\"parameter\": ..., \"values\": [...]}");
    cfg.sweep_parameter = parse_sweep_parameter(s.at("parameter").get<std::string>());
    const Vector v = json_vector(s.at("values"), "sweep.values");
    cfg.sweep_values.assign(v.data(), v.data() + v.size());
  }

  require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "config key 'alpha': must lie in (0, 1)");
  require(cfg.T > 0.0, "config key 'T': must be positive");
  require(cfg.Nt >= 2, "config key 'Nt': must be at least 2");
  require(cfg.modes >= 1, "config key 'modes': must be at least 1");
  require(cfg.epsilon0 > 0.0, "config key 'epsilon0': must be positive");
  require(cfg.max_iters >= 1, "config key 'max_iters': must be at least 1");
  require(cfg.delta >= 0.0, "config key 'delta': must be nonnegative");
  require(cfg.fine_factor >= 1, "config key 'fine_factor': must be at least 1");
  require(cfg.snapshots >= 0, "config key 'snapshots': must be nonnegative");
  // Parse descriptors now so errors surface at load time.
  parse_spatial(cfg.u0);
  parse_source(cfg.source, cfg.T);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

SpatialField parse_spatial(const Json& j) {
  if (j.is_string()) return builtin_field(j.get<std::string>());
  if (j.is_object() && j.contains("builtin")) {
    return builtin_field(j.at("builtin").get<std::string>(), j.value("scale", 1.0));
  }
  if (j.is_object() && j.contains("tabulated")) {
    const Json& t = j.at("tabulated");
    require(t.is_array() && !t.empty(), "spatial tabulated: expected an array");
    if (t[0].is_array()) {
      Matrix m(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(t[0].size()));
      for (std::size_t r = 0; r < t.size(); ++r) {
        const Vector row = json_vector(t[r], "spatial tabulated row");
        require(row.size() == m.cols(), "spatial tabulated: ragged rows");
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
      }
      return tabulated_field_2d(std::move(m));
    }
    return tabulated_field_1d(json_vector(t, "spatial tabulated"));
  }
  throw ConfigError("spatial function: expected a built-in name, {builtin, scale} or {tabulated}");
}

TimeProfile parse_profile(const Json& j, double horizon) {
  if (j.is_number()) return constant_profile(j.get<double>());
  if (j.is_object() && j.contains("constant")) return constant_profile(j.at("constant").get<double>());
  if (j.is_object() && j.contains("affine")) {
    const Vector c = json_vector(j.at("affine"), "profile.affine");
    require(c.size() == 2, "profile.affine: expected [c0, c1]");
    return affine_profile(c[0], c[1]);
  }
  if (j.is_object() && j.contains("tabulated")) {
    return tabulated_profile(json_vector(j.at("tabulated"), "profile.tabulated"), horizon);
  }
  throw ConfigError("time profile: expected a number, {constant}, {affine: [c0, c1]} or {tabulated}");
}

SourceSpec parse_source(const Json& j, double horizon) {
  if (j.is_string() && j.get<std::string>() == "zero") return zero_source();
  if (j.is_object() && j.contains("separable")) {
    const Json& s = j.at("separable");
    require(s.contains("w") && s.contains("f"), "source.separable: needs w and f");
    return {parse_spatial(s.at("w")), parse_profile(s.at("f"), horizon)};
  }
  throw ConfigError("source: expected \"zero\" or {\"separable\": {\"w\": ..., \"f\": ...}}");
}

// ---------------------------------------------------------------------------
// Problems and data

Problem build_problem(const ExperimentConfig& cfg, const TimeGrid& grid) {
  EigenSystem es = cfg.domain == DomainKind::interval ? build_interval(cfg.modes, cfg.x0.x())
                                                      : build_square(cfg.modes, cfg.x0);
  ProblemData pd = project(es, parse_spatial(cfg.u0), parse_source(cfg.source, cfg.T), grid);
  return {grid, std::move(es), std::move(pd)};
}

Problem build_problem(const ExperimentConfig& cfg) { return build_problem(cfg, TimeGrid(cfg.T, cfg.Nt)); }

FluxTrace synthesize_flux(const ExperimentConfig& cfg, const Problem& problem) {
  const int factor = cfg.inverse_crime ? 1 : cfg.fine_factor;
  if (factor == 1) {
    const CoefficientSamples a(problem.grid, cfg.coefficient.sample(problem.grid));
    return flux_trace(problem.es, solve_direct(problem.es, problem.pd, a, cfg.alpha), a);
  }
  const TimeGrid fine = problem.grid.refined(factor);
  const Problem fine_problem = build_problem(cfg, fine);
  const CoefficientSamples a(fine, cfg.coefficient.sample(fine));
  const FluxTrace g = flux_trace(fine_problem.es, solve_direct(fine_problem.es, fine_problem.pd, a, cfg.alpha), a);
  Vector coarse(problem.grid.size());
  for (Eigen::Index k = 0; k < coarse.size(); ++k) coarse[k] = g.g[k * factor];
  return {problem.grid, std::move(coarse)};
}

// ---------------------------------------------------------------------------
// Runners

DirectOutcome direct(const ExperimentConfig& cfg) {
  Problem problem = build_problem(cfg);
  const CoefficientSamples a(problem.grid, cfg.coefficient.sample(problem.grid));
  ModeTrace trace = solve_direct(problem.es, problem.pd, a, cfg.alpha);
  FluxTrace flux = flux_trace(problem.es, trace, a);
  return {std::move(problem), a.values, std::move(trace), std::move(flux)};
}

InvertOutcome invert(const ExperimentConfig& cfg) {
  Problem problem = build_problem(cfg);
  const Vector a_true = cfg.coefficient.sample(problem.grid);
  const FluxTrace exact = synthesize_flux(cfg, problem);
  const FluxTrace data = cfg.delta > 0.0 ? add_noise(exact, cfg.delta, cfg.seed) : exact;
  AssumptionReport report = validate_assumptions(problem.pd, problem.es, data.g);

  InverseConfig icfg;
  icfg.alpha = cfg.alpha;
  icfg.epsilon0 = cfg.epsilon0;
  icfg.max_iters = cfg.max_iters;
  icfg.check_assumptions = cfg.check_assumptions;
  icfg.record_iterates = true;
  ReconstructionResult result = reconstruct(data, problem.es, problem.pd, icfg);

  const double err = l2_norm(result.a_rec.values - a_true, problem.grid);
  const double rel = err / l2_norm(a_true, problem.grid);
  return {std::move(problem), a_true, std::move(report), std::move(result), err, rel};
}

SweepOutcome sweep(const ExperimentConfig& cfg, SweepParameter parameter, const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  SweepOutcome out{parameter, {}, std::nullopt};
  for (const double value : values) {
    ExperimentConfig run = cfg;
    switch (parameter) {
      case SweepParameter::alpha:
        run.alpha = value;
        break;
      case SweepParameter::epsilon0:
        run.epsilon0 = value;
        break;
      case SweepParameter::delta:
        run.delta = value;
        break;
    }
    SweepRow row;
    row.value = value;
    try {
      const InvertOutcome r = invert(run);
      row.n_iters = r.result.n_iters;
      row.converged = r.result.converged;
      row.l2_error = r.l2_error;
      row.rel_l2_error = r.rel_l2_error;
      if (!row.converged) row.status = "not converged";
    } catch (const std::exception& e) {
      row.status = std::string("failed: ") + e.what();
      row.l2_error = row.rel_l2_error = std::numeric_limits<double>::quiet_NaN();
    }
    out.rows.push_back(row);
  }

  if (parameter != SweepParameter::alpha) {
    std::vector<double> x, y;
    for (const auto& row : out.rows) {
      const double e = parameter == SweepParameter::delta ? row.rel_l2_error : row.l2_error;
      if (row.status == "ok" && row.value > 0.0 && e > 0.0) {
        x.push_back(row.value);
        y.push_back(e);
      }
    }
    if (x.size() >= 2) out.slope = loglog_slope(x, y);
  }
  return out;
}

DirectOutcome run_direct(const ExperimentConfig& cfg) {
  DirectOutcome out = direct(cfg);
  ensure_dir(cfg.output_dir);
  const auto& es = out.problem.es;
  std::vector<Eigen::Index> excited;
  for (Eigen::Index n = 0; n < es.size(); ++n)
    if (!out.trace.U.row(n).isZero(0.0)) excited.push_back(n);

  std::ostringstream csv;
  csv << "t,a_true";
  for (const auto n : excited) csv << ",u_" << es.modes[static_cast<std::size_t>(n)].label();
  csv << ",g\n";
  for (Eigen::Index k = 0; k < out.problem.grid.size(); ++k) {
    csv << fmt(out.problem.grid.node(k)) << ',' << fmt(out.a_true[k]);
    for (const auto n : excited) csv << ',' << fmt(out.trace.U(n, k));
    csv << ',' << fmt(out.flux.g[k]) << '\n';
  }
  write_text(std::filesystem::path(cfg.output_dir) / "direct.csv", csv.str());

  Json excited_labels = Json::array();
  for (const auto n : excited) excited_labels.push_back(es.modes[static_cast<std::size_t>(n)].label());
  write_summary(cfg, "direct",
                {{"excited_modes", excited_labels},
                 {"flux_min", out.flux.g.minCoeff()},
                 {"flux_max", out.flux.g.maxCoeff()},
                 {"flux_positive", (out.flux.g.array() > 0.0).all()}});
  return out;
}

InvertOutcome run_invert(const ExperimentConfig& cfg) {
  InvertOutcome out = invert(cfg);
  ensure_dir(cfg.output_dir);
  const auto& res = out.result;
  const int snaps = std::min<int>(cfg.snapshots, static_cast<int>(res.iterates.size()) - 1);

  std::ostringstream csv;
  csv << "t,a_true,a_0";
  for (int s = 1; s <= snaps; ++s) csv << ",a_" << s;
  csv << ",a_rec\n";
  for (Eigen::Index k = 0; k < out.problem.grid.size(); ++k) {
    csv << fmt(out.problem.grid.node(k)) << ',' << fmt(out.a_true[k]) << ',' << fmt(res.a0.values[k]);
    for (int s = 1; s <= snaps; ++s) csv << ',' << fmt(res.iterates[static_cast<std::size_t>(s)][k]);
    csv << ',' << fmt(res.a_rec.values[k]) << '\n';
  }
  write_text(std::filesystem::path(cfg.output_dir) / "invert.csv", csv.str());

  write_summary(cfg, "invert",
                {{"n_iters", res.n_iters},
                 {"converged", res.converged},
                 {"L2_error", out.l2_error},
                 {"rel_L2_error", out.rel_l2_error},
                 {"increments", res.history},
                 {"assumptions", report_json(out.report)}});
  return out;
}

SweepOutcome run_sweep(const ExperimentConfig& cfg, SweepParameter parameter, const std::vector<double>& values) {
  SweepOutcome out = sweep(cfg, parameter, values);
  ensure_dir(cfg.output_dir);
  std::ostringstream csv;
  csv << "value,n_iters,converged,L2_error,rel_L2_error,status\n";
  Json rows = Json::array();
  for (const auto& row : out.rows) {
    csv << fmt(row.value) << ',' << row.n_iters << ',' << (row.converged ? 1 : 0) << ',' << fmt(row.l2_error) << ','
        << fmt(row.rel_l2_error) << ',' << '"' << row.status << '"' << '\n';
    rows.push_back({{"value", row.value}, {"n_iters", row.n_iters}, {"status", row.status}});
  }
  write_text(std::filesystem::path(cfg.output_dir) / "sweep.csv", csv.str());

  ExperimentConfig resolved = cfg;
  resolved.sweep_parameter = parameter;
  resolved.sweep_values = values;
  write_summary(resolved, "sweep",
                {{"parameter", to_string(parameter)},
                 {"rows", rows},
                 {"loglog_slope", out.slope ? Json(*out.slope) : Json(nullptr)}});
  return out;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<CheckResult> special_function_checks() {
  std::vector<CheckResult> checks;
  const std::array<double, 4> orders = {0.3, 0.5, 0.7, 0.9};

  {
    double sup = 0.0;
    for (const double a : orders)
      for (int i = 0; i <= 600; ++i) {
        const double x = std::pow(10.0, 6.0 * i / 600.0);
        sup = std::max(sup, x * std::abs(mittag_leffler({a, 1.0}, -x)));
      }
    checks.push_back({"bound x|E_a,1(-x)| <= 10 on [1,1e6]", sup <= 10.0, "sup = " + fmt(sup)});
  }
  {
    double lowest = std::numeric_limits<double>::infinity();
    for (const double a : orders) {
      lowest = std::min(lowest, mittag_leffler({a, a}, 0.0));
      for (int i = 0; i <= 400; ++i) lowest = std::min(lowest, mittag_leffler({a, a}, -std::pow(10.0, -3.0 + 7.0 * i / 400.0)));
    }
    checks.push_back({"positivity E_a,a(-x) >= 0 on [0,1e4]", lowest >= 0.0, "min = " + fmt(lowest)});
  }
  {
    double worst = 0.0;
    for (const double a : orders) {
      const int nodes = 500;
      Vector f(nodes);
      for (int i = 0; i < nodes; ++i) {
        const double t = 0.01 + (10.0 - 0.01) * i / (nodes - 1);
        f[i] = ml_relaxation(a, 1.0, t);
      }
      worst = std::max(worst, -f.minCoeff());
      for (int i = 0; i + 1 < nodes; ++i) worst = std::max(worst, f[i + 1] - f[i]);
      for (int i = 0; i + 2 < nodes; ++i) worst = std::max(worst, -(f[i + 2] - 2 * f[i + 1] + f[i]));
    }
    checks.push_back({"complete monotonicity of E_a,1(-t^a) on [0.01,10]", worst <= 1e-9,
                      "worst sign violation = " + fmt(worst)});
  }
  {
    double worst = 0.0;
    const double h = 1e-4;
    for (const double a : orders)
      for (int i = 0; i <= 50; ++i) {
        const double t = 0.1 + 4.9 * i / 50.0;
        const double fd = (ml_relaxation(a, 1.0, t + h) - ml_relaxation(a, 1.0, t - h)) / (2 * h);
        worst = std::max(worst, std::abs(fd + ml_kernel(a, 1.0, t)));
      }
    checks.push_back({"derivative identity d/dt E_a,1(-t^a) = -kernel", worst <= 1e-6, "max diff = " + fmt(worst)});
  }
  return checks;
}

bool ValidateOutcome::passed() const {
  return report.inverse_ready() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidateOutcome run_validate(const ExperimentConfig& cfg) {
  const Problem problem = build_problem(cfg);
  const FluxTrace exact = synthesize_flux(cfg, problem);
  const FluxTrace data = cfg.delta > 0.0 ? add_noise(exact, cfg.delta, cfg.seed) : exact;
  ValidateOutcome out{validate_assumptions(problem.pd, problem.es, data.g), special_function_checks()};

  ensure_dir(cfg.output_dir);
  Json checks = Json::array();
  for (const auto& c : out.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  write_summary(cfg, "validate", {{"assumptions", report_json(out.report)}, {"special_functions", checks},
                                  {"passed", out.passed()}});
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("loglog_slope: need >= 2 paired points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Vector lx(n), ly(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lx[i] = std::log(x[static_cast<std::size_t>(i)]);
    ly[i] = std::log(y[static_cast<std::size_t>(i)]);
  }
  const Vector cx = lx.array() - lx.mean();
  const Vector cy = ly.array() - ly.mean();
  return cx.dot(cy) / cx.squaredNorm();
}

namespace {

Vector ranks(const Eigen::Ref<const Vector>& v) {
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return v[a] < v[b]; });
  Vector r(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && v[order[static_cast<std::size_t>(j + 1)]] == v[order[static_cast<std::size_t>(i)]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j);
    for (Eigen::Index k = i; k <= j; ++k) r[order[static_cast<std::size_t>(k)]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("spearman: need >= 2 paired samples");
  const Vector rx = ranks(x), ry = ranks(y);
  const Vector cx = rx.array() - rx.mean();
  const Vector cy = ry.array() - ry.mean();
  return cx.dot(cy) / std::sqrt(cx.squaredNorm() * cy.squaredNorm());
}

}  // namespace fracinv
