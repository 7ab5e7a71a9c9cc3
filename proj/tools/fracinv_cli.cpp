#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fracinv/experiment.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory (overrides output_dir)");
  cmd->add_option("--seed", c.seed, "noise seed (overrides seed)");
  cmd->add_flag("--quiet", c.quiet, "suppress the summary on stdout");
}

fracinv::ExperimentConfig resolve(const Common& c) {
  fracinv::ExperimentConfig cfg =
      c.config.empty() ? fracinv::ExperimentConfig::from_json(fracinv::Json::object()) : fracinv::load_config(c.config);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

void kv(const Common& c, const std::string& key, const std::string& value) {
  if (!c.quiet) std::cout << key << " = " << value << '\n';
}

template <class T>
std::string str(const T& v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recover a time-dependent diffusivity from boundary flux data of a subdiffusion equation"};
  app.require_subcommand(1);

  Common c;
  auto* direct = app.add_subcommand("direct", "solve the forward problem and write direct.csv");
  auto* invert = app.add_subcommand("invert", "reconstruct the coefficient and write invert.csv");
  auto* sweep = app.add_subcommand("sweep", "repeat invert over alpha, epsilon0 or delta; write sweep.csv");
  auto* validate = app.add_subcommand("validate", "check the problem assumptions and special functions");
  for (auto* cmd : {direct, invert, sweep, validate}) add_common(cmd, c);

  std::string param;
  std::vector<double> values;
  sweep->add_option("--param", param, "alpha | epsilon0 | delta");
  sweep->add_option("--values", values, "values to sweep")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    const fracinv::ExperimentConfig cfg = resolve(c);
    kv(c, "output_dir", cfg.output_dir);

    if (direct->parsed()) {
      const auto out = fracinv::run_direct(cfg);
      kv(c, "flux_min", str(out.flux.g.minCoeff()));
      kv(c, "flux_max", str(out.flux.g.maxCoeff()));
      return 0;
    }
    if (invert->parsed()) {
      const auto out = fracinv::run_invert(cfg);
      kv(c, "n_iters", str(out.result.n_iters));
      kv(c, "converged", out.result.converged ? "true" : "false");
      kv(c, "L2_error", str(out.l2_error));
      kv(c, "rel_L2_error", str(out.rel_l2_error));
      return out.result.converged ? 0 : 2;
    }
    if (sweep->parsed()) {
      if (param.empty() && !cfg.sweep_parameter) throw fracinv::ConfigError("sweep: give --param or a config 'sweep' block");
      const auto p = param.empty() ? *cfg.sweep_parameter : fracinv::parse_sweep_parameter(param);
      const auto& v = values.empty() ? cfg.sweep_values : values;
      const auto out = fracinv::run_sweep(cfg, p, v);
      bool all_ok = true;
      for (const auto& row : out.rows) {
        kv(c, "row " + to_string(p) + " " + str(row.value), "n_iters " + str(row.n_iters) + ", L2_error " + str(row.l2_error) +
                                                         ", status " + row.status);
        all_ok = all_ok && row.status == "ok";
      }
      if (out.slope) kv(c, "loglog_slope", str(*out.slope));
      return all_ok ? 0 : 2;
    }
    if (validate->parsed()) {
      const auto out = fracinv::run_validate(cfg);
      kv(c, "inverse_ready", out.report.inverse_ready() ? "true" : "false");
      kv(c, "existence_ready", out.report.existence_ready() ? "true" : "false");
      for (const auto& note : out.report.notes) kv(c, "note", note);
      for (const auto& check : out.checks) kv(c, check.name, std::string(check.passed ? "pass" : "FAIL") + " (" + check.detail + ")");
      return out.passed() ? 0 : 2;
    }
  } catch (const fracinv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
