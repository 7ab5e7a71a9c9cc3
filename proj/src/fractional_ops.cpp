#include "fracinv/fractional_ops.hpp"

#include <cmath>
#include <string>

#include "fracinv/special_functions.hpp"

namespace fracinv {

namespace {

void check_order(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(who) + ": alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

}  // namespace

L1Weights l1_weights(double alpha, Eigen::Index n) {
  check_order(alpha, "l1_weights");
  if (n < 1) throw ContractError("l1_weights: need at least one weight");
  const double inv_gamma = 1.0 / gamma(2.0 - alpha);
  const double p = 1.0 - alpha;
  L1Weights w{alpha, Vector(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const double jd = static_cast<double>(j);
    w.b[j] = (std::pow(jd + 1.0, p) - std::pow(jd, p)) * inv_gamma;
  }
  return w;
}

Vector caputo_l1(const Eigen::Ref<const Vector>& samples, double alpha, const TimeGrid& grid) {
  require_length(samples.size(), grid, "caputo_l1");
  const Eigen::Index steps = grid.steps();
  const L1Weights w = l1_weights(alpha, steps);
  const double scale = std::pow(grid.tau(), -alpha);

  // D u(t_N) = tau^-alpha sum_{j<N} b_j (u_{N-j} - u_{N-j-1})
  const Vector diff = samples.tail(steps) - samples.head(steps);
  Vector out = Vector::Zero(grid.size());
  for (Eigen::Index n = 1; n <= steps; ++n) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += w.b[j] * diff[n - 1 - j];
    out[n] = scale * acc;
  }
  return out;
}

Vector rl_integral(const Eigen::Ref<const Vector>& samples, double alpha, const TimeGrid& grid) {
  require_length(samples.size(), grid, "rl_integral");
  check_order(alpha, "rl_integral");
  const double g1 = gamma(alpha + 1.0);
  const double g2 = gamma(alpha + 2.0);
  const ProductRule rule = make_product_rule(
      [&](double r) { return std::pow(r, alpha) / g1; },
      [&](double r) { return std::pow(r, alpha + 1.0) / g2; }, grid);
  return rule.apply(samples);
}

}  // namespace fracinv
