#include "fracinv/direct_solver.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fracinv/special_functions.hpp"

namespace fracinv {

CoefficientSamples::CoefficientSamples(TimeGrid g, Vector v) : grid(g), values(std::move(v)) {
  require_length(values.size(), grid, "CoefficientSamples");
}

namespace {

void require_positive(const Eigen::Ref<const Vector>& a, const char* who) {
  if (!(a.array() > 0.0).all()) {
    Eigen::Index k;
    const double v = a.minCoeff(&k);
    throw DomainError(std::string(who) + ": coefficient must be positive, a[" + std::to_string(k) +
                      "] = " + std::to_string(v));
  }
}

}  // namespace

Vector solve_mode(double lambda, const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& Fn,
                  double bn, const L1Weights& weights, const TimeGrid& grid) {
  require_length(a.size(), grid, "solve_mode(a)");
  require_length(Fn.size(), grid, "solve_mode(F_n)");
  if (weights.b.size() < grid.steps()) throw ContractError("solve_mode: too few L1 weights for the grid");
  require_positive(a, "solve_mode");
  if (!(lambda > 0.0)) throw DomainError("solve_mode: lambda must be positive");

  const Vector& w = weights.b;
  const double scale = std::pow(grid.tau(), -weights.alpha);
  const Eigen::Index steps = grid.steps();
  Vector u(grid.size());
  u[0] = bn;
  // (w_0 s + lambda a_k) u^k = F_k + s (w_{k-1} u^0 - sum_{j=1}^{k-1} (w_j - w_{j-1}) u^{k-j})
  for (Eigen::Index k = 1; k <= steps; ++k) {
    double history = w[k - 1] * u[0];
    for (Eigen::Index j = 1; j < k; ++j) history -= (w[j] - w[j - 1]) * u[k - j];
    u[k] = (Fn[k] + scale * history) / (w[0] * scale + lambda * a[k]);
  }
  return u;
}

Vector solve_mode(double lambda, const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& Fn,
                  double bn, double alpha, const TimeGrid& grid) {
  return solve_mode(lambda, a, Fn, bn, l1_weights(alpha, grid.steps()), grid);
}

Vector analytic_mode_solution(double lambda, double a_const, const Eigen::Ref<const Vector>& Fn, double bn,
                              double alpha, const TimeGrid& grid) {
  require_length(Fn.size(), grid, "analytic_mode_solution");
  if (!(a_const > 0.0) || !(lambda > 0.0)) throw DomainError("analytic_mode_solution: need lambda, a > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("analytic_mode_solution: alpha must lie in (0, 1]");
  const double c = lambda * a_const;

  Vector u(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) u[k] = bn * ml_relaxation(alpha, c, grid.node(k));
  if (Fn.isZero(0.0)) return u;

  // Kernel r^(alpha-1) E_{alpha,alpha}(-c r^alpha) has antiderivatives
  //   K1(r) = (1 - E_{alpha,1}(-c r^alpha)) / c,  K2(r) = r (1 - E_{alpha,2}(-c r^alpha)) / c.
  const ProductRule rule = make_product_rule(
      [&](double r) { return (1.0 - ml_relaxation(alpha, c, r)) / c; },
      [&](double r) {
        if (r == 0.0) return 0.0;
        return r * (1.0 - mittag_leffler({alpha, 2.0}, -c * std::pow(r, alpha))) / c;
      },
      grid);
  return u + rule.apply(Fn);
}

ModeTrace solve_direct(const EigenSystem& es, const ProblemData& pd, const CoefficientSamples& a, double alpha) {
  if (!(pd.grid == a.grid)) throw ContractError("solve_direct: coefficient and data grids differ");
  if (pd.b.size() != es.size() || pd.F.rows() != es.size()) throw ContractError("solve_direct: mode count mismatch");
  require_positive(a.values, "solve_direct");

  const L1Weights weights = l1_weights(alpha, pd.grid.steps());
  ModeTrace mt{pd.grid, Matrix::Zero(es.size(), pd.grid.size())};
  for (Eigen::Index n = 0; n < es.size(); ++n) {
    if (pd.b[n] == 0.0 && pd.F.row(n).isZero(0.0)) continue;
    const Vector Fn = pd.F.row(n).transpose();
    mt.U.row(n) = solve_mode(es.modes[static_cast<std::size_t>(n)].lambda, a.values, Fn, pd.b[n], weights, pd.grid)
                      .transpose();
  }
  return mt;
}

FluxTrace flux_trace(const EigenSystem& es, const ModeTrace& mt, const CoefficientSamples& a) {
  if (mt.U.rows() != es.size()) throw ContractError("flux_trace: mode count mismatch");
  if (!(mt.grid == a.grid)) throw ContractError("flux_trace: grids differ");
  const Vector normal_derivative = mt.U.transpose() * es.fluxes();
  return {mt.grid, a.values.cwiseProduct(normal_derivative)};
}

FluxTrace add_noise(const FluxTrace& g, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw DomainError("add_noise: delta must be nonnegative");
  FluxTrace out = g;
  out.delta = delta;
  out.seed = seed;
  if (delta == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> zeta(-1.0, 1.0);
  for (Eigen::Index k = 0; k < out.g.size(); ++k) out.g[k] *= 1.0 + delta * zeta(rng);
  return out;
}

}  // namespace fracinv
