#include "fracinv/inverse.hpp"

#include <sstream>
#include <string>

namespace fracinv {

namespace {

void check_grid(const FluxTrace& g, const ProblemData& pd) {
  if (!(g.grid == pd.grid)) throw ContractError("flux data and problem data live on different grids");
}

}  // namespace

CoefficientSamples initial_guess(const FluxTrace& g, const EigenSystem& es, const ProblemData& pd, double alpha) {
  check_grid(g, pd);
  if (!(g.g.array() > 0.0).all()) throw AssumptionError("initial_guess: flux data must be strictly positive");
  const Vector d = es.fluxes();
  const Vector source_flux = pd.F.transpose() * d;
  const Vector denom = Vector::Constant(pd.grid.size(), pd.b.dot(d)) + rl_integral(source_flux, alpha, pd.grid);
  Eigen::Index k;
  if (denom.minCoeff(&k) <= 0.0) {
    throw AssumptionError("initial_guess: du0/dn(x0) + I^alpha[dF/dn(x0)] is not positive at node " +
                          std::to_string(k));
  }
  return {pd.grid, g.g.cwiseQuotient(denom)};
}

Vector upper_bound(const FluxTrace& g, const EigenSystem& es, const ProblemData& pd) {
  check_grid(g, pd);
  const double normal_u0 = pd.b.dot(es.fluxes());
  if (!(normal_u0 > 0.0)) throw AssumptionError("upper_bound: du0/dn(x0) must be positive");
  return g.g / normal_u0;
}

CoefficientSamples apply_K(const CoefficientSamples& psi, const FluxTrace& g, const EigenSystem& es,
                           const ProblemData& pd, double alpha) {
  check_grid(g, pd);
  const ModeTrace mt = solve_direct(es, pd, psi, alpha);
  const Vector denom = mt.U.transpose() * es.fluxes();
  Eigen::Index k;
  if (denom.minCoeff(&k) <= kDenominatorFloor) {
    std::ostringstream msg;
    msg << "apply_K: flux denominator " << denom[k] << " at t = " << pd.grid.node(k)
        << " is not positive; data violate the sign assumptions or the grid is too coarse";
    throw WellDefinednessError(msg.str());
  }
  return {pd.grid, g.g.cwiseQuotient(denom)};
}

ReconstructionResult reconstruct(const FluxTrace& g, const EigenSystem& es, const ProblemData& pd,
                                 const InverseConfig& cfg) {
  if (!(cfg.epsilon0 > 0.0)) throw DomainError("reconstruct: epsilon0 must be positive");
  if (cfg.max_iters < 1) throw DomainError("reconstruct: max_iters must be at least 1");
  if (!(cfg.delta >= 0.0)) throw DomainError("reconstruct: delta must be nonnegative");

  const FluxTrace data = cfg.delta > 0.0 ? add_noise(g, cfg.delta, cfg.seed) : g;
  if (cfg.check_assumptions) {
    const AssumptionReport rep = validate_assumptions(pd, es, data.g);
    if (!rep.inverse_ready()) {
      std::string msg = "reconstruct: data fail the inverse-problem assumptions:";
      for (const auto& note : rep.notes) msg += " [" + note + "]";
      throw AssumptionError(msg);
    }
  }

  const CoefficientSamples a0 = initial_guess(data, es, pd, cfg.alpha);
  CoefficientSamples current = a0;
  if (cfg.start) current = CoefficientSamples(pd.grid, *cfg.start);

  ReconstructionResult result{current, a0, {}, 0, false, {}, data};
  if (cfg.record_iterates) result.iterates.push_back(current.values);

  for (int k = 1; k <= cfg.max_iters; ++k) {
    CoefficientSamples next = apply_K(current, data, es, pd, cfg.alpha);
    const double increment = l2_norm(next.values - current.values, pd.grid);
    result.history.push_back(increment);
    result.n_iters = k;
    if (cfg.record_iterates) result.iterates.push_back(next.values);
    current = std::move(next);
    if (increment <= cfg.epsilon0) {
      result.converged = true;
      break;
    }
  }
  result.a_rec = current;
  return result;
}

}  // namespace fracinv
