#ifndef FRACINV_INVERSE_HPP
#define FRACINV_INVERSE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "fracinv/direct_solver.hpp"
#include "fracinv/fractional_ops.hpp"
#include "fracinv/spectral_domain.hpp"

namespace fracinv {

// Below this the flux denominator is treated as vanished.
inline constexpr double kDenominatorFloor = 1e-14;

struct InverseConfig {
  double alpha = 0.9;
  double epsilon0 = 1e-6;
  int max_iters = 500;
  // Relative noise applied to the supplied flux before iterating.
  double delta = 0.0;
  std::uint64_t seed = 1;
  bool record_iterates = false;
  // Refuse to iterate when the sign/positivity checks fail.
  bool check_assumptions = true;
  // Start from this iterate instead of the lower bound a_0.
  std::optional<Vector> start;
};

struct ReconstructionResult {
  CoefficientSamples a_rec;
  CoefficientSamples a0;  // lower bound of the admissible set
  std::vector<Vector> iterates;  // a_0, a_1, ..., when recorded
  int n_iters = 0;
  bool converged = false;
  std::vector<double> history;  // L2 increments ||a_k - a_{k-1}||
  FluxTrace data;              // flux actually used (noisy when delta > 0)
};

/// a_0[k] = g[k] / (sum_n b_n d_n + I^alpha[sum_n F_n d_n](t_k)).
CoefficientSamples initial_guess(const FluxTrace& g, const EigenSystem& es, const ProblemData& pd, double alpha);

/// Upper bound g[k] / sum_n b_n d_n of the restricted admissible set.
Vector upper_bound(const FluxTrace& g, const EigenSystem& es, const ProblemData& pd);

/// K psi = g / sum_n u_n(t; psi) d_n.
CoefficientSamples apply_K(const CoefficientSamples& psi, const FluxTrace& g, const EigenSystem& es,
                           const ProblemData& pd, double alpha);

/// Monotone fixed-point iteration a_k = K a_{k-1} from a_0, stopped when the
/// trapezoid L2 increment drops to epsilon0 or max_iters is reached.
ReconstructionResult reconstruct(const FluxTrace& g, const EigenSystem& es, const ProblemData& pd,
                                 const InverseConfig& cfg);

}  // namespace fracinv

#endif  // FRACINV_INVERSE_HPP
