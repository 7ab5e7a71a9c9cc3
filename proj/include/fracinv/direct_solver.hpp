#ifndef FRACINV_DIRECT_SOLVER_HPP
#define FRACINV_DIRECT_SOLVER_HPP

#include <cstdint>

#include "fracinv/fractional_ops.hpp"
#include "fracinv/spectral_domain.hpp"
#include "fracinv/types.hpp"

namespace fracinv {

/// Diffusivity a(t) sampled on the time grid; must stay strictly positive.
struct CoefficientSamples {
  TimeGrid grid;
  Vector values;

  CoefficientSamples(TimeGrid g, Vector v);
  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
};

/// Row n holds u_n(t_k) for every node k.
struct ModeTrace {
  TimeGrid grid;
  Matrix U;
};

/// Boundary flux data g(t_k) = a(t_k) du/dn(x0, t_k).
struct FluxTrace {
  TimeGrid grid;
  Vector g;
  double delta = 0.0;  // relative noise level, 0 for exact data
  std::uint64_t seed = 0;

  bool noisy() const { return delta > 0.0; }
};

/// Implicit L1 solve of D^alpha u + lambda a(t) u = F_n(t), u(0) = b_n.
Vector solve_mode(double lambda, const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& Fn,
                  double bn, const L1Weights& weights, const TimeGrid& grid);
Vector solve_mode(double lambda, const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& Fn,
                  double bn, double alpha, const TimeGrid& grid);

/// Exact mode solution for a constant coefficient:
///   b_n E_{alpha,1}(-c t^alpha) + int_0^t F_n(s) (t-s)^(alpha-1) E_{alpha,alpha}(-c (t-s)^alpha) ds,
/// c = lambda * a_const, with F_n piecewise linear between nodes. alpha may be 1.
Vector analytic_mode_solution(double lambda, double a_const, const Eigen::Ref<const Vector>& Fn, double bn,
                              double alpha, const TimeGrid& grid);

/// Solve every retained mode; modes with zero data are left exactly zero.
ModeTrace solve_direct(const EigenSystem& es, const ProblemData& pd, const CoefficientSamples& a, double alpha);

/// g[k] = a[k] * sum_n U[n][k] d_n.
FluxTrace flux_trace(const EigenSystem& es, const ModeTrace& mt, const CoefficientSamples& a);

/// g_delta[k] = (1 + zeta_k delta) g[k], zeta_k i.i.d. uniform on [-1, 1].
FluxTrace add_noise(const FluxTrace& g, double delta, std::uint64_t seed);

}  // namespace fracinv

#endif  // FRACINV_DIRECT_SOLVER_HPP
