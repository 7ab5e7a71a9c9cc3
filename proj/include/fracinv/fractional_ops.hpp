#ifndef FRACINV_FRACTIONAL_OPS_HPP
#define FRACINV_FRACTIONAL_OPS_HPP

#include <cmath>

#include "fracinv/types.hpp"

namespace fracinv {

/// Weights b_j = ((j+1)^(1-alpha) - j^(1-alpha)) / Gamma(2-alpha) of the L1
/// discretisation of the Caputo derivative.
struct L1Weights {
  double alpha;
  Vector b;
};

L1Weights l1_weights(double alpha, Eigen::Index n);

/// L1 approximation of the Caputo derivative of order alpha at every node.
/// The value at t_0 is 0 by convention.
Vector caputo_l1(const Eigen::Ref<const Vector>& samples, double alpha, const TimeGrid& grid);

/// Riemann-Liouville integral of order alpha at every node; the kernel is
/// integrated exactly against the piecewise-linear interpolant of the samples.
Vector rl_integral(const Eigen::Ref<const Vector>& samples, double alpha, const TimeGrid& grid);

/// Product-integration rule for convolutions
///   (k * f)(t_n) = int_0^{t_n} f(s) k(t_n - s) ds
/// with f piecewise linear on a uniform grid. Built from the first and second
/// antiderivatives of the kernel, K1(r) = int_0^r k and K2(r) = int_0^r K1,
/// so a weakly singular k is handled exactly.
///
/// Interval [t_j, t_{j+1}] contributes f_j * left[n-j] + f_{j+1} * right[n-j].
struct ProductRule {
  Vector left;   // indexed by distance m = n - j, m >= 1
  Vector right;

  template <class Derived>
  Vector apply(const Eigen::MatrixBase<Derived>& f) const {
    const Eigen::Index size = f.size();
    Vector out = Vector::Zero(size);
    for (Eigen::Index n = 1; n < size; ++n) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) acc += f[j] * left[n - j] + f[j + 1] * right[n - j];
      out[n] = acc;
    }
    return out;
  }
};

template <class Antiderivative1, class Antiderivative2>
ProductRule make_product_rule(Antiderivative1&& k1, Antiderivative2&& k2, const TimeGrid& grid) {
  const Eigen::Index size = grid.size();
  const double tau = grid.tau();
  Vector K1(size), K2(size);
  for (Eigen::Index m = 0; m < size; ++m) {
    K1[m] = k1(static_cast<double>(m) * tau);
    K2[m] = k2(static_cast<double>(m) * tau);
  }
  ProductRule rule{Vector::Zero(size), Vector::Zero(size)};
  for (Eigen::Index m = 1; m < size; ++m) {
    // int over one panel of k(t_n - s) and of (s - t_j)/tau * k(t_n - s).
    const double mass = K1[m] - K1[m - 1];
    const double moment = (K2[m] - K2[m - 1]) / tau - K1[m - 1];
    rule.right[m] = moment;
    rule.left[m] = mass - moment;
  }
  return rule;
}

/// Composite trapezoid approximation of (int_0^T f^2 dt)^(1/2).
template <class Derived>
double l2_norm(const Eigen::MatrixBase<Derived>& f, const TimeGrid& grid) {
  require_length(f.size(), grid, "l2_norm");
  const Eigen::Index last = f.size() - 1;
  const double interior = f.segment(1, last - 1).squaredNorm();
  const double ends = 0.5 * (f[0] * f[0] + f[last] * f[last]);
  return std::sqrt(grid.tau() * (interior + ends));
}

}  // namespace fracinv

#endif  // FRACINV_FRACTIONAL_OPS_HPP
