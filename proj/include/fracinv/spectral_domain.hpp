#ifndef FRACINV_SPECTRAL_DOMAIN_HPP
#define FRACINV_SPECTRAL_DOMAIN_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracinv/types.hpp"

namespace fracinv {

enum class DomainKind { interval, square };

std::string to_string(DomainKind kind);

/// One Dirichlet eigenpair of -Laplacian on the unit interval or unit square.
///
/// Interval: phi = sign * sqrt(2) sin(m pi x), lambda = m^2 pi^2 (n unused, 0).
/// Square:   phi = sign * 2 sin(m pi x) sin(n pi y), lambda = (m^2 + n^2) pi^2.
struct Mode {
  int index = 0;
  int m = 1;
  int n = 0;
  double lambda = 0.0;
  int sign = 1;
  // Outward normal derivative of phi at x0, including the sign factor.
  double flux_at_x0 = 0.0;

  std::string label() const;
};

struct EigenSystem {
  DomainKind kind = DomainKind::interval;
  Point x0 = Point::Zero();
  Point normal = Point::Zero();
  std::vector<Mode> modes;

  Eigen::Index size() const { return static_cast<Eigen::Index>(modes.size()); }
  Vector lambdas() const;
  Vector fluxes() const;
};

/// Eigenpairs sqrt(2) sin(m pi x), m = 1..M, sign-normalised at x0 in {0, 1}.
EigenSystem build_interval(int mode_count, double x0);

/// The mode_count smallest eigenpairs of the unit square ordered by lambda,
/// ties broken lexicographically by (m, n); x0 on the boundary, not a corner.
EigenSystem build_square(int mode_count, const Point& x0);

/// Flip modes whose normal derivative at x0 is negative.
EigenSystem normalize_signs(EigenSystem es);

double mode_value(const EigenSystem& es, const Mode& mode, const Point& p);
Point mode_gradient(const EigenSystem& es, const Mode& mode, const Point& p);
double mode_neg_laplacian(const EigenSystem& es, const Mode& mode, const Point& p);

/// Spatial function on the domain: a named built-in or tabulated samples.
struct SpatialField {
  std::string description;
  std::function<double(const Point&)> eval;
  double operator()(const Point& p) const { return eval(p); }
};

SpatialField zero_field();
/// Built-ins: "zero", "neg_sin_pi_x" (-sin pi x), "neg_sin_pi_xy_bubble"
/// (-sin(pi x y (1-x)(1-y))). The result is multiplied by `scale`.
SpatialField builtin_field(const std::string& name, double scale = 1.0);
/// Linear interpolation of samples at x_i = i / (n-1).
SpatialField tabulated_field_1d(Vector samples);
/// Bilinear interpolation of samples(i, j) at (x_i, y_j) = (i, j) / (n-1).
SpatialField tabulated_field_2d(Matrix samples);

/// Time profile f(t) of a separable source.
struct TimeProfile {
  std::string description;
  std::function<double(double)> eval;
  double operator()(double t) const { return eval(t); }
};

TimeProfile constant_profile(double c);
TimeProfile affine_profile(double c0, double c1);
/// Linear interpolation of values on a uniform partition of [0, horizon].
TimeProfile tabulated_profile(Vector values, double horizon);

/// Separable source F(x, t) = w(x) f(t).
struct SourceSpec {
  SpatialField w;
  TimeProfile f;
};

SourceSpec zero_source();

/// Modal data b_n = (u0, phi_n) and F_n(t_k) = (F(., t_k), phi_n).
struct ProblemData {
  Vector b;
  Matrix F;  // modes x nodes
  TimeGrid grid;
};

/// Composite 5-point Gauss-Legendre projection with 64 panels per axis.
ProblemData project(const EigenSystem& es, const SpatialField& u0, const SourceSpec& source,
                    const TimeGrid& grid, int panels = 64);

/// Outcome of the discrete checks of the sign, positivity and existence
/// conditions the fixed-point iteration needs.
struct AssumptionReport {
  bool initial_nonnegative = false;  // every b_n >= 0
  bool source_nonnegative = false;   // every F_n(t_k) >= 0
  std::optional<int> distinguished_mode;  // N with d_N > 0, b_N > 0, F_N > 0
  bool flux_positive = false;        // g > 0 at every node
  // F_n(t) = lambda_n b_n f(t) for one f, i.e. F = -L u0 * f.
  bool existence_form = false;
  // f(t) >= g(t) / sum_n b_n d_n at every node (only meaningful with existence_form).
  bool existence_bound = false;
  std::vector<std::string> notes;

  bool inverse_ready() const {
    return initial_nonnegative && source_nonnegative && distinguished_mode.has_value() && flux_positive;
  }
  bool existence_ready() const { return inverse_ready() && existence_form && existence_bound; }
};

/// Values within `rel_tol * max|b|` (resp. max|F|) of zero count as zero, so
/// quadrature noise on orthogonal modes does not fail the sign checks.
AssumptionReport validate_assumptions(const ProblemData& pd, const EigenSystem& es,
                                      const Eigen::Ref<const Vector>& g, double rel_tol = 1e-10);

}  // namespace fracinv

#endif  // FRACINV_SPECTRAL_DOMAIN_HPP
