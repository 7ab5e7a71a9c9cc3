#ifndef FRACINV_SPECIAL_FUNCTIONS_HPP
#define FRACINV_SPECIAL_FUNCTIONS_HPP

namespace fracinv {

/// Parameters (alpha, beta) of the two-parameter Mittag-Leffler function.
struct MlParams {
  double alpha;
  double beta;
};

/// sin(pi x) and cos(pi x) with exact zeros at the (half-)integers.
double sin_pi(double x);
double cos_pi(double x);

/// Gamma function on the real line. Throws DomainError at nonpositive integers.
double gamma(double x);

/// 1/Gamma(x), zero at the poles of Gamma.
double rgamma(double x);

/// E_{alpha,beta}(z) for real z.
///
/// Supported region: 0 < alpha < 1 for every real z <= 0 (any magnitude) and
/// moderate positive z; alpha == 1 with beta in {1, 2} on the whole line;
/// any alpha > 0 for |z| <= 1. Anything else throws DomainError.
double mittag_leffler(MlParams p, double z);

/// E_{alpha,1}(-lambda t^alpha): relaxation of a single fractional mode.
double ml_relaxation(double alpha, double lambda, double t);

/// lambda t^(alpha-1) E_{alpha,alpha}(-lambda t^alpha) = -d/dt E_{alpha,1}(-lambda t^alpha).
/// Throws SingularPointError at t == 0 when alpha < 1.
double ml_kernel(double alpha, double lambda, double t);

namespace detail {

// Individual evaluation branches of mittag_leffler, exposed for the
// branch-agreement tests.
double ml_series(MlParams p, double z, int max_terms);
double ml_asymptotic(MlParams p, double x, int terms = 10);
// Magnitude of the first two omitted asymptotic terms at argument -x.
double ml_asymptotic_tail(MlParams p, double x, int terms = 10);
// Contour-collapsed integral representation of E_{alpha,beta}(-x), x > 0,
// valid for 0 < alpha < 1 and beta < 1 + alpha.
double ml_integral(MlParams p, double x);

}  // namespace detail

}  // namespace fracinv

#endif  // FRACINV_SPECIAL_FUNCTIONS_HPP
