#include "fracinv/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fracinv/quadrature.hpp"
#include "fracinv/types.hpp"

namespace fracinv {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

// Gamma for x >= 0.5.
double lanczos_gamma(double x) {
  x -= 1.0;
  double a = kLanczosCoeff[0];
  for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i) a += kLanczosCoeff[i] / (x + static_cast<double>(i));
  const double t = x + kLanczosG + 0.5;
  // Split the power so t^(x+1/2) does not overflow before e^-t scales it down.
  const double half = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * a;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("mittag_leffler: alpha must be positive, got " + std::to_string(alpha));
}

}  // namespace

double sin_pi(double x) {
  const double n = std::nearbyint(x);
  const double s = std::sin(kPi * (x - n));
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

double cos_pi(double x) { return sin_pi(0.5 - x); }

double gamma(double x) {
  if (std::isnan(x)) throw DomainError("gamma: NaN argument");
  if (is_nonpositive_integer(x)) throw DomainError("gamma: pole at " + std::to_string(x));
  if (x < 0.5) return kPi / (sin_pi(x) * lanczos_gamma(1.0 - x));
  return lanczos_gamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x < 0.5) return sin_pi(x) * lanczos_gamma(1.0 - x) / kPi;
  if (x > 171.0) return 0.0;
  return 1.0 / lanczos_gamma(x);
}

namespace detail {

double ml_series(MlParams p, double z, int max_terms) {
  double sum = 0.0;
  double power = 1.0;
  int small_run = 0;
  for (int k = 0; k < max_terms; ++k) {
    const double arg = k * p.alpha + p.beta;
    const double term = power * rgamma(arg);
    sum += term;
    if (!std::isfinite(sum)) return sum;
    // Only trust a small term once past the minimum of Gamma, where the
    // terms decrease monotonically.
    if (arg > 2.0 && std::abs(term) < 1e-16 * std::max(1.0, std::abs(sum))) {
      if (++small_run >= 2) break;
    } else {
      small_run = 0;
    }
    power *= z;
  }
  return sum;
}

double ml_asymptotic(MlParams p, double x, int terms) {
  double sum = 0.0;
  double inv_power = 1.0;
  for (int k = 1; k <= terms; ++k) {
    inv_power /= x;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * inv_power * rgamma(p.beta - k * p.alpha);
  }
  return sum;
}

double ml_asymptotic_tail(MlParams p, double x, int terms) {
  const double t1 = std::pow(x, -(terms + 1)) * rgamma(p.beta - (terms + 1) * p.alpha);
  const double t2 = std::pow(x, -(terms + 2)) * rgamma(p.beta - (terms + 2) * p.alpha);
  return std::max(std::abs(t1), std::abs(t2));
}

double ml_integral(MlParams p, double x) {
  const double alpha = p.alpha;
  const double beta = p.beta;
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta < 1.0 + alpha) || !(x > 0.0)) {
    throw DomainError("ml_integral: requires 0 < alpha < 1, beta < 1 + alpha, x > 0");
  }
  // E_{a,b}(-x) = 1/pi * int_0^inf s^(a-b) e^-s R(s) ds with
  // R(s) = [s^a sin(pi(1-b)) + x sin(pi(1-b+a))] / (s^2a + 2 x s^a cos(pi a) + x^2).
  // The substitution s = v^(1/q), q = 1 + a - b, absorbs the endpoint power.
  const double q = 1.0 + alpha - beta;
  const double sin1 = sin_pi(1.0 - beta);
  const double sin2 = sin_pi(1.0 - beta + alpha);
  const double cosa = std::cos(kPi * alpha);
  const double scale = 1.0 / (kPi * q);
  const double s_max = 64.0;

  auto integrand = [&](double v) {
    const double s = std::pow(v, 1.0 / q);
    const double sa = std::pow(s, alpha);
    const double num = sa * sin1 + x * sin2;
    const double den = sa * sa + 2.0 * x * sa * cosa + x * x;
    return scale * std::exp(-s) * num / den;
  };

  std::vector<double> breaks = {0.0, std::pow(s_max, q)};
  auto add_break = [&](double s) {
    if (s > 0.0 && s < s_max) breaks.push_back(std::pow(s, q));
  };
  add_break(std::pow(x, 1.0 / alpha));
  if (cosa < 0.0) add_break(std::pow(-x * cosa, 1.0 / alpha));
  add_break(1.0);
  std::sort(breaks.begin(), breaks.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += quad::integrate(integrand, breaks[i], breaks[i + 1], 1e-16, 60);
  }
  return total;
}

}  // namespace detail

double mittag_leffler(MlParams p, double z) {
  check_alpha(p.alpha);
  if (std::isnan(z)) throw DomainError("mittag_leffler: NaN argument");
  if (z == 0.0) return rgamma(p.beta);

  if (p.alpha == 1.0) {
    if (p.beta == 1.0) return std::exp(z);
    if (p.beta == 2.0) return std::expm1(z) / z;
  }
  if (std::abs(z) <= 1.0) return detail::ml_series(p, z, 400);
  if (p.alpha >= 1.0) {
    throw DomainError("mittag_leffler: alpha >= 1 only supported for |z| <= 1 or E_{1,1}, E_{1,2}");
  }
  if (z > 0.0) return detail::ml_series(p, z, 20000);

  const double x = -z;
  if (detail::ml_asymptotic_tail(p, x) < 1e-15) return detail::ml_asymptotic(p, x);
  if (p.beta < 1.0 + p.alpha) return detail::ml_integral(p, x);
  // Lower beta through E_{a,b}(z) = 1/Gamma(b-a) + z E_{a,b}(z) shifted by a.
  return (mittag_leffler({p.alpha, p.beta - p.alpha}, z) - rgamma(p.beta - p.alpha)) / z;
}

double ml_relaxation(double alpha, double lambda, double t) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("ml_relaxation: alpha must lie in (0, 1]");
  if (!(lambda > 0.0)) throw DomainError("ml_relaxation: lambda must be positive");
  if (!(t >= 0.0)) throw DomainError("ml_relaxation: t must be nonnegative");
  if (t == 0.0) return 1.0;
  return mittag_leffler({alpha, 1.0}, -lambda * std::pow(t, alpha));
}

double ml_kernel(double alpha, double lambda, double t) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("ml_kernel: alpha must lie in (0, 1]");
  if (!(lambda > 0.0)) throw DomainError("ml_kernel: lambda must be positive");
  if (t == 0.0) {
    if (alpha < 1.0) throw SingularPointError("ml_kernel: kernel is singular at t = 0");
    return lambda;
  }
  if (!(t > 0.0)) throw DomainError("ml_kernel: t must be positive");
  const double ta = std::pow(t, alpha);
  return lambda * ta / t * mittag_leffler({alpha, alpha}, -lambda * ta);
}

}  // namespace fracinv
