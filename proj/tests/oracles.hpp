// Reference values computed independently of the library code paths.
#ifndef FRACINV_TESTS_ORACLES_HPP
#define FRACINV_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

// e^{x^2} erfc(x) = (2/sqrt(pi)) int_0^inf exp(-s^2 - 2 x s) ds, x >= 0.
// The integrand is split at 1 so the steep part near s = 0 gets a fine mesh.
inline double scaled_erfc(double x) {
  auto f = [x](double s) { return std::exp(-s * s - 2.0 * x * s); };
  const double head = simpson(f, 0.0, 1.0, 20000);
  const double tail = simpson(f, 1.0, 12.0, 40000);
  return 2.0 / std::sqrt(std::numbers::pi) * (head + tail);
}

// E_{1/2,1}(-x) = e^{x^2} erfc(x).
inline double ml_half(double x) { return scaled_erfc(x); }

// Gamma through the standard library, used as a cross-check only.
inline double gamma(double x) { return std::tgamma(x); }

// Observed order from errors at successive halvings of the step.
template <class Container>
inline double last_order(const Container& errors) {
  const auto n = errors.size();
  return std::log2(errors[n - 2] / errors[n - 1]);
}

}  // namespace oracle

#endif
