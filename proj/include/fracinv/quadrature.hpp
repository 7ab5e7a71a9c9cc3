#ifndef FRACINV_QUADRATURE_HPP
#define FRACINV_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "fracinv/types.hpp"

namespace fracinv::quad {

// 5-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 5> kGl5Nodes = {
    -0.906179845938663992797626878299393, -0.538469310105683091036314420700208, 0.0,
    0.538469310105683091036314420700208, 0.906179845938663992797626878299393};
inline constexpr std::array<double, 5> kGl5Weights = {
    0.236926885056189087514264040719918, 0.478628670499366468041291514835638,
    0.568888888888888888888888888888889, 0.478628670499366468041291514835638,
    0.236926885056189087514264040719918};

/// Nodes and weights of the composite 5-point Gauss-Legendre rule with
/// `panels` equal panels on [lo, hi].
inline std::pair<Vector, Vector> composite_gauss_legendre(double lo, double hi, int panels) {
  const Eigen::Index n = static_cast<Eigen::Index>(panels) * 5;
  Vector x(n), w(n);
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) {
      x[p * 5 + i] = mid + 0.5 * h * kGl5Nodes[i];
      w[p * 5 + i] = 0.5 * h * kGl5Weights[i];
    }
  }
  return {std::move(x), std::move(w)};
}

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Embedded 7-point Gauss weights at Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gauss_kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[i] * s;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * s;
  }
  return {kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b]:
/// bisect the panel with the largest error estimate until the summed estimate
/// drops below abs_tol or max_panels is reached.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-15, int max_panels = 200) {
  if (a == b) return 0.0;
  struct Panel {
    double lo, hi, value, error;
  };
  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(max_panels) + 1);
  {
    const auto [v, e] = detail::gauss_kronrod15(f, a, b);
    panels.push_back({a, b, v, e});
  }
  auto worst = [&]() {
    return std::max_element(panels.begin(), panels.end(),
                            [](const Panel& l, const Panel& r) { return l.error < r.error; });
  };
  auto total_error = [&]() {
    double e = 0.0;
    for (const auto& p : panels) e += p.error;
    return e;
  };
  while (static_cast<int>(panels.size()) < max_panels && total_error() > abs_tol) {
    auto it = worst();
    const Panel p = *it;
    const double mid = 0.5 * (p.lo + p.hi);
    if (!(mid > p.lo && mid < p.hi)) break;
    const auto [lv, le] = detail::gauss_kronrod15(f, p.lo, mid);
    const auto [rv, re] = detail::gauss_kronrod15(f, mid, p.hi);
    *it = {p.lo, mid, lv, le};
    panels.push_back({mid, p.hi, rv, re});
  }
  double sum = 0.0;
  for (const auto& p : panels) sum += p.value;
  return sum;
}

}  // namespace fracinv::quad

#endif  // FRACINV_QUADRATURE_HPP
