#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracinv/quadrature.hpp"
#include "fracinv/spectral_domain.hpp"

using namespace fracinv;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Tensor Gauss-Legendre over the unit square (or the unit interval when 1D).
template <class F>
double integrate_domain(const EigenSystem& es, F&& f) {
  const auto [x, w] = quad::composite_gauss_legendre(0.0, 1.0, 24);
  double acc = 0.0;
  if (es.kind == DomainKind::interval) {
    for (Eigen::Index i = 0; i < x.size(); ++i) acc += w[i] * f(Point(x[i], 0.0));
    return acc;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index j = 0; j < x.size(); ++j) acc += w[i] * w[j] * f(Point(x[i], x[j]));
  return acc;
}

Point fd_gradient(const EigenSystem& es, const Mode& m, const Point& p) {
  const double h = 1e-6;
  const double gx = (mode_value(es, m, p + Point(h, 0)) - mode_value(es, m, p - Point(h, 0))) / (2 * h);
  if (es.kind == DomainKind::interval) return {gx, 0.0};
  const double gy = (mode_value(es, m, p + Point(0, h)) - mode_value(es, m, p - Point(0, h))) / (2 * h);
  return {gx, gy};
}

ProblemData interval_data(const EigenSystem& es, const TimeGrid& grid) {
  return project(es, builtin_field("neg_sin_pi_x"), {builtin_field("neg_sin_pi_x"), affine_profile(1.0, 1.0)}, grid);
}

}  // namespace

TEST_CASE("interval eigensystem") {
  const EigenSystem es = build_interval(3, 0.0);
  CHECK(es.lambdas()[0] == Approx(kPi * kPi));
  CHECK(es.lambdas()[1] == Approx(4 * kPi * kPi));
  CHECK(es.lambdas()[2] == Approx(9 * kPi * kPi));
  CHECK(build_interval(1, 0.0).modes[0].flux_at_x0 == Approx(std::sqrt(2.0) * kPi).epsilon(1e-14));
  CHECK(build_interval(64, 0.0).fluxes().minCoeff() >= 0.0);
  CHECK(build_interval(64, 1.0).fluxes().minCoeff() > 0.0);
  CHECK(build_interval(2, 1.0).modes[1].flux_at_x0 == Approx(2.0 * std::sqrt(2.0) * kPi));
  CHECK_THROWS_AS(build_interval(4, 0.5), DomainError);
  CHECK_THROWS_AS(build_interval(0, 0.0), DomainError);
}

TEST_CASE("square eigensystem") {
  const EigenSystem es = build_square(64, Point(0.0, 0.5));
  CHECK(es.modes[0].lambda == Approx(2 * kPi * kPi));
  for (std::size_t i = 0; i + 1 < es.modes.size(); ++i) CHECK(es.modes[i].lambda <= es.modes[i + 1].lambda);
  CHECK(es.modes[1].m == 1);
  CHECK(es.modes[1].n == 2);
  CHECK(es.modes[2].m == 2);
  CHECK(es.modes[1].flux_at_x0 == 0.0);
  CHECK(es.modes[0].flux_at_x0 == Approx(2 * kPi).epsilon(1e-14));
  CHECK(es.fluxes().minCoeff() >= 0.0);
  CHECK_THROWS_AS(build_square(8, Point(0.5, 0.5)), DomainError);
  CHECK_THROWS_AS(build_square(8, Point(0.0, 0.0)), DomainError);
  CHECK_THROWS_AS(build_square(8, Point(1.5, 0.5)), DomainError);
  CHECK_NOTHROW(build_square(8, Point(0.3, 1.0)));
}

TEST_CASE("stored flux is the outward normal derivative") {
  for (const auto& es : {build_interval(6, 0.0), build_interval(6, 1.0), build_square(20, Point(0.0, 0.5)),
                         build_square(20, Point(0.3, 1.0)), build_square(20, Point(1.0, 0.7))}) {
    for (const auto& m : es.modes) {
      const Point grad = mode_gradient(es, m, es.x0);
      CHECK(grad.dot(es.normal) == Approx(m.flux_at_x0).epsilon(1e-12).scale(1.0));
      // interior-side difference keeps the stencil inside the domain
      const double h = 1e-6;
      const double fd = (mode_value(es, m, es.x0) - mode_value(es, m, es.x0 - h * es.normal)) / h;
      CHECK(fd == Approx(m.flux_at_x0).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("sign normalization is idempotent") {
  for (const auto& es : {build_interval(10, 1.0), build_square(30, Point(0.4, 0.0))}) {
    const EigenSystem once = normalize_signs(es);
    const EigenSystem twice = normalize_signs(once);
    for (std::size_t i = 0; i < es.modes.size(); ++i) {
      CHECK(once.modes[i].sign == twice.modes[i].sign);
      CHECK(once.modes[i].flux_at_x0 == twice.modes[i].flux_at_x0);
      CHECK(once.modes[i].flux_at_x0 >= 0.0);
    }
  }
}

TEST_CASE("orthonormality and the eigen relation") {
  for (const auto& es : {build_interval(8, 0.0), build_square(20, Point(0.0, 0.5))}) {
    const std::size_t count = std::min<std::size_t>(8, es.modes.size());
    for (std::size_t i = 0; i < count; ++i) {
      const Mode& a = es.modes[i];
      for (std::size_t j = 0; j < count; ++j) {
        const Mode& b = es.modes[j];
        const double ip = integrate_domain(es, [&](const Point& p) { return mode_value(es, a, p) * mode_value(es, b, p); });
        CHECK(ip == Approx(i == j ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
      }
      const double rayleigh =
          integrate_domain(es, [&](const Point& p) { return mode_neg_laplacian(es, a, p) * mode_value(es, a, p); });
      CHECK(rayleigh == Approx(a.lambda).epsilon(1e-10));
      const double energy = integrate_domain(es, [&](const Point& p) { return mode_gradient(es, a, p).squaredNorm(); });
      CHECK(energy == Approx(a.lambda).epsilon(1e-10));
    }
  }
}

TEST_CASE("gradient matches finite differences of the mode") {
  const EigenSystem es = build_square(12, Point(0.0, 0.5));
  for (const auto& m : es.modes) {
    const Point p(0.37, 0.61);
    CHECK((mode_gradient(es, m, p) - fd_gradient(es, m, p)).norm() <= 1e-6 * (1.0 + m.lambda));
  }
}

TEST_CASE("projection of the interval setup") {
  const EigenSystem es = build_interval(8, 0.0);
  const TimeGrid grid(1.0, 10);
  const ProblemData pd = interval_data(es, grid);
  CHECK(pd.b[0] == Approx(std::sqrt(2.0) / 2.0).epsilon(1e-13));
  for (Eigen::Index n = 1; n < 8; ++n) CHECK(std::abs(pd.b[n]) <= 1e-14);
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    CHECK(pd.F(0, k) == Approx((grid.node(k) + 1.0) * std::sqrt(2.0) / 2.0).epsilon(1e-13));
    for (Eigen::Index n = 1; n < 8; ++n) CHECK(std::abs(pd.F(n, k)) <= 1e-14);
  }
  CHECK(pd.b.dot(es.fluxes()) == Approx(kPi).epsilon(1e-8));

  const ProblemData zero = project(es, zero_field(), zero_source(), grid);
  CHECK(zero.b.isZero(0.0));
  CHECK(zero.F.isZero(0.0));
}

TEST_CASE("projection of the square bubble") {
  const EigenSystem es = build_square(16, Point(0.0, 0.5));
  const TimeGrid grid(1.0, 4);
  const ProblemData pd = project(es, builtin_field("neg_sin_pi_xy_bubble"),
                                 {builtin_field("neg_sin_pi_xy_bubble"), affine_profile(1.0, 1.0)}, grid);
  // Independent check of b_1 with a different rule.
  const Mode& m1 = es.modes[0];
  const double b1 = integrate_domain(es, [&](const Point& p) {
    return -std::sin(kPi * p.x() * p.y() * (1 - p.x()) * (1 - p.y())) * mode_value(es, m1, p);
  });
  CHECK(pd.b[0] == Approx(b1).epsilon(1e-12));
  CHECK(pd.F(0, 4) == Approx(2.0 * b1).epsilon(1e-12));
  // symmetric in x and y: modes with an even index along either axis vanish
  CHECK(std::abs(pd.b[1]) <= 1e-14);
}

TEST_CASE("tabulated fields and profiles") {
  const SpatialField f = tabulated_field_1d((Vector(3) << 0.0, 2.0, 0.0).finished());
  CHECK(f(Point(0.25, 0.0)) == Approx(1.0));
  CHECK(f(Point(0.5, 0.0)) == Approx(2.0));
  Matrix s(2, 2);
  s << 0.0, 1.0, 2.0, 3.0;
  const SpatialField g = tabulated_field_2d(s);
  CHECK(g(Point(0.5, 0.5)) == Approx(1.5));
  CHECK(g(Point(1.0, 0.0)) == Approx(2.0));
  const TimeProfile p = tabulated_profile((Vector(3) << 1.0, 3.0, 2.0).finished(), 2.0);
  CHECK(p(0.5) == Approx(2.0));
  CHECK(p(1.5) == Approx(2.5));
  CHECK(affine_profile(1.0, 2.0)(0.5) == Approx(2.0));
  CHECK(builtin_field("neg_sin_pi_x", 3.0)(Point(0.5, 0.0)) == Approx(-3.0));
  CHECK_THROWS_AS(builtin_field("nope"), DomainError);
  CHECK_THROWS_AS(tabulated_field_1d(Vector::Ones(1)), ContractError);
}

TEST_CASE("assumption checks") {
  const EigenSystem es = build_interval(8, 0.0);
  const TimeGrid grid(1.0, 20);
  const ProblemData pd = interval_data(es, grid);
  const Vector g = Vector::Constant(grid.size(), 2.0);

  const AssumptionReport ok = validate_assumptions(pd, es, g);
  CHECK(ok.inverse_ready());
  REQUIRE(ok.distinguished_mode.has_value());
  CHECK(*ok.distinguished_mode == 1);
  CHECK(ok.existence_form);

  Vector g0 = g;
  g0[7] = 0.0;
  CHECK_FALSE(validate_assumptions(pd, es, g0).flux_positive);
  CHECK_FALSE(validate_assumptions(pd, es, g0).inverse_ready());

  const ProblemData neg = project(es, builtin_field("neg_sin_pi_x", -1.0), zero_source(), grid);
  const AssumptionReport bad = validate_assumptions(neg, es, g);
  CHECK_FALSE(bad.initial_nonnegative);
  CHECK_FALSE(bad.inverse_ready());
  CHECK_FALSE(bad.notes.empty());

  // F = -L u0 * f with f = 3 >= g / du0/dn = 2 / pi satisfies the existence bound.
  const ProblemData exist =
      project(es, builtin_field("neg_sin_pi_x"), {builtin_field("neg_sin_pi_x", kPi * kPi), constant_profile(3.0)}, grid);
  const AssumptionReport ex = validate_assumptions(exist, es, g);
  CHECK(ex.existence_form);
  CHECK(ex.existence_bound);
  CHECK(ex.existence_ready());
  // Here f = (t + 1) / pi^2 stays below g / pi.
  CHECK_FALSE(ok.existence_bound);
}
