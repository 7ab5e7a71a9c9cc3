#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "fracinv/direct_solver.hpp"
#include "fracinv/special_functions.hpp"
#include "oracles.hpp"

using namespace fracinv;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Vector a1(const TimeGrid& g) {
  Vector a(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) a[k] = std::sin(5 * kPi * g.node(k)) + 1.3;
  return a;
}

Vector affine(const TimeGrid& g, double c0, double c1) {
  return (c0 + c1 * g.nodes().array()).matrix();
}

ProblemData interval_data(const EigenSystem& es, const TimeGrid& grid) {
  return project(es, builtin_field("neg_sin_pi_x"), {builtin_field("neg_sin_pi_x"), affine_profile(1.0, 1.0)}, grid);
}

Vector random_positive(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("zero data gives the zero solution") {
  const TimeGrid g(1.0, 50);
  CHECK(solve_mode(3.0, Vector::Ones(g.size()), Vector::Zero(g.size()), 0.0, 0.6, g).isZero(0.0));
}

TEST_CASE("mode solve against the closed forms") {
  const TimeGrid g(1.0, 2048);
  const double lambda = kPi * kPi, b = std::sqrt(2.0) / 2.0;
  const Vector u = solve_mode(lambda, Vector::Ones(g.size()), Vector::Zero(g.size()), b, 0.9, g);
  CHECK(u[0] == b);
  CHECK(std::abs(u[2048] - b * ml_relaxation(0.9, lambda, 1.0)) <= 2e-3);

  const Vector F = affine(g, b, b);
  const Vector v = solve_mode(lambda, Vector::Ones(g.size()), F, 0.0, 0.9, g);
  const Vector exact = analytic_mode_solution(lambda, 1.0, F, 0.0, 0.9, g);
  CHECK(std::abs(v[2048] - exact[2048]) <= 2e-3);
}

TEST_CASE("analytic mode solution") {
  const TimeGrid g(2.0, 400);
  CHECK(analytic_mode_solution(4.0, 1.5, Vector::Zero(g.size()), 1.0, 0.6, g)[0] == 1.0);

  // constant forcing: (c / (lambda a)) (1 - E(-lambda a t^alpha))
  const double lambda = 3.0, a = 0.7, c = 2.0;
  const Vector u = analytic_mode_solution(lambda, a, Vector::Constant(g.size(), c), 0.0, 0.4, g);
  for (Eigen::Index k = 0; k < g.size(); k += 37)
    CHECK(u[k] == Approx(c / (lambda * a) * (1.0 - ml_relaxation(0.4, lambda * a, g.node(k)))).epsilon(1e-12).scale(1.0));

  // alpha = 1: u' + lambda a u = F with F = 1 + t, classical variation of constants
  const Vector w = analytic_mode_solution(lambda, a, affine(g, 1.0, 1.0), 0.5, 1.0, g);
  const double c0 = lambda * a;
  for (Eigen::Index k = 0; k < g.size(); k += 23) {
    const double t = g.node(k);
    const double particular = (1.0 + t) / c0 - 1.0 / (c0 * c0);
    const double exact = (0.5 - 1.0 / c0 + 1.0 / (c0 * c0)) * std::exp(-c0 * t) + particular;
    CHECK(w[k] == Approx(exact).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("L1 solve converges to the oracle at the expected order") {
  // Smooth-in-time data (u0 = 0, F = t) and unit rate: the max-node error
  // is in its asymptotic regime already at these step counts.
  for (const double alpha : {0.5, 0.9}) {
    std::vector<double> errors;
    for (const int n : {128, 256, 512, 1024, 2048}) {
      const TimeGrid g(1.0, n);
      const Vector F = affine(g, 0.0, 1.0);
      const Vector u = solve_mode(1.0, Vector::Ones(g.size()), F, 0.0, alpha, g);
      const Vector exact = analytic_mode_solution(1.0, 1.0, F, 0.0, alpha, g);
      errors.push_back((u - exact).cwiseAbs().maxCoeff());
    }
    const double order = oracle::last_order(errors);
    MESSAGE("alpha " << alpha << " observed order " << order);
    CHECK(order >= 2.0 - alpha - 0.3);
    CHECK(order <= 2.0 - alpha + 0.3);
  }
}

TEST_CASE("sign preservation, coefficient monotonicity, superposition") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ua(0.1, 0.95), ul(0.5, 60.0), ub(0.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const TimeGrid g(1.0, 100);
    const double alpha = ua(rng), lambda = ul(rng), b = ub(rng);
    const Vector F = random_positive(rng, g.size(), 0.0, 3.0);
    const Vector a_lo = random_positive(rng, g.size(), 0.2, 1.5);
    const Vector a_hi = a_lo + random_positive(rng, g.size(), 0.0, 1.0);

    const Vector u_lo = solve_mode(lambda, a_lo, F, b, alpha, g);
    const Vector u_hi = solve_mode(lambda, a_hi, F, b, alpha, g);
    CHECK(u_lo.minCoeff() >= -1e-12);
    CHECK(u_hi.minCoeff() >= -1e-12);
    CHECK((u_lo - u_hi).minCoeff() >= -1e-10);

    const Vector r = solve_mode(lambda, a_lo, Vector::Zero(g.size()), b, alpha, g);
    const Vector i = solve_mode(lambda, a_lo, F, 0.0, alpha, g);
    CHECK((u_lo - r - i).cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + u_lo.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("mode solve rejects bad coefficients") {
  const TimeGrid g(1.0, 10);
  Vector a = Vector::Ones(g.size());
  a[4] = 0.0;
  CHECK_THROWS_AS(solve_mode(1.0, a, Vector::Zero(g.size()), 1.0, 0.5, g), DomainError);
  CHECK_THROWS_AS(solve_mode(1.0, Vector::Ones(3), Vector::Zero(g.size()), 1.0, 0.5, g), ContractError);
  CHECK_THROWS_AS(CoefficientSamples(g, Vector::Ones(4)), ContractError);
}

TEST_CASE("direct solve and flux on the interval setup") {
  const EigenSystem es = build_interval(16, 0.0);
  const TimeGrid g(1.0, 500);
  const ProblemData pd = interval_data(es, g);
  const CoefficientSamples a(g, a1(g));
  const ModeTrace mt = solve_direct(es, pd, a, 0.9);
  CHECK(mt.U.col(0) == pd.b);
  CHECK(mt.U.bottomRows(15).isZero(0.0));
  CHECK(mt.U.minCoeff() >= 0.0);

  const FluxTrace ft = flux_trace(es, mt, a);
  CHECK(ft.g.minCoeff() > 0.0);
  for (Eigen::Index k = 0; k < g.size(); k += 50)
    CHECK(ft.g[k] == Approx(a.values[k] * mt.U(0, k) * std::sqrt(2.0) * kPi).epsilon(1e-14));

  const ProblemData zero{Vector::Zero(16), Matrix::Zero(16, g.size()), g};
  const ModeTrace mz = solve_direct(es, zero, a, 0.9);
  CHECK(mz.U.isZero(0.0));
  CHECK(flux_trace(es, mz, a).g.isZero(0.0));
}

TEST_CASE("noise model") {
  const TimeGrid g(1.0, 300);
  const FluxTrace ft{g, Vector::LinSpaced(g.size(), 1.0, 2.0)};
  CHECK(add_noise(ft, 0.0, 3).g == ft.g);
  const FluxTrace n1 = add_noise(ft, 0.03, 42);
  const FluxTrace n2 = add_noise(ft, 0.03, 42);
  CHECK(n1.g == n2.g);
  CHECK(n1.delta == 0.03);
  CHECK(((n1.g - ft.g).array() / ft.g.array()).abs().maxCoeff() <= 0.03);
  CHECK(add_noise(ft, 0.03, 43).g != n1.g);
}
