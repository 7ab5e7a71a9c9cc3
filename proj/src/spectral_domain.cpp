#include "fracinv/spectral_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "fracinv/quadrature.hpp"
#include "fracinv/special_functions.hpp"

namespace fracinv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundaryTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) <= kBoundaryTol; }

// Outward unit normal of the unit square at a non-corner boundary point.
Point square_normal(const Point& x0) {
  const double x = x0.x();
  const double y = x0.y();
  if (x < -kBoundaryTol || x > 1 + kBoundaryTol || y < -kBoundaryTol || y > 1 + kBoundaryTol) {
    throw DomainError("build_square: observation point lies outside the unit square");
  }
  const bool left = near(x, 0.0), right = near(x, 1.0), bottom = near(y, 0.0), top = near(y, 1.0);
  const int hits = left + right + bottom + top;
  if (hits == 0) throw DomainError("build_square: observation point is not on the boundary");
  if (hits > 1) throw DomainError("build_square: normal derivative undefined at a corner");
  if (left) return {-1.0, 0.0};
  if (right) return {1.0, 0.0};
  if (bottom) return {0.0, -1.0};
  return {0.0, 1.0};
}

void attach_fluxes(EigenSystem& es) {
  for (auto& mode : es.modes) mode.flux_at_x0 = mode_gradient(es, mode, es.x0).dot(es.normal);
}

}  // namespace

std::string to_string(DomainKind kind) { return kind == DomainKind::interval ? "interval" : "square"; }

std::string Mode::label() const {
  return n == 0 ? std::to_string(m) : "(" + std::to_string(m) + "," + std::to_string(n) + ")";
}

Vector EigenSystem::lambdas() const {
  Vector out(size());
  for (Eigen::Index i = 0; i < size(); ++i) out[i] = modes[static_cast<std::size_t>(i)].lambda;
  return out;
}

Vector EigenSystem::fluxes() const {
  Vector out(size());
  for (Eigen::Index i = 0; i < size(); ++i) out[i] = modes[static_cast<std::size_t>(i)].flux_at_x0;
  return out;
}

EigenSystem build_interval(int mode_count, double x0) {
  if (mode_count < 1) throw DomainError("build_interval: need at least one mode");
  EigenSystem es;
  es.kind = DomainKind::interval;
  if (x0 == 0.0) {
    es.normal = {-1.0, 0.0};
  } else if (x0 == 1.0) {
    es.normal = {1.0, 0.0};
  } else {
    throw DomainError("build_interval: x0 must be an endpoint (0 or 1)");
  }
  es.x0 = {x0, 0.0};
  for (int m = 1; m <= mode_count; ++m) {
    Mode mode;
    mode.index = m;
    mode.m = m;
    mode.n = 0;
    mode.lambda = static_cast<double>(m) * m * kPi * kPi;
    es.modes.push_back(mode);
  }
  attach_fluxes(es);
  return normalize_signs(std::move(es));
}

EigenSystem build_square(int mode_count, const Point& x0) {
  if (mode_count < 1) throw DomainError("build_square: need at least one mode");
  EigenSystem es;
  es.kind = DomainKind::square;
  es.normal = square_normal(x0);
  es.x0 = x0;

  std::vector<std::tuple<int, int, int>> pairs;  // (m^2 + n^2, m, n)
  for (int m = 1; m <= mode_count; ++m)
    for (int n = 1; n <= mode_count; ++n) pairs.emplace_back(m * m + n * n, m, n);
  std::sort(pairs.begin(), pairs.end());

  for (int i = 0; i < mode_count; ++i) {
    const auto [sum, m, n] = pairs[static_cast<std::size_t>(i)];
    Mode mode;
    mode.index = i + 1;
    mode.m = m;
    mode.n = n;
    mode.lambda = static_cast<double>(sum) * kPi * kPi;
    es.modes.push_back(mode);
  }
  attach_fluxes(es);
  return normalize_signs(std::move(es));
}

EigenSystem normalize_signs(EigenSystem es) {
  for (auto& mode : es.modes) {
    if (mode.flux_at_x0 < 0.0) {
      mode.sign = -mode.sign;
      mode.flux_at_x0 = -mode.flux_at_x0;
    }
  }
  return es;
}

double mode_value(const EigenSystem& es, const Mode& mode, const Point& p) {
  if (es.kind == DomainKind::interval) return mode.sign * std::numbers::sqrt2 * sin_pi(mode.m * p.x());
  return mode.sign * 2.0 * sin_pi(mode.m * p.x()) * sin_pi(mode.n * p.y());
}

Point mode_gradient(const EigenSystem& es, const Mode& mode, const Point& p) {
  const double mp = mode.m * kPi;
  if (es.kind == DomainKind::interval) {
    return {mode.sign * std::numbers::sqrt2 * mp * cos_pi(mode.m * p.x()), 0.0};
  }
  const double np = mode.n * kPi;
  const double sx = sin_pi(mode.m * p.x()), cx = cos_pi(mode.m * p.x());
  const double sy = sin_pi(mode.n * p.y()), cy = cos_pi(mode.n * p.y());
  return {mode.sign * 2.0 * mp * cx * sy, mode.sign * 2.0 * np * sx * cy};
}

double mode_neg_laplacian(const EigenSystem& es, const Mode& mode, const Point& p) {
  const double mp = mode.m * kPi;
  if (es.kind == DomainKind::interval) {
    return mode.sign * std::numbers::sqrt2 * mp * mp * sin_pi(mode.m * p.x());
  }
  const double np = mode.n * kPi;
  return mode.sign * 2.0 * (mp * mp + np * np) * sin_pi(mode.m * p.x()) * sin_pi(mode.n * p.y());
}

SpatialField zero_field() {
  return {"zero", [](const Point&) { return 0.0; }};
}

SpatialField builtin_field(const std::string& name, double scale) {
  std::ostringstream desc;
  desc << name;
  if (scale != 1.0) desc << "*" << scale;
  if (name == "zero") return {desc.str(), [](const Point&) { return 0.0; }};
  if (name == "neg_sin_pi_x") {
    return {desc.str(), [scale](const Point& p) { return -scale * std::sin(kPi * p.x()); }};
  }
  if (name == "neg_sin_pi_xy_bubble") {
    return {desc.str(), [scale](const Point& p) {
              const double x = p.x(), y = p.y();
              return -scale * std::sin(kPi * x * y * (1.0 - x) * (1.0 - y));
            }};
  }
  throw DomainError("unknown built-in spatial function '" + name + "'");
}

namespace {

// Locate t in a uniform partition of [0, 1] with `cells` cells.
std::pair<Eigen::Index, double> locate(double t, Eigen::Index cells) {
  const double s = std::clamp(t, 0.0, 1.0) * static_cast<double>(cells);
  const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(s), cells - 1);
  return {i, s - static_cast<double>(i)};
}

}  // namespace

SpatialField tabulated_field_1d(Vector samples) {
  if (samples.size() < 2) throw ContractError("tabulated field needs at least 2 samples");
  const std::string desc = "tabulated1d[" + std::to_string(samples.size()) + "]";
  return {desc, [v = std::move(samples)](const Point& p) {
            const auto [i, r] = locate(p.x(), v.size() - 1);
            return (1.0 - r) * v[i] + r * v[i + 1];
          }};
}

SpatialField tabulated_field_2d(Matrix samples) {
  if (samples.rows() < 2 || samples.cols() < 2) throw ContractError("tabulated field needs at least 2x2 samples");
  const std::string desc = "tabulated2d[" + std::to_string(samples.rows()) + "x" + std::to_string(samples.cols()) + "]";
  return {desc, [v = std::move(samples)](const Point& p) {
            const auto [i, r] = locate(p.x(), v.rows() - 1);
            const auto [j, s] = locate(p.y(), v.cols() - 1);
            return (1 - r) * (1 - s) * v(i, j) + r * (1 - s) * v(i + 1, j) + (1 - r) * s * v(i, j + 1) +
                   r * s * v(i + 1, j + 1);
          }};
}

TimeProfile constant_profile(double c) {
  return {"constant(" + std::to_string(c) + ")", [c](double) { return c; }};
}

TimeProfile affine_profile(double c0, double c1) {
  return {"affine(" + std::to_string(c0) + "," + std::to_string(c1) + ")", [c0, c1](double t) { return c0 + c1 * t; }};
}

TimeProfile tabulated_profile(Vector values, double horizon) {
  if (values.size() < 2) throw ContractError("tabulated profile needs at least 2 values");
  if (!(horizon > 0.0)) throw DomainError("tabulated profile needs a positive horizon");
  const std::string desc = "tabulated[" + std::to_string(values.size()) + "]";
  return {desc, [v = std::move(values), horizon](double t) {
            const auto [i, r] = locate(t / horizon, v.size() - 1);
            return (1.0 - r) * v[i] + r * v[i + 1];
          }};
}

SourceSpec zero_source() { return {zero_field(), constant_profile(0.0)}; }

ProblemData project(const EigenSystem& es, const SpatialField& u0, const SourceSpec& source,
                    const TimeGrid& grid, int panels) {
  const auto [x, w] = quad::composite_gauss_legendre(0.0, 1.0, panels);
  const Eigen::Index q = x.size();
  const Eigen::Index modes = es.size();
  Vector b(modes), wproj(modes);
  // Bounds on |(f, phi_n)| used to flush quadrature roundoff on orthogonal modes.
  double u0_mass = 0.0, w_mass = 0.0;

  if (es.kind == DomainKind::interval) {
    Vector u0w(q), sw(q);
    for (Eigen::Index i = 0; i < q; ++i) {
      const Point p{x[i], 0.0};
      u0w[i] = w[i] * u0(p);
      sw[i] = w[i] * source.w(p);
    }
    u0_mass = std::sqrt(2.0) * u0w.cwiseAbs().sum();
    w_mass = std::sqrt(2.0) * sw.cwiseAbs().sum();
    for (Eigen::Index k = 0; k < modes; ++k) {
      const Mode& mode = es.modes[static_cast<std::size_t>(k)];
      Vector phi(q);
      for (Eigen::Index i = 0; i < q; ++i) phi[i] = mode_value(es, mode, {x[i], 0.0});
      b[k] = u0w.dot(phi);
      wproj[k] = sw.dot(phi);
    }
  } else {
    int max_index = 1;
    for (const auto& mode : es.modes) max_index = std::max({max_index, mode.m, mode.n});
    // sines(r, i) = sin((r+1) pi x_i)
    Matrix sines(max_index, q);
    for (int r = 0; r < max_index; ++r)
      for (Eigen::Index i = 0; i < q; ++i) sines(r, i) = sin_pi((r + 1) * x[i]);
    Matrix u0w(q, q), sw(q, q);
    for (Eigen::Index i = 0; i < q; ++i) {
      for (Eigen::Index j = 0; j < q; ++j) {
        const Point p{x[i], x[j]};
        const double ww = w[i] * w[j];
        u0w(i, j) = ww * u0(p);
        sw(i, j) = ww * source.w(p);
      }
    }
    u0_mass = 2.0 * u0w.cwiseAbs().sum();
    w_mass = 2.0 * sw.cwiseAbs().sum();
    const Matrix bu = sines * u0w * sines.transpose();
    const Matrix bs = sines * sw * sines.transpose();
    for (Eigen::Index k = 0; k < modes; ++k) {
      const Mode& mode = es.modes[static_cast<std::size_t>(k)];
      b[k] = 2.0 * mode.sign * bu(mode.m - 1, mode.n - 1);
      wproj[k] = 2.0 * mode.sign * bs(mode.m - 1, mode.n - 1);
    }
  }

  const double eps = 64.0 * std::numeric_limits<double>::epsilon();
  b = (b.array().abs() <= eps * u0_mass).select(0.0, b);
  wproj = (wproj.array().abs() <= eps * w_mass).select(0.0, wproj);

  Vector f(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) f[k] = source.f(grid.node(k));
  return {std::move(b), wproj * f.transpose(), grid};
}

AssumptionReport validate_assumptions(const ProblemData& pd, const EigenSystem& es,
                                      const Eigen::Ref<const Vector>& g, double rel_tol) {
  AssumptionReport rep;
  const Eigen::Index modes = es.size();
  if (pd.b.size() != modes || pd.F.rows() != modes) throw ContractError("validate_assumptions: mode count mismatch");
  require_length(g.size(), pd.grid, "validate_assumptions");

  const double tol_b = rel_tol * (pd.b.size() ? pd.b.cwiseAbs().maxCoeff() : 0.0);
  const double tol_f = rel_tol * (pd.F.size() ? pd.F.cwiseAbs().maxCoeff() : 0.0);
  const Vector d = es.fluxes();

  rep.initial_nonnegative = (pd.b.array() >= -tol_b).all();
  if (!rep.initial_nonnegative) {
    Eigen::Index worst;
    pd.b.minCoeff(&worst);
    rep.notes.push_back("b_n < 0 for mode " + es.modes[static_cast<std::size_t>(worst)].label());
  }
  rep.source_nonnegative = (pd.F.array() >= -tol_f).all();
  if (!rep.source_nonnegative) rep.notes.push_back("F_n(t_k) < 0 for some mode and node");

  for (Eigen::Index k = 0; k < modes; ++k) {
    if (d[k] > 0.0 && pd.b[k] > tol_b && pd.F.row(k).minCoeff() > tol_f) {
      rep.distinguished_mode = es.modes[static_cast<std::size_t>(k)].index;
      break;
    }
  }
  if (!rep.distinguished_mode) rep.notes.push_back("no mode with d_N > 0, b_N > 0 and F_N > 0");

  rep.flux_positive = g.size() > 0 && (g.array() > 0.0).all();
  if (!rep.flux_positive) rep.notes.push_back("flux data not strictly positive");

  // F_n = lambda_n b_n f(t): recover f from the mode with the largest lambda_n b_n.
  const Vector lb = es.lambdas().cwiseProduct(pd.b);
  Eigen::Index ref = 0;
  const double lb_max = lb.cwiseAbs().maxCoeff(&ref);
  if (lb_max > 0.0) {
    const Vector f = pd.F.row(ref).transpose() / lb[ref];
    const double f_scale = std::max(f.cwiseAbs().maxCoeff(), 1e-300);
    rep.existence_form = true;
    for (Eigen::Index k = 0; k < modes; ++k) {
      const Vector expected = lb[k] * f;
      const double mismatch = (pd.F.row(k).transpose() - expected).cwiseAbs().maxCoeff();
      if (mismatch > 1e-8 * std::abs(lb_max) * f_scale + tol_f) {
        rep.existence_form = false;
        break;
      }
    }
    const double normal_u0 = pd.b.dot(d);
    if (rep.existence_form && normal_u0 > 0.0) {
      rep.existence_bound = (f.array() >= g.array() / normal_u0).all();
    }
  }
  if (!rep.existence_form) {
    rep.notes.push_back("source is not of the form -L u0 * f(t)");
  } else if (!rep.existence_bound) {
    rep.notes.push_back("f(t) < g(t) / du0/dn(x0) somewhere");
  }
  return rep;
}

}  // namespace fracinv
