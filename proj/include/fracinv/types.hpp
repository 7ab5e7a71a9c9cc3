#ifndef FRACINV_TYPES_HPP
#define FRACINV_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace fracinv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point = Eigen::Vector2d;

// Argument outside the mathematical domain of an operation (poles, alpha out
// of range, observation point off the boundary, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Kernel evaluated where it blows up, e.g. t^(alpha-1) at t = 0.
class SingularPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Caller broke a shape/length contract.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data violates the positivity/sign assumptions the inverse iteration
// relies on.
class AssumptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The flux denominator of the fixed-point operator vanished or went negative.
class WellDefinednessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform partition of [0, T] into Nt steps.
class TimeGrid {
 public:
  TimeGrid(double horizon, Eigen::Index steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0)) throw DomainError("TimeGrid: horizon must be positive");
    if (steps < 2) throw DomainError("TimeGrid: need at least 2 steps");
  }

  double horizon() const { return horizon_; }
  Eigen::Index steps() const { return steps_; }
  Eigen::Index size() const { return steps_ + 1; }
  double tau() const { return horizon_ / static_cast<double>(steps_); }

  // Last node is pinned to T so t_Nt == T exactly.
  double node(Eigen::Index k) const {
    return k == steps_ ? horizon_ : static_cast<double>(k) * tau();
  }

  Vector nodes() const {
    Vector t(size());
    for (Eigen::Index k = 0; k < size(); ++k) t[k] = node(k);
    return t;
  }

  /// Grid with `factor` times as many steps over the same horizon.
  TimeGrid refined(Eigen::Index factor) const { return TimeGrid(horizon_, steps_ * factor); }

  bool operator==(const TimeGrid& other) const {
    return horizon_ == other.horizon_ && steps_ == other.steps_;
  }

 private:
  double horizon_;
  Eigen::Index steps_;
};

inline void require_length(Eigen::Index got, const TimeGrid& grid, const char* what) {
  if (got != grid.size()) {
    throw ContractError(std::string(what) + ": expected " + std::to_string(grid.size()) +
                        " samples, got " + std::to_string(got));
  }
}

}  // namespace fracinv

#endif  // FRACINV_TYPES_HPP
