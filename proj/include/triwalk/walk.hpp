#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "triwalk/coin.hpp"
#include "triwalk/errors.hpp"

namespace triwalk {

inline constexpr int kDefaultStepBudget = 100000;

/// Amplitude field after `steps()` steps. Column j holds the (L, S, R)
/// amplitudes at position m = j - steps(); the support is [-t, t].
template <typename Real = double>
class WalkState {
 public:
  using Field = Eigen::Matrix<Complex<Real>, 3, Eigen::Dynamic>;

  WalkState(int steps, Field amplitudes) : steps_(steps), amplitudes_(std::move(amplitudes)) {
    if (steps < 0 || amplitudes_.cols() != 2 * steps + 1) {
      throw InvalidArgument("WalkState: field width must be 2t+1");
    }
  }

  int steps() const { return steps_; }
  const Field& amplitudes() const { return amplitudes_; }

  /// Cell at position m; zero outside the light cone.
  Vector3c<Real> at(int m) const {
    if (m < -steps_ || m > steps_) return Vector3c<Real>::Zero();
    return amplitudes_.col(m + steps_);
  }

  Real total_probability() const { return amplitudes_.squaredNorm(); }

 private:
  int steps_;
  Field amplitudes_;
};

/// p(m, t) for m in [-t, t]; entry j is position j - t.
template <typename Real = double>
class PositionDistribution {
 public:
  using Values = Eigen::Array<Real, Eigen::Dynamic, 1>;

  PositionDistribution(int steps, Values probabilities) : steps_(steps), probabilities_(std::move(probabilities)) {
    if (steps < 0 || probabilities_.size() != 2 * steps + 1) {
      throw InvalidArgument("PositionDistribution: size must be 2t+1");
    }
  }

  int steps() const { return steps_; }
  const Values& probabilities() const { return probabilities_; }
  Real at(int m) const { return (m < -steps_ || m > steps_) ? Real(0) : probabilities_(m + steps_); }
  Real total() const { return probabilities_.sum(); }

 private:
  int steps_;
  Values probabilities_;
};

template <typename Real>
WalkState<Real> initial_state(const CoinState<Real>& coin_state, const CoinSpec<Real>& spec) {
  require_normalized(coin_state);
  typename WalkState<Real>::Field field(3, 1);
  field.col(0) = standard_amplitudes(coin_state, spec);
  return WalkState<Real>(0, std::move(field));
}

namespace detail {

// One coin-then-shift update of the cells in columns [first, first + width) of
// `current`, written into `next` (same width as `current`, zeroed by caller on
// [first - 1, first + width + 1)). L moves one column left, R one column right.
template <typename Real, typename Field>
void advance(const CoinMatrix<Real>& coin, const Field& current, Field& mixed, Field& next, Eigen::Index first,
             Eigen::Index width) {
  mixed.middleCols(first, width).noalias() = coin * current.middleCols(first, width);
  next.row(0).segment(first - 1, width) = mixed.row(0).segment(first, width);
  next.row(1).segment(first, width) = mixed.row(1).segment(first, width);
  next.row(2).segment(first + 1, width) = mixed.row(2).segment(first, width);
}

}  // namespace detail

template <typename Real>
WalkState<Real> step(const WalkState<Real>& state, const CoinMatrix<Real>& coin) {
  using Field = typename WalkState<Real>::Field;
  const int t = state.steps();
  const Eigen::Index width = 2 * t + 1;
  Field current = Field::Zero(3, width + 2);
  current.middleCols(1, width) = state.amplitudes();
  Field mixed(3, width + 2);
  Field next = Field::Zero(3, width + 2);
  detail::advance<Real>(coin, current, mixed, next, 1, width);
  return WalkState<Real>(t + 1, std::move(next));
}

/// Applies `step` t times. Works in two preallocated buffers of the final
/// width so the cost is O(t) per step without reallocation.
template <typename Real>
WalkState<Real> evolve(const WalkState<Real>& initial, const CoinMatrix<Real>& coin, int t,
                       int max_steps = kDefaultStepBudget) {
  using Field = typename WalkState<Real>::Field;
  if (t < 0) throw InvalidArgument("evolve: negative step count");
  if (t > max_steps) {
    std::ostringstream msg;
    msg << "StepBudgetExceeded: " << t << " steps requested, budget is " << max_steps;
    throw StepBudgetExceeded(msg.str());
  }
  if (t == 0) return initial;

  const int t0 = initial.steps();
  const int total = t0 + t;
  const Eigen::Index full = 2 * total + 1;
  Field current = Field::Zero(3, full);
  Field next = Field::Zero(3, full);
  Field mixed(3, full);
  current.middleCols(total - t0, 2 * t0 + 1) = initial.amplitudes();

  for (int s = t0; s < total; ++s) {
    const Eigen::Index first = total - s;
    const Eigen::Index width = 2 * s + 1;
    next.middleCols(first - 1, width + 2).setZero();
    detail::advance<Real>(coin, current, mixed, next, first, width);
    current.swap(next);
  }
  return WalkState<Real>(total, std::move(current));
}

template <typename Real>
PositionDistribution<Real> distribution(const WalkState<Real>& state) {
  typename PositionDistribution<Real>::Values p = state.amplitudes().colwise().squaredNorm().transpose().array();
  return PositionDistribution<Real>(state.steps(), std::move(p));
}

/// Finite-time rescaled moment sum_m (m/t)^n p(m, t).
template <typename Real>
Real empirical_moment(const PositionDistribution<Real>& dist, int n) {
  if (n < 1) throw InvalidArgument("empirical_moment: order must be >= 1");
  const int t = dist.steps();
  if (t == 0) throw ZeroSteps("ZeroSteps: rescaled moments are undefined at t = 0");
  Real sum = 0;
  for (int m = -t; m <= t; ++m) {
    sum += std::pow(Real(m) / Real(t), n) * dist.at(m);
  }
  return sum;
}

}  // namespace triwalk
