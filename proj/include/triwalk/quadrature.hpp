#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <type_traits>
#include <vector>

#include "triwalk/errors.hpp"

namespace triwalk {

/// Which endpoints carry a 1/sqrt(distance) singularity.
enum class EndpointSingularity { None, InverseSqrtBoth, InverseSqrtLeft, InverseSqrtRight };

template <typename Real = double>
struct QuadratureSpec {
  Real rel_tol = Real(1e-9);
  Real abs_tol = Real(1e-12);
  int max_subdivisions = 4096;
  EndpointSingularity endpoint_singularity = EndpointSingularity::None;

  void validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0)) throw InvalidArgument("QuadratureSpec: tolerances must be positive");
    if (max_subdivisions < 8) throw InvalidArgument("QuadratureSpec: max_subdivisions must be >= 8");
  }
};

template <typename Real = double>
struct QuadratureResult {
  Real value;
  Real error_estimate;
  int subdivisions;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// Abscissae in decreasing order; the Gauss nodes are the odd-indexed ones.
template <typename Real>
struct GaussKronrod15 {
  static constexpr std::array<Real, 8> nodes = {
      Real(0.991455371120812639206854697526329), Real(0.949107912342758524526189684047851),
      Real(0.864864423359769072789712788640926), Real(0.741531185599394439863864773280788),
      Real(0.586087235467691130294144845693013), Real(0.405845151377397166906606412076961),
      Real(0.207784955007898467600689403773245), Real(0)};
  static constexpr std::array<Real, 8> kronrod_weights = {
      Real(0.022935322010529224963732008058970), Real(0.063092092629978553290700663189204),
      Real(0.104790010322250183839876322541518), Real(0.140653259715525918745189590510238),
      Real(0.169004726639267902826583426598550), Real(0.190350578064785409913256402421014),
      Real(0.204432940075298892414161999234649), Real(0.209482141084727828012999174891714)};
  static constexpr std::array<Real, 4> gauss_weights = {
      Real(0.129484966168869693270611432679082), Real(0.279705391489276667901467771423780),
      Real(0.381830050505118944950369775488975), Real(0.417959183673469387755102040816327)};
};

template <typename Real>
struct Panel {
  Real a;
  Real b;
  Real value;
  Real error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename Real, typename F>
Panel<Real> gauss_kronrod_panel(const F& f, Real a, Real b) {
  using Rule = GaussKronrod15<Real>;
  const Real center = (a + b) / 2;
  const Real half = (b - a) / 2;
  const Real f0 = f(center);
  Real kronrod = Rule::kronrod_weights[7] * f0;
  Real gauss = Rule::gauss_weights[3] * f0;
  for (int i = 0; i < 7; ++i) {
    const Real dx = half * Rule::nodes[i];
    const Real pair = f(center - dx) + f(center + dx);
    kronrod += Rule::kronrod_weights[i] * pair;
    if (i % 2 == 1) gauss += Rule::gauss_weights[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

// Globally adaptive bisection: always split the panel with the largest
// embedded-pair error until the summed error meets the tolerance.
template <typename Real, typename F>
QuadratureResult<Real> adaptive_gauss_kronrod(const F& f, Real a, Real b, const QuadratureSpec<Real>& spec) {
  std::priority_queue<Panel<Real>> panels;
  Panel<Real> whole = gauss_kronrod_panel<Real>(f, a, b);
  Real value = whole.value;
  Real error = whole.error;
  panels.push(whole);
  int subdivisions = 1;
  const Real min_width = (b - a) * std::numeric_limits<Real>::epsilon() * 64;
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
    if (subdivisions >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "QuadratureFailure: subdivision budget " << spec.max_subdivisions << " exhausted on [" << a << ", " << b
          << "], error estimate " << error << ", value " << value;
      throw QuadratureFailure(msg.str());
    }
    Panel<Real> worst = panels.top();
    if (worst.b - worst.a < min_width) {
      std::ostringstream msg;
      msg << "QuadratureFailure: panel width underflow near " << worst.a << ", error estimate " << error;
      throw QuadratureFailure(msg.str());
    }
    panels.pop();
    const Real mid = (worst.a + worst.b) / 2;
    Panel<Real> left = gauss_kronrod_panel<Real>(f, worst.a, mid);
    Panel<Real> right = gauss_kronrod_panel<Real>(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift accumulated by incremental updates.
  value = 0;
  error = 0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  return {value, error, subdivisions};
}

template <typename Real>
Real clamp_open(Real x, Real a, Real b) {
  if (x <= a) return std::nextafter(a, b);
  if (x >= b) return std::nextafter(b, a);
  return x;
}

// Calls f(x, x - a, b - x) when f accepts the endpoint gaps, else f(x).
// The gaps come from the substitution itself and carry full relative
// precision even where x is within a few ulps of an endpoint.
template <typename Real, typename F>
Real call_with_gaps(F& f, Real x, Real gap_left, Real gap_right) {
  if constexpr (std::is_invocable_v<F&, Real, Real, Real>) {
    return static_cast<Real>(f(x, gap_left, gap_right));
  } else {
    return static_cast<Real>(f(x));
  }
}

}  // namespace detail

/// Integral of f over (a, b). Endpoint singularities of inverse-square-root
/// type are removed by a change of variables before adaptive integration:
/// x = mid + half*sin(theta) for both ends, x = a + u^2 or x = b - u^2 for one.
/// f is only ever evaluated strictly inside (a, b). It may take either x or
/// (x, x - a, b - x); the second form lets integrands factor sqrt(b - x)
/// without cancellation.
template <typename Real, typename F>
QuadratureResult<Real> integrate(F&& f, Real a, Real b, const QuadratureSpec<Real>& spec = {}) {
  spec.validate();
  if (!(a < b)) throw InvalidArgument("integrate: require a < b");
  const Real width = b - a;
  switch (spec.endpoint_singularity) {
    case EndpointSingularity::None: {
      auto g = [&](Real x) {
        x = detail::clamp_open(x, a, b);
        return detail::call_with_gaps(f, x, x - a, b - x);
      };
      return detail::adaptive_gauss_kronrod<Real>(g, a, b, spec);
    }
    case EndpointSingularity::InverseSqrtBoth: {
      // x = mid + half*sin(theta), written around the nearer end: with
      // d = pi/2 - |theta|, the gap to that end is 2*half*sin^2(d/2) and
      // dx/dtheta = half*sin(d).
      const Real half = width / 2;
      const Real quarter_turn = std::numbers::pi_v<Real> / 2;
      auto g = [&](Real theta) {
        const Real d = quarter_turn - std::abs(theta);
        const Real s = std::sin(d / 2);
        const Real near = 2 * half * s * s;
        const Real far = width - near;
        const Real jacobian = half * std::sin(d);
        if (theta >= 0) {
          const Real x = detail::clamp_open(b - near, a, b);
          return detail::call_with_gaps(f, x, far, near) * jacobian;
        }
        const Real x = detail::clamp_open(a + near, a, b);
        return detail::call_with_gaps(f, x, near, far) * jacobian;
      };
      return detail::adaptive_gauss_kronrod<Real>(g, -quarter_turn, quarter_turn, spec);
    }
    case EndpointSingularity::InverseSqrtLeft: {
      auto g = [&](Real u) {
        const Real x = detail::clamp_open(a + u * u, a, b);
        return detail::call_with_gaps(f, x, u * u, width - u * u) * 2 * u;
      };
      return detail::adaptive_gauss_kronrod<Real>(g, Real(0), std::sqrt(width), spec);
    }
    case EndpointSingularity::InverseSqrtRight: {
      auto g = [&](Real u) {
        const Real x = detail::clamp_open(b - u * u, a, b);
        return detail::call_with_gaps(f, x, width - u * u, u * u) * 2 * u;
      };
      return detail::adaptive_gauss_kronrod<Real>(g, Real(0), std::sqrt(width), spec);
    }
  }
  throw InvalidArgument("integrate: unknown endpoint singularity");
}

template <typename Real = double>
struct PeriodicSpec {
  int initial_nodes = 1 << 12;
  int max_nodes = 1 << 20;
  Real abs_tol = Real(1e-13);
};

template <typename Value, typename Real = double>
struct PeriodicResult {
  Value value;
  Real error_estimate;
  int nodes;
};

namespace detail {

template <typename Real>
  requires std::is_arithmetic_v<Real>
Real max_abs_diff(Real a, Real b) {
  return std::abs(a - b);
}

template <typename Real>
Real max_abs_diff(const std::complex<Real>& a, const std::complex<Real>& b) {
  return std::abs(a - b);
}

template <typename Derived>
typename Derived::RealScalar max_abs_diff(const Eigen::DenseBase<Derived>& a, const Eigen::DenseBase<Derived>& b) {
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Mean of f over one period, (1/2pi) * integral_0^{2pi} f(k) dk, by the
/// trapezoid rule on the offset grid k_j = (j + 1/2) * 2pi / N. N starts at
/// spec.initial_nodes and doubles until two successive means agree to
/// spec.abs_tol. f may return a real, a complex or an Eigen dense object.
/// The offset grid never visits k = 0.
template <typename Real = double, typename F>
auto periodic_mean(F&& f, const PeriodicSpec<Real>& spec = {}) {
  using Value = std::decay_t<decltype(f(Real(0)))>;
  // Compensated summation keeps the rounding floor near one ulp of the mean,
  // so the doubling test is not defeated by accumulation noise.
  auto trapezoid = [&](int n) {
    const Real h = 2 * std::numbers::pi_v<Real> / Real(n);
    Value sum = f(h / 2);
    Value carry = sum - sum;
    for (int j = 1; j < n; ++j) {
      const Value y = Value(f((Real(j) + Real(0.5)) * h) - carry);
      const Value next = Value(sum + y);
      carry = Value((next - sum) - y);
      sum = next;
    }
    return Value(sum / Real(n));
  };
  if (spec.initial_nodes < 2 || spec.max_nodes < spec.initial_nodes) {
    throw InvalidArgument("periodic_mean: invalid node counts");
  }
  int n = spec.initial_nodes;
  Value previous = trapezoid(n);
  while (2 * n <= spec.max_nodes) {
    n *= 2;
    Value current = trapezoid(n);
    const Real diff = static_cast<Real>(detail::max_abs_diff(current, previous));
    if (diff <= spec.abs_tol) return PeriodicResult<Value, Real>{current, diff, n};
    previous = current;
  }
  std::ostringstream msg;
  msg << "QuadratureFailure: periodic trapezoid did not converge with " << n << " nodes";
  throw QuadratureFailure(msg.str());
}

}  // namespace triwalk
