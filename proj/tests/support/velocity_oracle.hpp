#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "triwalk/spectral.hpp"

namespace triwalk::testing {

/// d^2 omega / dk^2 from the closed-form group velocity.
inline double group_acceleration(double k, double phi) {
  const double c = std::cos(phi);
  const double q = (2 + std::cos(k)) * c;
  const double d = 9 - q * q;
  return c * std::cos(k) / std::sqrt(d) - c * c * q * std::sin(k) * std::sin(k) / std::pow(d, 1.5);
}

/// Roots of omega'(k) = v on (0, pi) for v > 0, bracketed on a grid and
/// refined by bisection.
inline std::vector<double> velocity_roots(double v, double phi, int grid = 4000) {
  std::vector<double> roots;
  const double pi = std::numbers::pi;
  auto f = [&](double k) { return group_velocity(k, phi) - v; };
  double lo = 1e-9;
  double f_lo = f(lo);
  for (int i = 1; i <= grid; ++i) {
    const double hi = (i == grid) ? pi - 1e-9 : pi * i / grid;
    const double f_hi = f(hi);
    if ((f_lo < 0) != (f_hi < 0)) {
      double a = lo, b = hi, fa = f_lo;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    f_lo = f_hi;
  }
  return roots;
}

/// Limit density by pushing |f2|^2 dk/2pi forward under k -> omega'(k) and
/// |f3|^2 dk/2pi under k -> -omega'(k). Independent of the closed-form
/// density; only the Bloch eigenvectors are shared.
inline double pushforward_density(double v, double phi, const CoinState<double>& psi) {
  const double speed = std::abs(v);
  double w = 0;
  for (double r : velocity_roots(speed, phi)) {
    const double jac = 2 * std::numbers::pi * std::abs(group_acceleration(r, phi));
    const auto f_pos = overlaps(r, phi, psi);
    const auto f_neg = overlaps(-r, phi, psi);
    // v > 0: band 2 at k = r, band 3 at k = -r; mirrored for v < 0.
    w += (v > 0 ? std::norm(f_pos(1)) + std::norm(f_neg(2)) : std::norm(f_neg(1)) + std::norm(f_pos(2))) / jac;
  }
  return w;
}

}  // namespace triwalk::testing
