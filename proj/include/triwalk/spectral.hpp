#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "triwalk/coin.hpp"
#include "triwalk/errors.hpp"
#include "triwalk/quadrature.hpp"
#include "triwalk/walk.hpp"

namespace triwalk {

/// Largest step count accepted by the Fourier-integral oracle.
inline constexpr int kOracleMaxSteps = 50;

/// Below this squared norm a time-dependent Bloch eigenvector is rebuilt as
/// the orthogonal complement of the other two.
inline constexpr double kCompletionThreshold = 1e-8;
/// Below this squared norm for both time-dependent eigenvectors the
/// eigensystem is reported as degenerate.
inline constexpr double kDegenerateThreshold = 1e-14;

namespace detail {

template <typename Real>
void require_phi(Real phi) {
  static_cast<void>(CoinSpec<Real>::phi(phi));
}

// 3 - (2 + cos k) cos phi through half-angle sines, accurate near k = 0, phi = 0.
template <typename Real>
Real three_minus_q(Real k, Real phi) {
  const Real sp = std::sin(phi / 2);
  const Real sk = std::sin(k / 2);
  return Real(6) * sp * sp + Real(2) * std::cos(phi) * sk * sk;
}

// 9 - ((2 + cos k) cos phi)^2 as (3 - q)(3 + q).
template <typename Real>
Real velocity_radicand(Real k, Real phi) {
  const Real q = (Real(2) + std::cos(k)) * std::cos(phi);
  return three_minus_q(k, phi) * (Real(3) + q);
}

}  // namespace detail

/// omega(k) = -arccos(-(2 + cos k) cos(phi) / 3), in [-pi, 0]. Evaluated as
/// -pi + 2 asin(sqrt((3 - q) / 6)), which stays accurate where the two moving
/// eigenvalues meet at k = 0, phi = 0.
template <typename Real>
Real dispersion(Real k, Real phi) {
  detail::require_phi(phi);
  return -std::numbers::pi_v<Real> + Real(2) * std::asin(std::sqrt(detail::three_minus_q(k, phi) / Real(6)));
}

/// d omega / dk. At the single point phi = 0, k = 0 the two one-sided limits
/// are +-1/sqrt(3); the symmetric value 0 is returned there.
template <typename Real>
Real group_velocity(Real k, Real phi) {
  detail::require_phi(phi);
  const Real denom = std::sqrt(detail::velocity_radicand(k, phi));
  if (denom == Real(0)) return Real(0);
  return std::cos(phi) * std::sin(k) / denom;
}

/// Fourier-space one-step operator Diag(e^{-ik}, 1, e^{ik}) * C(phi).
template <typename Real>
Matrix3c<Real> evolution_operator(Real k, Real phi) {
  Vector3c<Real> shift(std::polar(Real(1), -k), Real(1), std::polar(Real(1), k));
  return shift.asDiagonal() * build_coin(CoinSpec<Real>::phi(phi));
}

/// Squared norm of the unnormalized time-dependent eigenvector for
/// branch = +1 (eigenvalue e^{i(phi+omega)}) or -1 (e^{i(phi-omega)}).
template <typename Real>
Real bloch_normalization(Real k, Real phi, int branch) {
  detail::require_phi(phi);
  const Real c = std::cos(phi);
  const Real s = std::sin(phi);
  const Real ck = std::cos(k);
  const Real root = std::sqrt(detail::velocity_radicand(k, phi));
  const Real sg = branch > 0 ? Real(1) : Real(-1);
  return Real(4) / Real(3) * c * c *
         (Real(9) - Real(4) * c * c + sg * Real(2) * s * root - ck * ((Real(4) + ck) * c * c - sg * s * root));
}

template <typename Real = double>
struct BlochSystem {
  Real k;
  Real omega;
  Vector3c<Real> eigenvalues;   // 1, e^{i(phi+omega)}, e^{i(phi-omega)}
  Matrix3c<Real> eigenvectors;  // orthonormal columns v1, v2, v3
};

namespace detail {

template <typename Real>
Vector3c<Real> bloch_vector_unnormalized(Real k, Real phi, Real omega, int branch) {
  using C = Complex<Real>;
  const Real c = std::cos(phi);
  const Real sg = branch > 0 ? Real(1) : Real(-1);
  const Real rot = phi + sg * omega;
  const C e_minus_k = std::polar(Real(1), -k);
  const C e_plus_k = std::polar(Real(1), k);
  const C e_rot_conj = std::polar(Real(1), -rot);
  Vector3c<Real> u;
  u(0) = (e_minus_k + e_rot_conj) * c;
  u(1) = C(std::cos(omega)) + std::polar(Real(1), sg * omega) - std::polar(Real(1), -(Real(2) * phi + sg * omega)) +
         C(std::cos(k) * c);
  u(2) = (e_plus_k + e_rot_conj) * c;
  return u;
}

// Hermitian-orthogonal complement of two orthonormal vectors.
template <typename Real>
Vector3c<Real> complement(const Vector3c<Real>& a, const Vector3c<Real>& b) {
  Vector3c<Real> w = a.cross(b).conjugate();
  return w / w.norm();
}

}  // namespace detail

/// Eigenvalues and orthonormal eigenvectors of the Fourier-space evolution
/// operator at quasi-momentum k.
template <typename Real>
BlochSystem<Real> bloch_eigensystem(Real k, Real phi) {
  detail::require_phi(phi);
  BlochSystem<Real> sys;
  sys.k = k;
  sys.omega = dispersion(k, phi);
  sys.eigenvalues << Real(1), std::polar(Real(1), phi + sys.omega), std::polar(Real(1), phi - sys.omega);

  const Real ck = std::cos(k);
  Vector3c<Real> v1(Real(1), (Real(1) + std::polar(Real(1), k)) / Real(2), std::polar(Real(1), k));
  sys.eigenvectors.col(0) = v1 * std::sqrt(Real(2) / (Real(5) + ck));

  const Vector3c<Real> u2 = detail::bloch_vector_unnormalized(k, phi, sys.omega, +1);
  const Vector3c<Real> u3 = detail::bloch_vector_unnormalized(k, phi, sys.omega, -1);
  const Real n2 = u2.squaredNorm();
  const Real n3 = u3.squaredNorm();
  if (n2 < Real(kDegenerateThreshold) && n3 < Real(kDegenerateThreshold)) {
    std::ostringstream msg;
    msg << "DegenerateNormalization: both Bloch eigenvectors vanish at k = " << k << ", phi = " << phi;
    throw DegenerateNormalization(msg.str());
  }
  if (n2 >= n3) {
    sys.eigenvectors.col(1) = u2 / std::sqrt(n2);
    sys.eigenvectors.col(2) = n3 < Real(kCompletionThreshold)
                                  ? detail::complement<Real>(sys.eigenvectors.col(0), sys.eigenvectors.col(1))
                                  : Vector3c<Real>(u3 / std::sqrt(n3));
  } else {
    sys.eigenvectors.col(2) = u3 / std::sqrt(n3);
    sys.eigenvectors.col(1) = n2 < Real(kCompletionThreshold)
                                  ? detail::complement<Real>(sys.eigenvectors.col(2), sys.eigenvectors.col(0))
                                  : Vector3c<Real>(u2 / std::sqrt(n2));
  }
  return sys;
}

namespace detail {

template <typename Real>
Vector3c<Real> oracle_coin(const CoinState<Real>& psi_c, Real phi) {
  require_normalized(psi_c);
  return standard_amplitudes(psi_c, CoinSpec<Real>::phi(phi));
}

}  // namespace detail

/// f_j(k) = (v_j(k), psi_C), the overlaps of the initial coin state with the
/// Bloch eigenvectors.
template <typename Real>
Vector3c<Real> overlaps(Real k, Real phi, const CoinState<Real>& psi_c) {
  const Vector3c<Real> psi = detail::oracle_coin(psi_c, phi);
  return bloch_eigensystem(k, phi).eigenvectors.adjoint() * psi;
}

namespace detail {

// Sum over bands of e^{i arg_j t} f_j v_j at one k. The stationary band is
// included only when `stationary` is set, the moving bands only when `moving` is.
template <typename Real>
Vector3c<Real> propagated_coin(Real k, Real phi, const Vector3c<Real>& psi, int t, bool stationary, bool moving) {
  const BlochSystem<Real> sys = bloch_eigensystem(k, phi);
  const Vector3c<Real> f = sys.eigenvectors.adjoint() * psi;
  Vector3c<Real> out = Vector3c<Real>::Zero();
  if (stationary) out += f(0) * sys.eigenvectors.col(0);
  if (moving) {
    out += std::pow(sys.eigenvalues(1), t) * f(1) * sys.eigenvectors.col(1);
    out += std::pow(sys.eigenvalues(2), t) * f(2) * sys.eigenvectors.col(2);
  }
  return out;
}

template <typename Real>
void require_oracle_steps(int t) {
  if (t < 0) throw InvalidArgument("amplitude_integral: negative step count");
  if (t > kOracleMaxSteps) {
    std::ostringstream msg;
    msg << "OracleRegimeExceeded: t = " << t << " exceeds the oracle budget of " << kOracleMaxSteps;
    throw OracleRegimeExceeded(msg.str());
  }
}

}  // namespace detail

/// psi(m, t) as the Fourier integral over the three Bloch bands.
template <typename Real>
Vector3c<Real> amplitude_integral(int m, int t, Real phi, const CoinState<Real>& psi_c,
                                  const PeriodicSpec<Real>& spec = {}) {
  detail::require_oracle_steps<Real>(t);
  const Vector3c<Real> psi = detail::oracle_coin(psi_c, phi);
  auto integrand = [&](Real k) -> Vector3c<Real> {
    return std::polar(Real(1), -Real(m) * k) * detail::propagated_coin(k, phi, psi, t, true, true);
  };
  return periodic_mean<Real>(integrand, spec).value;
}

/// All amplitudes psi(m, t), m in [-t, t], from one pass over the k grid.
/// Column j is position j - t, matching WalkState.
template <typename Real>
typename WalkState<Real>::Field amplitude_profile(int t, Real phi, const CoinState<Real>& psi_c,
                                                  const PeriodicSpec<Real>& spec = {}) {
  using Field = typename WalkState<Real>::Field;
  detail::require_oracle_steps<Real>(t);
  const Vector3c<Real> psi = detail::oracle_coin(psi_c, phi);
  auto integrand = [&](Real k) -> Field {
    const Vector3c<Real> base = detail::propagated_coin(k, phi, psi, t, true, true);
    Field out(3, 2 * t + 1);
    const Complex<Real> step = std::polar(Real(1), -k);
    Complex<Real> phase = std::polar(Real(1), Real(t) * k);  // e^{-imk} at m = -t
    for (int j = 0; j <= 2 * t; ++j) {
      out.col(j) = phase * base;
      phase *= step;
    }
    return out;
  };
  return periodic_mean<Real>(integrand, spec).value;
}

/// psi_inf(m): the stationary-band contribution, independent of phi.
template <typename Real>
Vector3c<Real> stationary_amplitude(int m, Real phi, const CoinState<Real>& psi_c, const PeriodicSpec<Real>& spec = {}) {
  const Vector3c<Real> psi = detail::oracle_coin(psi_c, phi);
  auto integrand = [&](Real k) -> Vector3c<Real> {
    const Real norm2 = Real(2) / (Real(5) + std::cos(k));
    const Vector3c<Real> v1 =
        std::sqrt(norm2) * Vector3c<Real>(Real(1), (Real(1) + std::polar(Real(1), k)) / Real(2), std::polar(Real(1), k));
    return std::polar(Real(1), -Real(m) * k) * (v1.adjoint() * psi)(0) * v1;
  };
  return periodic_mean<Real>(integrand, spec).value;
}

/// Weak-limit moment lim <(m/t)^n> from the moving bands: band 2 travels at
/// +d omega/dk and band 3 at -d omega/dk.
template <typename Real>
Real limit_moment(int n, Real phi, const CoinState<Real>& psi_c, const PeriodicSpec<Real>& spec = {}) {
  if (n < 1) throw InvalidArgument("limit_moment: order must be >= 1");
  const Vector3c<Real> psi = detail::oracle_coin(psi_c, phi);
  const Real sign = n % 2 == 0 ? Real(1) : Real(-1);
  auto integrand = [&](Real k) -> Real {
    const Vector3c<Real> f = bloch_eigensystem(k, phi).eigenvectors.adjoint() * psi;
    return std::pow(group_velocity(k, phi), n) * (std::norm(f(1)) + sign * std::norm(f(2)));
  };
  return periodic_mean<Real>(integrand, spec).value;
}

/// k0 in (0, pi): the maximizer of the group velocity. Closed form for
/// phi > 0; at phi = 0 the closed form collapses to arccos(1), and a
/// golden-section search on (0, pi) is used instead.
template <typename Real>
Real velocity_split_point(Real phi) {
  detail::require_phi(phi);
  if (phi > Real(0)) {
    const Real c2 = std::cos(phi) * std::cos(phi);
    const Real s = std::sin(phi);
    const Real arg = (Real(9) - Real(5) * c2 - Real(3) * s * std::sqrt(Real(9) - c2)) / (Real(4) * c2);
    if (arg > Real(-1) && arg < Real(1)) return std::acos(arg);
  }
  const Real inv_golden = (std::sqrt(Real(5)) - Real(1)) / Real(2);
  Real lo = 0;
  Real hi = std::numbers::pi_v<Real>;
  Real x1 = hi - inv_golden * (hi - lo);
  Real x2 = lo + inv_golden * (hi - lo);
  Real f1 = group_velocity(x1, phi);
  Real f2 = group_velocity(x2, phi);
  while (hi - lo > Real(1e-12)) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_golden * (hi - lo);
      f2 = group_velocity(x2, phi);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_golden * (hi - lo);
      f1 = group_velocity(x1, phi);
    }
  }
  return (lo + hi) / 2;
}

}  // namespace triwalk
