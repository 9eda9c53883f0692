#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "triwalk/errors.hpp"

namespace triwalk {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using Vector3c = Eigen::Matrix<std::complex<Real>, 3, 1>;
template <typename Real>
using Matrix3c = Eigen::Matrix<std::complex<Real>, 3, 3>;
template <typename Real>
using CoinMatrix = Matrix3c<Real>;

enum class CoinFamily { Rho, Phi };

/// Coordinate system of a coin state: {L, S, R} or the coin's own eigenvectors.
enum class Basis { Standard, Eigen };

inline const char* to_string(CoinFamily family) {
  return family == CoinFamily::Rho ? "rho" : "phi";
}

inline const char* to_string(Basis basis) {
  return basis == Basis::Standard ? "standard" : "eigen";
}

/// Family tag plus parameter. Construction enforces the open parameter range,
/// so every CoinSpec in circulation describes a non-trivial walk.
template <typename Real = double>
class CoinSpec {
 public:
  CoinSpec(CoinFamily family, Real parameter) : family_(family), parameter_(parameter) {
    const bool ok = family == CoinFamily::Rho
                        ? (parameter > Real(0) && parameter < Real(1))
                        : (parameter >= Real(0) && parameter < std::numbers::pi_v<Real> / 2);
    if (!ok) {
      std::ostringstream msg;
      msg << "ParameterOutOfRange: " << to_string(family) << " = " << parameter
          << (family == CoinFamily::Rho ? " is outside (0, 1)" : " is outside [0, pi/2)");
      throw ParameterOutOfRange(msg.str());
    }
  }

  static CoinSpec rho(Real value) { return CoinSpec(CoinFamily::Rho, value); }
  static CoinSpec phi(Real value) { return CoinSpec(CoinFamily::Phi, value); }

  CoinFamily family() const { return family_; }
  Real parameter() const { return parameter_; }

 private:
  CoinFamily family_;
  Real parameter_;
};

/// Three coin amplitudes tagged with the basis they are expressed in.
/// Normalization is checked by the operations that need it, not here, so that
/// callers can build a state and then decide how to repair a small defect.
template <typename Real = double>
class CoinState {
 public:
  CoinState(const Vector3c<Real>& amplitudes, Basis basis) : amplitudes_(amplitudes), basis_(basis) {}

  static CoinState standard(Complex<Real> l, Complex<Real> s, Complex<Real> r) {
    return CoinState(Vector3c<Real>(l, s, r), Basis::Standard);
  }
  static CoinState eigen(Complex<Real> g_plus, Complex<Real> g1, Complex<Real> g2) {
    return CoinState(Vector3c<Real>(g_plus, g1, g2), Basis::Eigen);
  }

  const Vector3c<Real>& amplitudes() const { return amplitudes_; }
  Basis basis() const { return basis_; }
  Complex<Real> operator[](int i) const { return amplitudes_(i); }

  Real squared_norm() const { return amplitudes_.squaredNorm(); }
  bool is_normalized(Real tol = Real(1e-12)) const { return std::abs(squared_norm() - Real(1)) <= tol; }
  CoinState normalized() const { return CoinState(amplitudes_ / amplitudes_.norm(), basis_); }

 private:
  Vector3c<Real> amplitudes_;
  Basis basis_;
};

template <typename Real>
void require_normalized(const CoinState<Real>& state, Real tol = Real(1e-12)) {
  if (!state.is_normalized(tol)) {
    std::ostringstream msg;
    msg << "NormalizationError: coin state has squared norm " << state.squared_norm();
    throw NormalizationError(msg.str());
  }
}

/// Eigenvectors of a coin (standard-basis components) and their eigenvalues.
/// Order: +1 eigenvector first, then the two "minus" vectors.
template <typename Real = double>
struct EigenBasis {
  Matrix3c<Real> vectors;  // columns: plus, minus1, minus2
  Vector3c<Real> eigenvalues;

  CoinState<Real> plus() const { return CoinState<Real>(vectors.col(0), Basis::Standard); }
  CoinState<Real> minus1() const { return CoinState<Real>(vectors.col(1), Basis::Standard); }
  CoinState<Real> minus2() const { return CoinState<Real>(vectors.col(2), Basis::Standard); }
};

template <typename Real>
CoinMatrix<Real> build_coin(const CoinSpec<Real>& spec) {
  using C = Complex<Real>;
  CoinMatrix<Real> coin;
  const Real p = spec.parameter();
  if (spec.family() == CoinFamily::Rho) {
    const Real rho2 = p * p;
    const Real off = p * std::sqrt(Real(2) - Real(2) * rho2);
    coin << -rho2, off, Real(1) - rho2,
            off, Real(2) * rho2 - Real(1), off,
            Real(1) - rho2, off, -rho2;
  } else {
    const C e = std::polar(Real(1), Real(2) * p);
    const C a = (-Real(1) - e) / Real(6);
    const C b = Real(2) * (Real(1) + e) / Real(6);
    const C c = (Real(5) - e) / Real(6);
    const C d = Real(2) * (Real(1) - Real(2) * e) / Real(6);
    coin << a, b, c,
            b, d, b,
            c, b, a;
  }
  return coin;
}

template <typename Real>
CoinMatrix<Real> build_coin(CoinFamily family, Real parameter) {
  return build_coin(CoinSpec<Real>(family, parameter));
}

namespace detail {

// The phi-family eigenvectors carry no phi dependence; built once per scalar type.
template <typename Real>
const Matrix3c<Real>& phi_family_vectors() {
  static const Matrix3c<Real> vectors = [] {
    const Real s2 = std::sqrt(Real(2));
    const Real s3 = std::sqrt(Real(3));
    const Real s6 = std::sqrt(Real(6));
    Matrix3c<Real> v;
    v << Real(1) / s3, Real(1) / s6, Real(1) / s2,
         Real(1) / s3, Real(-2) / s6, Real(0),
         Real(1) / s3, Real(1) / s6, Real(-1) / s2;
    return v;
  }();
  return vectors;
}

}  // namespace detail

template <typename Real>
EigenBasis<Real> eigenbasis(const CoinSpec<Real>& spec) {
  EigenBasis<Real> basis;
  const Real p = spec.parameter();
  if (spec.family() == CoinFamily::Rho) {
    const Real s2 = std::sqrt(Real(2));
    const Real c = std::sqrt(Real(1) - p * p);
    basis.vectors << c / s2, p / s2, Real(1) / s2,
                     p, -c, Real(0),
                     c / s2, p / s2, Real(-1) / s2;
    basis.eigenvalues << Real(1), Real(-1), Real(-1);
  } else {
    basis.vectors = detail::phi_family_vectors<Real>();
    basis.eigenvalues << Real(1), -std::polar(Real(1), Real(2) * p), Real(-1);
  }
  return basis;
}

template <typename Real>
CoinState<Real> to_standard(const CoinState<Real>& state, const CoinSpec<Real>& spec) {
  if (state.basis() != Basis::Eigen) throw BasisMismatch("BasisMismatch: state is already in the standard basis");
  return CoinState<Real>(eigenbasis(spec).vectors * state.amplitudes(), Basis::Standard);
}

template <typename Real>
CoinState<Real> to_eigen(const CoinState<Real>& state, const CoinSpec<Real>& spec) {
  if (state.basis() != Basis::Standard) throw BasisMismatch("BasisMismatch: state is already in the eigen basis");
  return CoinState<Real>(eigenbasis(spec).vectors.adjoint() * state.amplitudes(), Basis::Eigen);
}

/// Standard-basis amplitudes regardless of the tag on `state`.
template <typename Real>
Vector3c<Real> standard_amplitudes(const CoinState<Real>& state, const CoinSpec<Real>& spec) {
  return state.basis() == Basis::Standard ? state.amplitudes() : to_standard(state, spec).amplitudes();
}

/// Eigen-basis amplitudes (g+, g1, g2) regardless of the tag on `state`.
template <typename Real>
Vector3c<Real> eigen_amplitudes(const CoinState<Real>& state, const CoinSpec<Real>& spec) {
  return state.basis() == Basis::Eigen ? state.amplitudes() : to_eigen(state, spec).amplitudes();
}

}  // namespace triwalk
