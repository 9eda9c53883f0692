#pragma once

#include <cmath>
#include <numbers>
#include <sstream>

#include "triwalk/coin.hpp"
#include "triwalk/errors.hpp"
#include "triwalk/quadrature.hpp"

namespace triwalk {

/// Limit-distribution context for the rho family: coin parameter plus the
/// initial coin state in the eigenvector basis (g+, g1, g2).
template <typename Real = double>
class RhoAsymptotics {
 public:
  RhoAsymptotics(Real rho, const Vector3c<Real>& g) : spec_(CoinSpec<Real>::rho(rho)), g_(g) {
    require_normalized(CoinState<Real>(g_, Basis::Eigen));
    const Real root = std::sqrt(Real(1) - rho * rho);
    nu_ = -(Real(2) - rho * rho - Real(2) * root) / (rho * rho);
  }

  RhoAsymptotics(const CoinSpec<Real>& spec, const CoinState<Real>& state)
      : RhoAsymptotics(checked_rho(spec), eigen_amplitudes(state, spec)) {}

  Real rho() const { return spec_.parameter(); }
  const CoinSpec<Real>& spec() const { return spec_; }
  const Vector3c<Real>& g() const { return g_; }
  Complex<Real> g_plus() const { return g_(0); }
  Complex<Real> g1() const { return g_(1); }
  Complex<Real> g2() const { return g_(2); }
  /// Base of the exponential localization profile; lies in (-1, 0).
  Real nu() const { return nu_; }

  /// g1 conj(g2) + conj(g1) g2, the coherence factor driving odd moments.
  Real coherence() const { return Real(2) * std::real(g_(1) * std::conj(g_(2))); }

 private:
  static Real checked_rho(const CoinSpec<Real>& spec) {
    if (spec.family() != CoinFamily::Rho) throw InvalidArgument("RhoAsymptotics: spec is not a rho-family coin");
    return spec.parameter();
  }

  CoinSpec<Real> spec_;
  Vector3c<Real> g_;
  Real nu_;
};

template <typename Real>
Real rho_delta1(Real rho) {
  const Real root = std::sqrt(Real(1) - rho * rho);
  return (Real(1) + rho * rho - root) / (Real(2) + Real(2) * root);
}

template <typename Real>
Real rho_delta2(Real rho) {
  const Real root = std::sqrt(Real(1) - rho * rho);
  return (Real(2) - rho * rho - Real(2) * root) / (rho * rho);
}

namespace detail {

// sqrt(1 - rho^2) / (pi (1 - v^2) sqrt(rho^2 - v^2)), the common prefactor,
// with rho^2 - v^2 supplied as the product of the gaps to -rho and +rho.
template <typename Real>
Real rho_weight(Real rho, Real v, Real gap_left, Real gap_right) {
  return std::sqrt(Real(1) - rho * rho) /
         (std::numbers::pi_v<Real> * (Real(1) - v * v) * std::sqrt(gap_left * gap_right));
}

template <typename Real>
Real rho_weight(Real rho, Real v) {
  return rho_weight(rho, v, rho + v, rho - v);
}

template <typename Real>
void require_inside(Real v, Real edge) {
  if (!(std::abs(v) < edge)) {
    std::ostringstream msg;
    msg << "OutsideSupport: v = " << v << " is not inside (" << -edge << ", " << edge << ")";
    throw OutsideSupport(msg.str());
  }
}

template <typename Real>
QuadratureSpec<Real> singular_spec(Real rel_tol) {
  QuadratureSpec<Real> spec;
  spec.rel_tol = rel_tol;
  spec.abs_tol = Real(1e-15);
  spec.endpoint_singularity = EndpointSingularity::InverseSqrtBoth;
  return spec;
}

}  // namespace detail

namespace detail {

template <typename Real>
Real rho_density(const RhoAsymptotics<Real>& ctx, Real v, Real gap_left, Real gap_right) {
  const Real rho = ctx.rho();
  const Real p1 = std::norm(ctx.g1());
  const Real p2 = std::norm(ctx.g2());
  const Real x = v / rho;
  const Real bracket = (Real(1) - p2) - ctx.coherence() * x + (p1 + Real(2) * p2 - Real(1)) * x * x;
  return rho_weight(rho, v, gap_left, gap_right) * bracket;
}

}  // namespace detail

/// Group-velocity density w(v) on the open interval (-rho, rho).
template <typename Real>
Real density(const RhoAsymptotics<Real>& ctx, Real v) {
  detail::require_inside(v, ctx.rho());
  return detail::rho_density(ctx, v, ctx.rho() + v, ctx.rho() - v);
}

/// Integral of w over (-rho, rho), closed form.
template <typename Real>
Real continuous_weight(const RhoAsymptotics<Real>& ctx) {
  const Real rho = ctx.rho();
  const Real p1 = std::norm(ctx.g1());
  const Real p2 = std::norm(ctx.g2());
  const Real slope = (std::sqrt(Real(1) - rho * rho) - Real(1)) / (rho * rho);
  return Real(1) - p2 - slope * (p1 + Real(2) * p2 - Real(1));
}

/// Integral of w over (-rho, rho) by singular-endpoint quadrature.
template <typename Real>
QuadratureResult<Real> continuous_weight_quadrature(const RhoAsymptotics<Real>& ctx, Real rel_tol = Real(1e-11)) {
  const Real rho = ctx.rho();
  return integrate([&](Real v, Real gl, Real gr) { return detail::rho_density(ctx, v, gl, gr); }, -rho, rho,
                   detail::singular_spec(rel_tol));
}

/// Trapped probability p_inf(m).
template <typename Real>
Real localization(const RhoAsymptotics<Real>& ctx, int m) {
  const Real rho = ctx.rho();
  const Real rho2 = rho * rho;
  if (m == 0) {
    return std::abs(ctx.nu()) / rho2 * (std::norm(ctx.g_plus()) + (Real(1) - rho2) * std::norm(ctx.g2()));
  }
  const Real scale = (Real(2) - Real(2) * rho2) / (rho2 * rho2) * std::pow(ctx.nu(), 2 * std::abs(m));
  return m > 0 ? scale * std::norm(ctx.g_plus() + ctx.g2()) : scale * std::norm(ctx.g_plus() - ctx.g2());
}

template <typename Real>
Real localization_total(const RhoAsymptotics<Real>& ctx) {
  const Real rho = ctx.rho();
  const Real p2 = std::norm(ctx.g2());
  const Real slope = (std::sqrt(Real(1) - rho * rho) - Real(1)) / (rho * rho);
  return p2 + slope * (p2 - std::norm(ctx.g_plus()));
}

template <typename Real>
Real second_moment(const RhoAsymptotics<Real>& ctx) {
  const Real rho = ctx.rho();
  return (std::norm(ctx.g1()) + Real(1)) * rho_delta1(rho) + (std::norm(ctx.g2()) - Real(1)) * rho_delta2(rho);
}

/// O_n(rho) = -(sqrt(1-rho^2)/rho) * integral v^(2n+2) / (pi (1-v^2) sqrt(rho^2-v^2)).
template <typename Real>
Real odd_moment_coefficient(Real rho, int n, Real rel_tol = Real(1e-12)) {
  if (n < 0) throw InvalidArgument("odd_moment_coefficient: n must be >= 0");
  static_cast<void>(CoinSpec<Real>::rho(rho));
  auto integrand = [&](Real v, Real gl, Real gr) { return std::pow(v, 2 * n + 2) * detail::rho_weight(rho, v, gl, gr); };
  // rho_weight already carries sqrt(1 - rho^2); only the 1/rho and sign remain.
  return -integrate(integrand, -rho, rho, detail::singular_spec(rel_tol)).value / rho;
}

/// <v^(2n+1)> = O_n(rho) (g1 conj(g2) + conj(g1) g2). Exactly zero when the
/// coherence factor vanishes.
template <typename Real>
Real odd_moment(const RhoAsymptotics<Real>& ctx, int n) {
  if (n < 0) throw InvalidArgument("odd_moment: n must be >= 0");
  const Real coherence = ctx.coherence();
  if (coherence == Real(0)) return Real(0);
  return odd_moment_coefficient(ctx.rho(), n) * coherence;
}

/// Even moment <v^(2n)> from the even part of the density, which depends on
/// |g1|^2 and |g2|^2 only. n = 1 uses the closed form.
template <typename Real>
Real even_moment(const RhoAsymptotics<Real>& ctx, int n, Real rel_tol = Real(1e-12)) {
  if (n < 0) throw InvalidArgument("even_moment: n must be >= 0");
  if (n == 0) return continuous_weight(ctx);
  if (n == 1) return second_moment(ctx);
  const Real rho = ctx.rho();
  const Real a = Real(1) - std::norm(ctx.g2());
  const Real b = (std::norm(ctx.g1()) + Real(2) * std::norm(ctx.g2()) - Real(1)) / (rho * rho);
  auto integrand = [&](Real v, Real gl, Real gr) {
    const Real v2 = v * v;
    return std::pow(v2, n) * (a + b * v2) * detail::rho_weight(rho, v, gl, gr);
  };
  return integrate(integrand, -rho, rho, detail::singular_spec(rel_tol)).value;
}

/// <v^n> for any n >= 1.
template <typename Real>
Real moment(const RhoAsymptotics<Real>& ctx, int n) {
  if (n < 1) throw InvalidArgument("moment: order must be >= 1");
  return n % 2 == 0 ? even_moment(ctx, n / 2) : odd_moment(ctx, (n - 1) / 2);
}

}  // namespace triwalk
