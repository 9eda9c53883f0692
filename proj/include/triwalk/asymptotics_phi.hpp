#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <tuple>

#include "triwalk/asymptotics_rho.hpp"
#include "triwalk/coin.hpp"
#include "triwalk/errors.hpp"
#include "triwalk/quadrature.hpp"

namespace triwalk {

/// Peak velocity eta(phi) of the phi family; 1/sqrt(3) at phi = 0, tending
/// to zero as phi approaches pi/2.
template <typename Real>
Real peak_velocity(Real phi) {
  static_cast<void>(CoinSpec<Real>::phi(phi));
  const Real c2 = std::cos(phi) * std::cos(phi);
  const Real inner = Real(3) - c2 - std::sin(phi) * std::sqrt(Real(9) - c2);
  return std::sqrt(std::max(inner, Real(0)) / Real(6));
}

/// Auxiliary functions of the phi-family density at one velocity. All of them
/// are even in v.
template <typename Real = double>
struct PhiDensityTerms {
  Real theta;
  Real phi_plus;
  Real phi_minus;
  Real lambda_plus;
  Real lambda_minus;
  Real omega;
  Real xi;
};

inline constexpr double kRadicandClamp = 1e-9;

namespace detail {

template <typename Real>
Real clamped_sqrt(Real radicand, const char* what) {
  if (radicand >= Real(0)) return std::sqrt(radicand);
  if (radicand >= -Real(kRadicandClamp)) return Real(0);
  std::ostringstream msg;
  msg << "NegativeRadicand: " << what << " radicand " << radicand;
  throw NegativeRadicand(msg.str());
}

}  // namespace detail

namespace detail {

// Terms at velocity v with eta^2 - v^2 supplied as `gap`.
template <typename Real>
PhiDensityTerms<Real> phi_terms(Real phi, Real v, Real gap) {
  const Real c = std::cos(phi);
  const Real s = std::sin(phi);
  const Real v2 = v * v;

  PhiDensityTerms<Real> t;
  t.theta = clamped_sqrt(gap * (gap + s * std::sqrt(Real(1) - c * c / Real(9))), "Theta");
  const Real base = Real(9) * (Real(1) - v2) - (Real(5) + Real(3) * v2) * c * c;
  const Real plus2 = base + Real(12) * t.theta * c;
  const Real minus2 = base - Real(12) * t.theta * c;
  // Phi+^2 Phi-^2 in a form free of cancellation; the smaller of the two is
  // recovered from it rather than from its own (cancelling) radicand.
  const Real ss = s * std::sqrt(Real(9) - c * c);
  const Real q = c * c * c * c - Real(2) * c * c + Real(9) + (Real(3) + c * c) * ss +
                 Real(6) * gap * (c * c + ss + Real(3)) + Real(18) * gap * gap;
  const Real product = (Real(9) - c * c) * s * s * q / Real(2);
  const bool plus_larger = plus2 >= minus2;
  const Real larger = clamped_sqrt(plus_larger ? plus2 : minus2, plus_larger ? "Phi+" : "Phi-");
  const Real smaller = larger > Real(0) ? std::sqrt(product) / larger : Real(0);
  t.phi_plus = plus_larger ? larger : smaller;
  t.phi_minus = plus_larger ? smaller : larger;
  t.lambda_plus = t.phi_plus + t.phi_minus;
  t.lambda_minus = t.phi_plus - t.phi_minus;
  const Real denom = Real(8) * c * c + Real(3) * v2 * s * s;
  t.omega = Real(4) * c * ((Real(5) - Real(3) * v2) * c * t.lambda_plus + Real(3) * t.theta * t.lambda_minus) / denom;
  t.xi = Real(3) * std::sqrt(Real(6)) * std::tan(phi) *
         ((v2 + c * c) * t.lambda_plus - t.theta * c * t.lambda_minus) / denom;
  return t;
}

}  // namespace detail

template <typename Real>
PhiDensityTerms<Real> density_terms(Real phi, Real v) {
  const Real eta = peak_velocity(phi);
  detail::require_inside(v, eta);
  return detail::phi_terms(phi, v, (eta - v) * (eta + v));
}

/// Limit-distribution context for the phi family: coin parameter plus the
/// initial coin state in the gamma eigenbasis.
template <typename Real = double>
class PhiAsymptotics {
 public:
  PhiAsymptotics(Real phi, const Vector3c<Real>& g) : spec_(CoinSpec<Real>::phi(phi)), g_(g) {
    require_normalized(CoinState<Real>(g_, Basis::Eigen));
    eta_ = peak_velocity(phi);
  }

  PhiAsymptotics(const CoinSpec<Real>& spec, const CoinState<Real>& state)
      : PhiAsymptotics(checked_phi(spec), eigen_amplitudes(state, spec)) {}

  Real phi() const { return spec_.parameter(); }
  const CoinSpec<Real>& spec() const { return spec_; }
  const Vector3c<Real>& g() const { return g_; }
  Complex<Real> g_plus() const { return g_(0); }
  Complex<Real> g1() const { return g_(1); }
  Complex<Real> g2() const { return g_(2); }
  Real eta() const { return eta_; }

  /// Weight of Lambda+ in the even part: 3|g1|^2 + 5|g2|^2 - 2.
  Real even_lambda_weight() const { return Real(3) * std::norm(g1()) + Real(5) * std::norm(g2()) - Real(2); }
  /// Weight of Omega in the even part: 1 - |g1|^2 - 2|g2|^2.
  Real even_omega_weight() const { return Real(1) - std::norm(g1()) - Real(2) * std::norm(g2()); }
  /// g1 conj(g2) + conj(g1) g2 + i (g1 conj(g2) - conj(g1) g2) tan(phi), written as a real number.
  Real lambda_coherence() const {
    const Complex<Real> z = g1() * std::conj(g2());
    return Real(2) * z.real() - Real(2) * z.imag() * std::tan(phi());
  }
  /// i (g2 conj(g+) - conj(g2) g+), written as a real number.
  Real xi_coherence() const { return Real(-2) * (g2() * std::conj(g_plus())).imag(); }

 private:
  static Real checked_phi(const CoinSpec<Real>& spec) {
    if (spec.family() != CoinFamily::Phi) throw InvalidArgument("PhiAsymptotics: spec is not a phi-family coin");
    return spec.parameter();
  }

  CoinSpec<Real> spec_;
  Vector3c<Real> g_;
  Real eta_;
};

namespace detail {

template <typename Real>
Real phi_density(const PhiAsymptotics<Real>& ctx, Real v, Real gap) {
  const PhiDensityTerms<Real> t = phi_terms(ctx.phi(), v, gap);
  const Real bracket = ctx.even_lambda_weight() * t.lambda_plus + ctx.even_omega_weight() * t.omega -
                       std::sqrt(Real(3)) * v * ctx.lambda_coherence() * t.lambda_plus +
                       v * ctx.xi_coherence() * t.xi;
  return bracket / (Real(6) * std::numbers::pi_v<Real> * (Real(1) - v * v) * t.theta);
}

}  // namespace detail

template <typename Real>
Real density(const PhiAsymptotics<Real>& ctx, Real v) {
  const Real eta = ctx.eta();
  detail::require_inside(v, eta);
  return detail::phi_density(ctx, v, (eta - v) * (eta + v));
}

/// The density bracket evaluated literally in complex arithmetic; its
/// imaginary part is roundoff. Used to audit the real form in `density`.
template <typename Real>
Complex<Real> density_bracket_complex(const PhiAsymptotics<Real>& ctx, Real v) {
  using C = Complex<Real>;
  const C i(0, 1);
  const PhiDensityTerms<Real> t = density_terms(ctx.phi(), v);
  const C g_plus = ctx.g_plus(), g1 = ctx.g1(), g2 = ctx.g2();
  return ctx.even_lambda_weight() * t.lambda_plus + ctx.even_omega_weight() * t.omega -
         std::sqrt(Real(3)) * v *
             (g1 * std::conj(g2) + std::conj(g1) * g2 + i * (g1 * std::conj(g2) - std::conj(g1) * g2) * std::tan(ctx.phi())) *
             t.lambda_plus +
         i * v * (g2 * std::conj(g_plus) - std::conj(g2) * g_plus) * t.xi;
}

template <typename Real>
Real continuous_weight(const PhiAsymptotics<Real>& ctx) {
  const Real s6 = std::sqrt(Real(6));
  return s6 - Real(2) + (Real(3) - s6) * std::norm(ctx.g1()) + (Real(5) - Real(2) * s6) * std::norm(ctx.g2());
}

template <typename Real>
QuadratureResult<Real> continuous_weight_quadrature(const PhiAsymptotics<Real>& ctx, Real rel_tol = Real(1e-11)) {
  const Real eta = ctx.eta();
  return integrate([&](Real v, Real gl, Real gr) { return detail::phi_density(ctx, v, gl * gr); }, -eta, eta,
                   detail::singular_spec(rel_tol));
}

/// p_inf(m); carries no phi dependence.
template <typename Real>
Real localization(const PhiAsymptotics<Real>& ctx, int m) {
  const Real r = Real(5) - Real(2) * std::sqrt(Real(6));
  if (m == 0) return r * (Real(3) * std::norm(ctx.g_plus()) + Real(2) * std::norm(ctx.g2()));
  const Real scale = Real(12) * std::pow(r, 2 * std::abs(m));
  return m > 0 ? scale * std::norm(ctx.g_plus() + ctx.g2()) : scale * std::norm(ctx.g_plus() - ctx.g2());
}

template <typename Real>
Real localization_total(const PhiAsymptotics<Real>& ctx) {
  const Real s6 = std::sqrt(Real(6));
  return (s6 - Real(2)) * std::norm(ctx.g2()) + (Real(3) - s6) * std::norm(ctx.g_plus());
}

/// Which auxiliary function multiplies v^p / (6 pi (1 - v^2) Theta) in a basis integral.
enum class PhiTerm { LambdaPlus = 0, Omega = 1, Xi = 2 };

/// integral over (-eta, eta) of v^power * term(v) / (6 pi (1 - v^2) Theta(v)).
/// Results are memoized per (phi, power, term); the cache tolerates
/// concurrent readers and writers, and repeated inserts are idempotent.
template <typename Real>
Real phi_basis_integral(Real phi, int power, PhiTerm term) {
  using Key = std::tuple<Real, int, int>;
  static std::map<Key, Real> cache;
  static std::shared_mutex mutex;
  const Key key{phi, power, static_cast<int>(term)};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  if (power < 0) throw InvalidArgument("phi_basis_integral: power must be >= 0");
  const Real eta = peak_velocity(phi);
  auto integrand = [&](Real v, Real gl, Real gr) {
    const PhiDensityTerms<Real> t = detail::phi_terms(phi, v, gl * gr);
    const Real factor = term == PhiTerm::LambdaPlus ? t.lambda_plus : term == PhiTerm::Omega ? t.omega : t.xi;
    return std::pow(v, power) * factor / (Real(6) * std::numbers::pi_v<Real> * (Real(1) - v * v) * t.theta);
  };
  Real value = 0;
  // Odd powers integrate an odd function over a symmetric interval.
  if (power % 2 == 0) value = integrate(integrand, -eta, eta, detail::singular_spec(Real(1e-12))).value;
  std::unique_lock lock(mutex);
  cache.emplace(key, value);
  return value;
}

/// Delta_1(phi): second-moment weight of Lambda+.
template <typename Real>
Real phi_delta1(Real phi) {
  return phi_basis_integral(phi, 2, PhiTerm::LambdaPlus);
}

/// Delta_2(phi): second-moment weight of Omega.
template <typename Real>
Real phi_delta2(Real phi) {
  return phi_basis_integral(phi, 2, PhiTerm::Omega);
}

template <typename Real>
Real second_moment(const PhiAsymptotics<Real>& ctx) {
  return ctx.even_lambda_weight() * phi_delta1(ctx.phi()) + ctx.even_omega_weight() * phi_delta2(ctx.phi());
}

/// <v^n>. Even orders see only the first two density terms; odd orders only
/// the coherence terms, and are exactly zero when both coherence factors vanish.
template <typename Real>
Real moment(const PhiAsymptotics<Real>& ctx, int n) {
  if (n < 1) throw InvalidArgument("moment: order must be >= 1");
  const Real phi = ctx.phi();
  if (n % 2 == 0) {
    return ctx.even_lambda_weight() * phi_basis_integral(phi, n, PhiTerm::LambdaPlus) +
           ctx.even_omega_weight() * phi_basis_integral(phi, n, PhiTerm::Omega);
  }
  Real sum = 0;
  if (ctx.lambda_coherence() != Real(0)) {
    sum -= std::sqrt(Real(3)) * ctx.lambda_coherence() * phi_basis_integral(phi, n + 1, PhiTerm::LambdaPlus);
  }
  if (ctx.xi_coherence() != Real(0)) {
    sum += ctx.xi_coherence() * phi_basis_integral(phi, n + 1, PhiTerm::Xi);
  }
  return sum;
}

}  // namespace triwalk
