#include "doctest.h"

#include <cmath>
#include <numbers>

#include "support/test_support.hpp"
#include "triwalk/asymptotics_rho.hpp"
#include "triwalk/walk.hpp"

using namespace triwalk;
using triwalk::testing::Vec3;

namespace {

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

double quadrature_moment(const RhoAsymptotics<double>& ctx, int n) {
  QuadratureSpec<double> spec;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-15;
  spec.endpoint_singularity = EndpointSingularity::InverseSqrtBoth;
  auto integrand = [&](double v, double gl, double gr) { return std::pow(v, n) * detail::rho_density(ctx, v, gl, gr); };
  return integrate(integrand, -ctx.rho(), ctx.rho(), spec).value;
}

}  // namespace

TEST_CASE("second moment examples") {
  const RhoAsymptotics<double> grover(kInvSqrt3, Vec3(1, 0, 0));
  CHECK(second_moment(grover) == doctest::Approx(0.04124).epsilon(1e-3));
  const RhoAsymptotics<double> half(0.5, Vec3(1, 0, 0));
  CHECK(second_moment(half) == doctest::Approx(0.03109).epsilon(1e-3));
}

TEST_CASE("sigma2- density vanishes at the origin") {
  for (double rho : {0.2, kInvSqrt3, 0.9}) {
    const RhoAsymptotics<double> ctx(rho, Vec3(0, 0, 1));
    CHECK(std::abs(density(ctx, 0.0)) <= 1e-14);
    CHECK(density(ctx, 0.5 * rho) > 0.0);
  }
}

TEST_CASE("density is non-negative on the open support") {
  for (int trial = 0; trial < 50; ++trial) {
    const double rho = testing::uniform(0.02, 0.98);
    const RhoAsymptotics<double> ctx(rho, testing::random_amplitudes());
    for (int i = 1; i < 200; ++i) {
      const double v = rho * (-1.0 + i / 100.0);
      CHECK(density(ctx, v) >= -1e-14);
    }
    CHECK_THROWS_AS(density(ctx, rho), OutsideSupport);
    CHECK_THROWS_AS(density(ctx, -rho), OutsideSupport);
    CHECK_THROWS_AS(density(ctx, 2.0), OutsideSupport);
  }
}

TEST_CASE("property: continuous weight plus trapped weight is one") {
  for (int trial = 0; trial < 100; ++trial) {
    const RhoAsymptotics<double> ctx(testing::uniform(0.01, 0.99), testing::random_amplitudes());
    CHECK(std::abs(continuous_weight(ctx) + localization_total(ctx) - 1.0) <= 1e-12);
    CHECK(std::abs(continuous_weight_quadrature(ctx).value + localization_total(ctx) - 1.0) <= 1e-8);
  }
}

TEST_CASE("localization profile sums to the closed-form total") {
  for (int trial = 0; trial < 50; ++trial) {
    const RhoAsymptotics<double> ctx(testing::uniform(0.05, 0.95), testing::random_amplitudes());
    const double nu2 = ctx.nu() * ctx.nu();
    const int m_max = 40;
    double sum = localization(ctx, 0);
    for (int m = 1; m <= m_max; ++m) sum += localization(ctx, m) + localization(ctx, -m);
    // Geometric tail of both sides beyond m_max.
    const double tail = (localization(ctx, m_max) + localization(ctx, -m_max)) * nu2 / (1 - nu2);
    CHECK(std::abs(sum + tail - localization_total(ctx)) <= 1e-12);
  }
}

TEST_CASE("one-sided localization at the grover point") {
  const RhoAsymptotics<double> ctx(kInvSqrt3, Vec3(1, 0, 1) / std::sqrt(2.0));
  CHECK(localization(ctx, 0) == doctest::Approx(2.5 * (5 - 2 * std::sqrt(6.0))).epsilon(1e-14));
  for (int m = -30; m < 0; ++m) CHECK(localization(ctx, m) == 0.0);
  CHECK(localization(ctx, 3) > 0.0);
  CHECK(ctx.nu() == doctest::Approx(2 * std::sqrt(6.0) - 5).epsilon(1e-14));
}

TEST_CASE("sigma1- is not trapped") {
  const RhoAsymptotics<double> ctx(0.8, Vec3(0, 1, 0));
  CHECK(localization_total(ctx) == doctest::Approx(0.0).epsilon(1e-15));
  for (int m = -5; m <= 5; ++m) CHECK(localization(ctx, m) == 0.0);
}

TEST_CASE("moments agree with direct quadrature of the density") {
  for (int trial = 0; trial < 20; ++trial) {
    const RhoAsymptotics<double> ctx(testing::uniform(0.05, 0.95), testing::random_amplitudes());
    for (int n = 1; n <= 6; ++n) {
      CAPTURE(n);
      CHECK(std::abs(moment(ctx, n) - quadrature_moment(ctx, n)) <= 1e-11);
    }
  }
}

TEST_CASE("odd moments follow the coherence factor") {
  const double rho = 0.45;
  const RhoAsymptotics<double> zero(rho, testing::eigen_state(0.6, 0.8, 0.0));
  CHECK(odd_moment(zero, 0) == 0.0);
  CHECK(odd_moment(zero, 2) == 0.0);
  const RhoAsymptotics<double> a(rho, testing::eigen_state(0.5, 0.5, 0.5));
  const RhoAsymptotics<double> b(rho, testing::eigen_state(0.5, 0.5, -0.25));
  for (int n = 0; n < 3; ++n) {
    CHECK(odd_moment(a, n) / a.coherence() == doctest::Approx(odd_moment(b, n) / b.coherence()).epsilon(1e-12));
    CHECK(odd_moment(a, n) == doctest::Approx(odd_moment_coefficient(rho, n) * a.coherence()).epsilon(1e-14));
  }
}

TEST_CASE("delta coefficients are positive and ordered") {
  for (int i = 1; i < 50; ++i) {
    const double rho = i / 50.0;
    CHECK(rho_delta1(rho) > 0.0);
    CHECK(rho_delta2(rho) > 0.0);
    // |g1|^2 = 1 maximizes and g+ = 1 minimizes the second moment.
    CHECK(2 * rho_delta1(rho) - rho_delta2(rho) > rho_delta1(rho) - rho_delta2(rho));
  }
}

TEST_CASE("empirical second moment approaches the limit") {
  const double rho = 0.5;
  const auto spec = CoinSpec<double>::rho(rho);
  const auto state = CoinState<double>::eigen(1, 0, 0);
  const auto dist = distribution(evolve(initial_state(state, spec), build_coin(spec), 2000));
  const RhoAsymptotics<double> ctx(spec, state);
  CHECK(std::abs(empirical_moment(dist, 2) - second_moment(ctx)) <= 2e-3);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(RhoAsymptotics<double>(0.5, Vec3(1, 1, 0)), NormalizationError);
  CHECK_THROWS_AS(RhoAsymptotics<double>(1.5, Vec3(1, 0, 0)), ParameterOutOfRange);
  CHECK_THROWS_AS(RhoAsymptotics<double>(CoinSpec<double>::phi(0.1), CoinState<double>::eigen(1, 0, 0)), InvalidArgument);
  CHECK_THROWS_AS(moment(RhoAsymptotics<double>(0.5, Vec3(1, 0, 0)), 0), InvalidArgument);
}

TEST_CASE("standard-basis input is converted") {
  const auto spec = CoinSpec<double>::rho(0.3);
  const Vec3 psi = testing::random_amplitudes();
  const RhoAsymptotics<double> from_standard(spec, CoinState<double>(psi, Basis::Standard));
  const RhoAsymptotics<double> from_eigen(0.3, to_eigen(CoinState<double>(psi, Basis::Standard), spec).amplitudes());
  CHECK(density(from_standard, 0.1) == doctest::Approx(density(from_eigen, 0.1)).epsilon(1e-14));
}

TEST_CASE("named densities") {
  const double rho = 0.62;
  const RhoAsymptotics<double> plus(rho, Vec3(1, 0, 0));
  const RhoAsymptotics<double> left(rho, Vec3(0, 1, 1) / std::sqrt(2.0));
  for (int i = 1; i < 30; ++i) {
    const double v = rho * (-1 + i / 15.0);
    const double expected = std::sqrt(1 - rho * rho) * std::sqrt(rho * rho - v * v) /
                            (std::numbers::pi * rho * rho * (1 - v * v));
    CHECK(density(plus, v) == doctest::Approx(expected).epsilon(1e-13));
    // sigma_L: proportional to (rho - v)^{3/2} / (rho + v)^{1/2}.
    const double shape = std::pow(rho - v, 1.5) / std::sqrt(rho + v) / (1 - v * v);
    CHECK(density(left, v) / shape == doctest::Approx(density(left, 0.0) / (rho / (1.0))).epsilon(1e-12));
  }
  CHECK(density(left, rho * (1 - 1e-9)) < 1e-10);
  CHECK(density(left, -rho * (1 - 1e-9)) > 1e3);
}

TEST_CASE("closed-form values") {
  const double s = kInvSqrt3;
  const RhoAsymptotics<double> plus(s, Vec3(1, 0, 0));
  CHECK(continuous_weight(plus) == doctest::Approx(0.449490).epsilon(1e-6));
  CHECK(continuous_weight(plus) == doctest::Approx(1 + 3 * (std::sqrt(2.0 / 3.0) - 1)).epsilon(1e-14));
  CHECK(localization_total(plus) == doctest::Approx(3 * (1 - std::sqrt(2.0 / 3.0))).epsilon(1e-14));
  CHECK(localization(plus, 1) == doctest::Approx(12 * std::pow(5 - 2 * std::sqrt(6.0), 2)).epsilon(1e-13));
  CHECK(continuous_weight(RhoAsymptotics<double>(0.3, Vec3(0, 1, 0))) == doctest::Approx(1.0).epsilon(1e-15));
  const RhoAsymptotics<double> minus1(0.5, Vec3(0, 1, 0));
  CHECK(second_moment(minus1) == doctest::Approx(2 * rho_delta1(0.5) - rho_delta2(0.5)).epsilon(1e-15));
  CHECK(second_moment(minus1) == doctest::Approx(0.13398).epsilon(1e-4));
  CHECK(rho_delta1(0.5) == doctest::Approx(0.10289).epsilon(1e-4));
  CHECK(rho_delta2(0.5) == doctest::Approx(0.07180).epsilon(1e-4));
}

TEST_CASE("localization decays geometrically with ratio nu^2") {
  for (int trial = 0; trial < 20; ++trial) {
    const RhoAsymptotics<double> ctx(testing::uniform(0.1, 0.9), testing::random_amplitudes());
    const double nu2 = ctx.nu() * ctx.nu();
    for (int m = 1; m < 8; ++m) {
      CHECK(localization(ctx, m + 1) / localization(ctx, m) == doctest::Approx(nu2).epsilon(1e-12));
      CHECK(localization(ctx, -m - 1) / localization(ctx, -m) == doctest::Approx(nu2).epsilon(1e-12));
    }
    double sum = 0;
    for (int m = -200; m <= 200; ++m) sum += localization(ctx, m);
    CHECK(std::abs(sum - localization_total(ctx)) <= 1e-12);
  }
}

TEST_CASE("density is non-negative on a fine grid") {
  for (int trial = 0; trial < 5; ++trial) {
    const double rho = testing::uniform(0.05, 0.95);
    const RhoAsymptotics<double> ctx(rho, testing::random_amplitudes());
    double lowest = 1;
    for (int i = 1; i < 10000; ++i) lowest = std::min(lowest, density(ctx, rho * (-1 + i / 5000.0)));
    CHECK(lowest >= -1e-14);
  }
}
