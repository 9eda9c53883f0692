#include "doctest.h"

#include <cmath>
#include <numbers>

#include "support/test_support.hpp"
#include "triwalk/asymptotics_phi.hpp"
#include "triwalk/spectral.hpp"
#include "triwalk/walk.hpp"

using namespace triwalk;
using triwalk::testing::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;

double eigen_defect(const BlochSystem<double>& sys, double phi) {
  const Matrix3c<double> u = evolution_operator(sys.k, phi);
  double worst = 0;
  for (int j = 0; j < 3; ++j) {
    const Vec3 v = sys.eigenvectors.col(j);
    worst = std::max(worst, (u * v - sys.eigenvalues(j) * v).norm());
  }
  return worst;
}

double orthonormality_defect(const BlochSystem<double>& sys) {
  return (sys.eigenvectors.adjoint() * sys.eigenvectors - Matrix3c<double>::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("dispersion relation") {
  CHECK(dispersion(0.0, 0.0) == doctest::Approx(-kPi).epsilon(1e-15));
  CHECK(dispersion(kPi, 0.0) == doctest::Approx(-std::acos(-1.0 / 3.0)).epsilon(1e-15));
  for (int i = 0; i < 50; ++i) {
    const double phi = i * 1.55 / 50;
    const double k = 0.7;
    // Eigenvalues of U(k) are 1 and e^{i(phi +- omega)}.
    Eigen::ComplexEigenSolver<Matrix3c<double>> solver(evolution_operator(k, phi));
    const double omega = dispersion(k, phi);
    for (auto target : {std::complex<double>(1, 0), std::polar(1.0, phi + omega), std::polar(1.0, phi - omega)}) {
      double best = 1;
      for (int j = 0; j < 3; ++j) best = std::min(best, std::abs(solver.eigenvalues()(j) - target));
      CHECK(best <= 1e-12);
    }
  }
}

TEST_CASE("group velocity is the derivative of the dispersion") {
  const double h = 1e-6;
  for (double phi : {0.0, 0.4, kPi / 4, 1.3}) {
    for (double k : {0.3, 1.0, 2.0, 2.9, -1.2}) {
      const double numeric = (dispersion(k + h, phi) - dispersion(k - h, phi)) / (2 * h);
      CHECK(group_velocity(k, phi) == doctest::Approx(numeric).epsilon(1e-8));
    }
  }
  CHECK(group_velocity(0.0, 0.0) == 0.0);
  CHECK(group_velocity(1e-12, 0.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("Bloch eigensystem solves the eigenproblem on a dense grid") {
  for (int i = 0; i < 24; ++i) {
    const double phi = i * 1.55 / 24;
    for (int j = 0; j < 64; ++j) {
      const double k = -kPi + j * 2 * kPi / 64;
      if (phi == 0.0 && k == 0.0) continue;
      const auto sys = bloch_eigensystem(k, phi);
      CAPTURE(phi);
      CAPTURE(k);
      CHECK(eigen_defect(sys, phi) <= 1e-12);
      CHECK(orthonormality_defect(sys) <= 1e-12);
    }
  }
}

TEST_CASE("normalization closed form matches the vector norm") {
  for (double phi : {0.1, 0.6, 1.4}) {
    for (double k : {-2.5, -0.4, 0.9, 3.0}) {
      const double omega = dispersion(k, phi);
      CHECK(bloch_normalization(k, phi, +1) ==
            doctest::Approx(detail::bloch_vector_unnormalized(k, phi, omega, +1).squaredNorm()).epsilon(1e-12));
      CHECK(bloch_normalization(k, phi, -1) ==
            doctest::Approx(detail::bloch_vector_unnormalized(k, phi, omega, -1).squaredNorm()).epsilon(1e-12));
    }
  }
}

TEST_CASE("k = 0 needs the completion rule and still yields an eigenbasis") {
  for (double phi : {0.05, 0.5, 1.2}) {
    CHECK(bloch_normalization(0.0, phi, -1) <= kCompletionThreshold);
    const auto sys = bloch_eigensystem(0.0, phi);
    CHECK(eigen_defect(sys, phi) <= 1e-12);
    CHECK(orthonormality_defect(sys) <= 1e-12);
  }
  CHECK_THROWS_AS(bloch_eigensystem(0.0, 0.0), DegenerateNormalization);
}

TEST_CASE("Fourier oracle reproduces the simulator") {
  for (double phi : {0.0, kPi / 6, 1.1}) {
    const CoinState<double> psi(testing::random_amplitudes(), Basis::Standard);
    const auto spec = CoinSpec<double>::phi(phi);
    for (int t : {0, 1, 7, 15}) {
      const auto sim = evolve(initial_state(psi, spec), build_coin(spec), t);
      const auto profile = amplitude_profile(t, phi, psi);
      CHECK((profile - sim.amplitudes()).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((amplitude_integral(t, t, phi, psi) - sim.at(t)).norm() <= 1e-10);
      CHECK(amplitude_integral(t + 1, t, phi, psi).norm() <= 1e-10);
    }
  }
  const CoinState<double> psi = CoinState<double>::eigen(1, 0, 0);
  CHECK_THROWS_AS(amplitude_integral(0, kOracleMaxSteps + 1, 0.3, psi), OracleRegimeExceeded);
  CHECK_THROWS_AS(amplitude_profile(kOracleMaxSteps + 1, 0.3, psi), OracleRegimeExceeded);
  CHECK_THROWS_AS(amplitude_integral(0, 2, 0.3, CoinState<double>::eigen(1, 1, 0)), NormalizationError);
}

TEST_CASE("stationary band reproduces the trapped probabilities") {
  for (int trial = 0; trial < 8; ++trial) {
    const double phi = testing::uniform(0.0, 1.5);
    const Vec3 g = testing::random_amplitudes();
    const CoinState<double> psi(g, Basis::Eigen);
    const PhiAsymptotics<double> ctx(phi, g);
    for (int m = -4; m <= 4; ++m) {
      CHECK(std::abs(stationary_amplitude(m, phi, psi).squaredNorm() - localization(ctx, m)) <= 1e-12);
    }
  }
}

TEST_CASE("limit moments from the Bloch bands match the closed forms") {
  for (int trial = 0; trial < 6; ++trial) {
    const double phi = testing::uniform(0.05, 1.5);
    const Vec3 g = testing::random_amplitudes();
    const CoinState<double> psi(g, Basis::Eigen);
    const PhiAsymptotics<double> ctx(phi, g);
    for (int n = 1; n <= 4; ++n) {
      CAPTURE(n);
      CHECK(std::abs(limit_moment(n, phi, psi) - moment(ctx, n)) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(limit_moment(0, 0.3, CoinState<double>::eigen(1, 0, 0)), InvalidArgument);
}

TEST_CASE("velocity split point is a maximum of the group velocity") {
  for (double phi : {0.0, 0.2, kPi / 4, 1.4}) {
    const double k0 = velocity_split_point(phi);
    CHECK(k0 >= 0.0);
    CHECK(k0 < kPi);
    const double v0 = group_velocity(k0, phi);
    CHECK(v0 == doctest::Approx(peak_velocity(phi)).epsilon(1e-12));
    for (int i = 1; i < 100; ++i) CHECK(group_velocity(kPi * i / 100, phi) <= v0 + 1e-15);
  }
}

TEST_CASE("dispersion limits") {
  CHECK(dispersion(1.3, 1.5707963) == doctest::Approx(-kPi / 2).epsilon(1e-6));
  CHECK(dispersion(kPi, 0.0) == doctest::Approx(-1.910633).epsilon(1e-6));
}

TEST_CASE("overlaps are complete") {
  for (int trial = 0; trial < 100; ++trial) {
    const double phi = testing::uniform(0.0, 1.5);
    const double k = testing::uniform(-kPi, kPi);
    const CoinState<double> psi(testing::random_amplitudes(), Basis::Standard);
    CHECK(std::abs(overlaps(k, phi, psi).squaredNorm() - 1) <= 1e-10);
  }
  const auto sys = bloch_eigensystem(0.0, 0.3);
  const CoinState<double> v1(sys.eigenvectors.col(0), Basis::Standard);
  CHECK((overlaps(0.0, 0.3, v1) - Vec3(1, 0, 0)).norm() <= 1e-12);
}

TEST_CASE("oracle base cases") {
  const CoinState<double> psi(testing::random_amplitudes(), Basis::Standard);
  CHECK((amplitude_integral(0, 0, 0.4, psi) - psi.amplitudes()).norm() <= 1e-10);
  CHECK(amplitude_integral(2, 0, 0.4, psi).norm() <= 1e-10);
  const auto s = amplitude_integral(0, 1, 0.0, CoinState<double>::standard(0, 1, 0));
  CHECK(std::abs(s(1) - std::complex<double>(-1.0 / 3.0, 0)) <= 1e-10);
}

TEST_CASE("stationary amplitude values") {
  const auto gamma1 = CoinState<double>::eigen(0, 1, 0);
  for (int m = -5; m <= 5; ++m) CHECK(stationary_amplitude(m, 0.7, gamma1).norm() <= 1e-10);
  const auto gamma_plus = CoinState<double>::eigen(1, 0, 0);
  CHECK(stationary_amplitude(0, 0.7, gamma_plus).squaredNorm() == doctest::Approx(3 * (5 - 2 * std::sqrt(6.0))).epsilon(1e-10));
  const CoinState<double> psi(testing::random_amplitudes(), Basis::Eigen);
  const RhoAsymptotics<double> grover(1.0 / std::sqrt(3.0), psi.amplitudes());
  for (int m = -10; m <= 10; ++m) {
    const double a = stationary_amplitude(m, 0.0, psi).squaredNorm();
    const double b = stationary_amplitude(m, kPi / 3, psi).squaredNorm();
    CHECK(std::abs(a - b) <= 1e-12);
    CHECK(std::abs(a - localization(grover, m)) <= 1e-8);
  }
}

TEST_CASE("limit moment values") {
  const auto gamma_plus = CoinState<double>::eigen(1, 0, 0);
  CHECK(limit_moment(2, 0.0, gamma_plus) == doctest::Approx(0.04124).epsilon(1e-3));
  CHECK(std::abs(limit_moment(1, 0.5, gamma_plus)) <= 1e-10);
  const Vec3 g = testing::random_amplitudes();
  const double a = limit_moment(2, 0.8, CoinState<double>(g, Basis::Eigen));
  const double b = limit_moment(2, 0.8, CoinState<double>(testing::rotate_phases(g), Basis::Eigen));
  CHECK(std::abs(a - b) <= 1e-10);
}

TEST_CASE("odd limit moments agree with the simulated drift") {
  // Fixes the sign convention of the odd orders against the walk itself.
  const double phi = 0.6;
  const CoinState<double> psi(testing::eigen_state(0.5, 0.6, 0.62), Basis::Eigen);
  const auto spec = CoinSpec<double>::phi(phi);
  const auto dist = distribution(evolve(initial_state(psi, spec), build_coin(spec), 1500));
  const double limit = limit_moment(1, phi, psi);
  CHECK(std::abs(limit) > 1e-2);
  CHECK(std::abs(empirical_moment(dist, 1) - limit) <= 2e-3);
  CHECK(std::abs(empirical_moment(dist, 3) - limit_moment(3, phi, psi)) <= 2e-3);
}
