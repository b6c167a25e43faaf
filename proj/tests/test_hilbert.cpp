#include "vantrees/hilbert.hpp"

#include <doctest.h>

#include <cmath>

using namespace vantrees;

TEST_CASE("wrap_angle maps into [-pi, pi)") {
  CHECK(wrap_angle(kPi) == doctest::Approx(-kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(-kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + kTwoPi));
  CHECK(angular_distance(kPi - 0.1, -kPi + 0.1) == doctest::Approx(0.2));
  CHECK(angular_distance(0.3, 0.3) == 0.0);
}

TEST_CASE("truncation dimensions match the Poisson tail") {
  CHECK(truncation_dimension(0.0) == 1);
  CHECK(truncation_dimension(0.1) == 5);
  CHECK(truncation_dimension(0.3) == 8);
  CHECK(truncation_dimension(0.4) == 9);
  CHECK(truncation_dimension(1.0) == 15);
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    const std::size_t d = truncation_dimension(a);
    CHECK(poisson_tail_mass(a * a, d) < kTruncationTail);
    CHECK(poisson_tail_mass(a * a, d - 1) >= kTruncationTail);
  }
}

TEST_CASE("poisson tail against an independent sum") {
  // 1 - Σ_{n<d} e^{-m} m^n/n! computed by the complementary sum
  const double m = 0.49;
  double head = 0.0;
  double term = std::exp(-m);
  for (int n = 0; n < 4; ++n) {
    head += term;
    term *= m / (n + 1);
  }
  CHECK(poisson_tail_mass(m, 4) == doctest::Approx(1.0 - head).epsilon(1e-9));
}

TEST_CASE("coherent model rejects a too-small dimension") {
  CHECK_THROWS_AS(CoherentModel(1.0, 10), std::invalid_argument);
  CHECK_NOTHROW(CoherentModel(1.0, 20));
  CHECK(CoherentModel(Complex(0.3, 0.4)).mean_photons() == doctest::Approx(0.25));
}

TEST_CASE("coherent state is normalized and Poissonian") {
  const CoherentModel model(0.8);
  const FockVector psi = coherent_state(model);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  double factorial = 1.0;
  for (std::size_t n = 0; n < psi.dim(); ++n) {
    if (n > 0) factorial *= static_cast<double>(n);
    const double expected = std::exp(-0.64) * std::pow(0.64, static_cast<double>(n)) / factorial;
    CHECK(std::norm(psi[n]) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("overlap probability agrees with the closed form") {
  for (double a : {0.0, 0.3, 1.0, 1.7}) {
    const CoherentModel model(a);
    for (double delta : {0.0, 0.4, 1.5, kPi, -2.2}) {
      CHECK(overlap_probability(model, 0.3 + delta, 0.3) ==
            doctest::Approx(overlap_probability_closed_form(a * a, delta)).epsilon(1e-11));
    }
  }
}

TEST_CASE("phase derivative matches a central difference") {
  const CoherentModel model(Complex(0.6, -0.2));
  const FockVector psi = phase_shifted_coherent(model, 0.7);
  const double h = 1e-6;
  const Eigen::VectorXcd fd =
      (phase_shifted_coherent(model, 0.7 + h).amps() - phase_shifted_coherent(model, 0.7 - h).amps()) / (2 * h);
  CHECK((phase_derivative(psi).amps() - fd).norm() < 1e-8);
}

TEST_CASE("phase evolution is unitary and composes") {
  const FockVector psi = coherent_state(CoherentModel(1.2));
  const FockVector a = phase_evolve(phase_evolve(psi, 0.4), 0.9);
  const FockVector b = phase_evolve(psi, 1.3);
  CHECK((a.amps() - b.amps()).norm() < 1e-13);
  CHECK(a.norm() == doctest::Approx(psi.norm()));
  CHECK(std::abs(psi.inner(psi) - Complex(1.0)) < 1e-12);
}
