#include "vantrees/infotheory.hpp"

#include <doctest.h>

#include <cmath>

using namespace vantrees;

namespace {

// F from the unsimplified two-outcome quotient (p')²/p + (p')²/(1-p)
double quotient_fisher(double m, double delta) {
  const double p = std::exp(-2 * m * (1 - std::cos(delta)));
  const double dp = -2 * m * std::sin(delta) * p;
  return dp * dp / p + dp * dp / (1 - p);
}

}  // namespace

TEST_CASE("fisher information of a simple distribution") {
  const OutcomeDistribution dist{{0.25, 0.75}, {0.5, -0.5}};
  CHECK(fisher_information(dist) == doctest::Approx(0.25 / 0.25 + 0.25 / 0.75));
}

TEST_CASE("fisher threshold rule") {
  CHECK(fisher_information({{1.0, 0.0}, {0.0, 0.0}}) == 0.0);
  CHECK(fisher_information({{1.0, 1e-13}, {0.0, 1e-7}}) == 0.0);
  CHECK_THROWS_AS(fisher_information({{1.0, 1e-13}, {-0.1, 0.1}}), std::domain_error);
}

TEST_CASE("family fisher equals the quotient form away from the singular point") {
  for (double m : {0.09, 0.5, 1.0, 4.0}) {
    for (double delta : {0.3, 1.0, 2.0, 3.0, -1.4}) {
      CHECK(family_fisher(m, delta) == doctest::Approx(quotient_fisher(m, delta)).epsilon(1e-10));
    }
  }
}

TEST_CASE("family fisher limit at theta = epsilon is 4|alpha|^2") {
  for (double a : {0.3, 1.0}) {
    const double m = a * a;
    CHECK(family_fisher(m, 0.0) == doctest::Approx(4 * m).epsilon(1e-14));
    CHECK(family_fisher(m, 1e-9) == doctest::Approx(4 * m).epsilon(1e-8));
    // the quotient approaches the same value
    CHECK(quotient_fisher(m, 1e-3) == doctest::Approx(4 * m).epsilon(5e-3));
  }
  CHECK(family_fisher(1.0, kPi) == doctest::Approx(0.0));
}

TEST_CASE("family fisher matches the Born-rule Fisher information of the projector family") {
  const CoherentModel model(0.8);
  const Povm povm = projector_family(model, 0.5);
  for (double theta : {-2.0, 0.1, 1.2, 2.9}) {
    const double born = fisher_information(born_probabilities(povm, phase_shifted_coherent(model, theta)));
    CHECK(born == doctest::Approx(family_fisher(model, theta, 0.5)).epsilon(1e-8));
  }
}

TEST_CASE("family probability derivative against finite differences") {
  const double m = 0.7, delta = 0.9, h = 1e-6;
  const double fd = (family_probability(m, delta + h) - family_probability(m, delta - h)) / (2 * h);
  CHECK(family_probability_derivative(m, delta) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("likelihood term: family and generic POVM paths agree") {
  const CoherentModel model(0.6);
  const PriorGrid prior = gaussian_prior(kPi / 4, 512);
  const double eps = 0.7;
  CHECK(povm_likelihood_information(model, projector_family(model, eps), prior) ==
        doctest::Approx(family_likelihood_information(model.mean_photons(), prior, eps)).epsilon(1e-8));
}

TEST_CASE("flat prior makes the family likelihood term independent of epsilon") {
  const PriorGrid flat = flat_prior(1024);
  const double a = family_likelihood_information(1.0, flat, 0.0);
  for (double eps : {0.3, 1.9, 4.0}) CHECK(family_likelihood_information(1.0, flat, eps) == doctest::Approx(a));
}

TEST_CASE("van trees terms and n copies") {
  const CoherentModel model(0.5);
  const PriorGrid prior = gaussian_prior(kPi / 4, 512);
  const VanTreesTerms t = van_trees_terms(model, 0.1, prior);
  CHECK(t.prior == doctest::Approx(prior_fisher(prior)));
  CHECK(van_trees_information(model, 0.1, prior) == doctest::Approx(t.likelihood + t.prior));
  CHECK(van_trees_n_copies(model, 0.1, prior, 5) == doctest::Approx(5 * t.likelihood + t.prior));
  CHECK_THROWS_AS(van_trees_n_copies(model, 0.1, prior, 0), std::invalid_argument);
}

TEST_CASE("V_Q bounds every measurement") {
  const CoherentModel model(0.7);
  const PriorGrid prior = gaussian_prior(kPi / 4, 256);
  const double vq = generalized_qfi_vq(model, prior);
  CHECK(vq == doctest::Approx(4 * 0.49 + prior_fisher(prior)));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Povm povm = random_projective_povm(model.dim(), model.dim() + 2, seed);
    CHECK(van_trees_information(model, povm, prior) <= vq);
  }
  CHECK(van_trees_information(model, 0.0, prior) <= vq);
}

TEST_CASE("restricted analytic closed form") {
  CHECK(zq_restricted_analytic(0.0, kPi / 4) == doctest::Approx(16 / (kPi * kPi)));
  CHECK(zq_restricted_analytic(0.04, 1.0) == doctest::Approx(0.08 * (std::exp(-0.5) + 1) + 1));
}
