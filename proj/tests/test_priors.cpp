#include "vantrees/priors.hpp"

#include "vantrees/hilbert.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace vantrees;

TEST_CASE("grid geometry") {
  const PriorGrid flat = flat_prior(8);
  CHECK(flat.size() == 8);
  CHECK(flat.spacing() == doctest::Approx(kTwoPi / 8));
  CHECK(flat.theta(0) == doctest::Approx(-kPi));
  CHECK(flat.theta(4) == doctest::Approx(0.0));
  CHECK(flat[3] == doctest::Approx(1.0 / kTwoPi));
}

TEST_CASE("priors integrate to one") {
  for (const PriorGrid& p : {flat_prior(), gaussian_prior(kPi / 4), gaussian_prior(0.1, 512), delta_prior(10, 64)}) {
    CHECK(integrate(p.density(), p.spacing()) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("gaussian prior fisher matches the truncated-normal closed form") {
  // ∫(λ')²/λ = E[θ²]/σ⁴ for λ ∝ exp(-θ²/2σ²) on [-π, π]
  const double sigma = kPi / 4;
  const double a = kPi / sigma;
  const double phi = std::exp(-0.5 * a * a) / std::sqrt(kTwoPi);
  const double mass = std::erf(a / std::sqrt(2.0));
  const double second_moment = sigma * sigma * (1.0 - 2.0 * a * phi / mass);
  const double expected = second_moment / std::pow(sigma, 4);
  CHECK(prior_fisher(gaussian_prior(sigma, 4096)) == doctest::Approx(expected).epsilon(1e-5));
  CHECK(prior_fisher(gaussian_prior(sigma, 4096)) == doctest::Approx(16 / (kPi * kPi)).epsilon(2e-3));
}

TEST_CASE("flat prior carries no information") {
  CHECK(prior_fisher(flat_prior()) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bayes update normalizes and keeps the shape") {
  const PriorGrid prior = gaussian_prior(0.8, 256);
  std::vector<double> like(prior.size());
  for (std::size_t i = 0; i < like.size(); ++i) like[i] = 0.5 + 0.4 * std::cos(prior.theta(i) - 0.3);
  const PriorGrid post = bayes_update(prior, like);
  CHECK(integrate(post.density(), post.spacing()) == doctest::Approx(1.0));
  const double z = marginal_probability(prior, like);
  for (std::size_t i : {10u, 100u, 200u}) CHECK(post[i] == doctest::Approx(prior[i] * like[i] / z));
}

TEST_CASE("impossible outcome throws") {
  const PriorGrid prior = delta_prior(5, 32);
  std::vector<double> like(32, 1.0);
  like[5] = 0.0;
  CHECK_THROWS_AS(bayes_update(prior, like), std::domain_error);
}

TEST_CASE("posterior mean and risk") {
  const PriorGrid peak = delta_prior(40, 64);
  const PosteriorSummary s = posterior_mean_and_risk(peak);
  CHECK(s.estimate == doctest::Approx(peak.theta(40)));
  CHECK(s.variance == doctest::Approx(0.0).epsilon(1e-14));
  // flat on [-π, π): mean −h/2 from the half-open grid, variance π²/3 - h²/12
  const PriorGrid flat = flat_prior(1024);
  const PosteriorSummary f = posterior_mean_and_risk(flat);
  const double h = flat.spacing();
  CHECK(f.estimate == doctest::Approx(-h / 2).epsilon(1e-9));
  CHECK(f.variance == doctest::Approx(kPi * kPi / 3 - h * h / 12).epsilon(1e-9));
}

TEST_CASE("csv output") {
  std::ostringstream out;
  write_csv(out, flat_prior(4));
  const std::string text = out.str();
  CHECK(text.rfind("theta,density\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("invalid priors") {
  CHECK_THROWS_AS(gaussian_prior(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_prior(0.5, 2), std::invalid_argument);
}
