#include "vantrees/infotheory.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vantrees {

double fisher_information(const OutcomeDistribution& dist) {
  if (dist.probs.size() != dist.dprobs.size()) {
    throw std::invalid_argument("fisher_information: probs and dprobs differ in length");
  }
  double info = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const double p = dist.probs[k];
    const double dp = dist.dprobs[k];
    if (p > kOutcomeThreshold) {
      info += dp * dp / p;
    } else if (std::abs(dp) > kSingularDerivative) {
      throw std::domain_error(
          fmt::format("fisher_information: outcome {} has p = {:.3g} but dp = {:.3g}", k, p, dp));
    }
  }
  return info;
}

double family_probability(double mean_photons, double delta) {
  return overlap_probability_closed_form(mean_photons, delta);
}

double family_probability_derivative(double mean_photons, double delta) {
  return -2.0 * mean_photons * std::sin(delta) * family_probability(mean_photons, delta);
}

namespace {

// x/(eˣ - 1), continuous at x = 0.
double bose_factor(double x) { return x == 0.0 ? 1.0 : x / std::expm1(x); }

}  // namespace

double family_fisher(double mean_photons, double delta) {
  const double half_sin = std::sin(0.5 * delta);
  const double half_cos = std::cos(0.5 * delta);
  const double x = 4.0 * mean_photons * half_sin * half_sin;
  return 4.0 * mean_photons * half_cos * half_cos * bose_factor(x);
}

double family_fisher(const CoherentModel& model, double theta, double epsilon) {
  return family_fisher(model.mean_photons(), theta - epsilon);
}

FamilyLikelihood::FamilyLikelihood(double mean_photons, const PriorGrid& prior) : mean_photons_(mean_photons) {
  const double floor = 1e-15 * *std::max_element(prior.density().begin(), prior.density().end());
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (prior[i] <= floor) continue;
    const double theta = prior.theta(i);
    cos_.push_back(std::cos(theta));
    sin_.push_back(std::sin(theta));
    weight_.push_back(prior[i] * prior.spacing());
  }
}

double FamilyLikelihood::operator()(double epsilon) const {
  if (mean_photons_ == 0.0) return 0.0;
  const double ce = std::cos(epsilon);
  const double se = std::sin(epsilon);
  const double two_m = 2.0 * mean_photons_;
  double acc = 0.0;
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    // cos(θ - ε); F = 2|α|²(1 + c)·x/(eˣ - 1) with x = 2|α|²(1 - c)
    const double c = cos_[i] * ce + sin_[i] * se;
    const double x = two_m * (1.0 - c);
    acc += weight_[i] * two_m * (1.0 + c) * bose_factor(x);
  }
  return acc;
}

double family_likelihood_information(double mean_photons, const PriorGrid& prior, double epsilon) {
  return FamilyLikelihood(mean_photons, prior)(epsilon);
}

double povm_likelihood_information(const CoherentModel& model, const Povm& povm, const PriorGrid& prior) {
  if (povm.dim() != model.dim()) {
    throw std::invalid_argument(fmt::format("povm_likelihood_information: POVM dimension {} vs model dimension {}",
                                            povm.dim(), model.dim()));
  }
  const FockVector base = coherent_state(model);
  const double floor = 1e-15 * *std::max_element(prior.density().begin(), prior.density().end());
  double acc = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (prior[i] <= floor) continue;
    const OutcomeDistribution dist = born_probabilities(povm, phase_evolve(base, prior.theta(i)));
    acc += fisher_information(dist) * prior[i];
  }
  return acc * prior.spacing();
}

VanTreesTerms van_trees_terms(const CoherentModel& model, double epsilon, const PriorGrid& prior) {
  return {family_likelihood_information(model.mean_photons(), prior, epsilon), prior_fisher(prior)};
}

VanTreesTerms van_trees_terms(const CoherentModel& model, const Povm& povm, const PriorGrid& prior) {
  return {povm_likelihood_information(model, povm, prior), prior_fisher(prior)};
}

double van_trees_information(const CoherentModel& model, double epsilon, const PriorGrid& prior) {
  return van_trees_terms(model, epsilon, prior).total();
}

double van_trees_information(const CoherentModel& model, const Povm& povm, const PriorGrid& prior) {
  return van_trees_terms(model, povm, prior).total();
}

double van_trees_n_copies(const CoherentModel& model, const Povm& povm, const PriorGrid& prior, std::size_t n) {
  if (n == 0) throw std::invalid_argument("van_trees_n_copies: n must be at least 1");
  return van_trees_terms(model, povm, prior).n_copies(n);
}

double van_trees_n_copies(const CoherentModel& model, double epsilon, const PriorGrid& prior, std::size_t n) {
  if (n == 0) throw std::invalid_argument("van_trees_n_copies: n must be at least 1");
  return van_trees_terms(model, epsilon, prior).n_copies(n);
}

double generalized_qfi_vq(const CoherentModel& model, const PriorGrid& prior) {
  return 4.0 * model.mean_photons() + prior_fisher(prior);
}

double zq_restricted_analytic(double mean_photons, double sigma) {
  return 2.0 * mean_photons * (std::exp(-0.5 * sigma * sigma) + 1.0) + 1.0 / (sigma * sigma);
}

double zq_restricted_analytic(const CoherentModel& model, double sigma) {
  return zq_restricted_analytic(model.mean_photons(), sigma);
}

}  // namespace vantrees
