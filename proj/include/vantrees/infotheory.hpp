#pragma once

// Information functionals: classical Fisher information of an outcome
// distribution, Van Trees information of a measurement under a prior, its
// n-copy form, the pointwise-maximized bound V_Q, and closed forms for the
// phase-shifted coherent-state model.

#include "vantrees/hilbert.hpp"
#include "vantrees/outcome.hpp"
#include "vantrees/povm.hpp"
#include "vantrees/priors.hpp"

#include <cstddef>

namespace vantrees {

/// Outcomes with p below this contribute nothing, provided |dp| ≤ kSingularDerivative.
inline constexpr double kOutcomeThreshold = 1e-12;
inline constexpr double kSingularDerivative = 1e-6;

/// Σ_ξ (dp_ξ)²/p_ξ. Throws std::domain_error if an outcome has p below
/// kOutcomeThreshold but |dp| above kSingularDerivative.
double fisher_information(const OutcomeDistribution& dist);

/// p(θ, ε) = exp(-2|α|²(1 - cos(θ - ε))) and its θ-derivative.
double family_probability(double mean_photons, double delta);
double family_probability_derivative(double mean_photons, double delta);

/// Fisher information of {|α(ε)⟩⟨α(ε)|, 1 - |α(ε)⟩⟨α(ε)|} at θ, in the
/// singularity-free form 4|α|² cos²(Δ/2) · x/(eˣ - 1), x = 4|α|² sin²(Δ/2).
double family_fisher(double mean_photons, double delta);
double family_fisher(const CoherentModel& model, double theta, double epsilon);

/// The two summands of the Van Trees information: the prior-averaged Fisher
/// information of the measurement and the prior's own Fisher information.
struct VanTreesTerms {
  double likelihood = 0.0;
  double prior = 0.0;

  double total() const { return likelihood + prior; }
  /// n·likelihood + prior, the value for n identical independent measurements.
  double n_copies(std::size_t n) const { return static_cast<double>(n) * likelihood + prior; }
};

/// ∫ F(θ, ε) λ(θ) dθ for the projector family.
double family_likelihood_information(double mean_photons, const PriorGrid& prior, double epsilon);

/// ∫ Σ_ξ (∂_θ p_ξ)²/p_ξ λ(θ) dθ for an arbitrary POVM on the model's space.
double povm_likelihood_information(const CoherentModel& model, const Povm& povm, const PriorGrid& prior);

VanTreesTerms van_trees_terms(const CoherentModel& model, double epsilon, const PriorGrid& prior);
VanTreesTerms van_trees_terms(const CoherentModel& model, const Povm& povm, const PriorGrid& prior);

double van_trees_information(const CoherentModel& model, double epsilon, const PriorGrid& prior);
double van_trees_information(const CoherentModel& model, const Povm& povm, const PriorGrid& prior);

/// n·(likelihood term) + prior term. Throws std::invalid_argument for n = 0.
double van_trees_n_copies(const CoherentModel& model, const Povm& povm, const PriorGrid& prior, std::size_t n);
double van_trees_n_copies(const CoherentModel& model, double epsilon, const PriorGrid& prior, std::size_t n);

/// 4|α|² + ∫(λ')²/λ: the per-θ optimum 4|α|² is independent of θ.
double generalized_qfi_vq(const CoherentModel& model, const PriorGrid& prior);

/// 2|α|²(e^{-σ²/2} + 1) + 1/σ², valid for |α|² ≪ 1.
double zq_restricted_analytic(double mean_photons, double sigma);
double zq_restricted_analytic(const CoherentModel& model, double sigma);

}  // namespace vantrees

namespace vantrees {

/// ε ↦ ∫ F(θ, ε) λ(θ) dθ for one prior, with the grid's cos θ, sin θ and
/// quadrature weights cached so repeated ε evaluations are cheap.
class FamilyLikelihood {
 public:
  FamilyLikelihood(double mean_photons, const PriorGrid& prior);

  double operator()(double epsilon) const;

 private:
  double mean_photons_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  std::vector<double> weight_;
};

}  // namespace vantrees
