#pragma once

// Maximization of the Van Trees information over measurements:
//  * over the two-outcome projector family, by an ε scan plus golden-section
//    refinement;
//  * over all POVMs, by Monte-Carlo sampling of Haar-random orthonormal bases
//    of an enlarged space, followed by a local descent on the unitary group.

#include "vantrees/hilbert.hpp"
#include "vantrees/povm.hpp"
#include "vantrees/priors.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace vantrees {

struct DimensionTrace {
  std::size_t enlarged_dim;
  double best_value;
  std::size_t samples;
};

struct OptimizationReport {
  double best_value = 0.0;     // likelihood term + prior term
  double prior_term = 0.0;
  std::optional<double> best_epsilon;   // restricted family, in [0, 2π)
  std::optional<Povm> best_povm;        // Monte-Carlo search
  std::size_t samples_used = 0;
  std::vector<DimensionTrace> dimension_trace;
  /// (evaluation index, best value so far) recorded at every improvement.
  std::vector<std::pair<std::size_t, double>> improvements;
  std::size_t refinement_steps_accepted = 0;
  bool converged = true;
};

void to_json(nlohmann::json& j, const OptimizationReport& report);

struct RestrictedOptions {
  std::size_t scan_points = 720;
  double tolerance = 1e-6;  // golden-section bracket width, radians
};

/// max over ε of ∫F(θ, ε)λ(θ)dθ, plus ∫(λ')²/λ.
OptimizationReport optimize_restricted(const CoherentModel& model, const PriorGrid& prior,
                                       const RestrictedOptions& options = {});

struct MonteCarloOptions {
  std::size_t budget = 2000;             // random bases per enlarged dimension
  std::uint64_t seed = 1;
  std::size_t max_extra_dims = 8;        // D runs from d to d + max_extra_dims
  double convergence_tolerance = 5e-3;   // relative change between consecutive D
  bool refine = true;
  /// Evaluations granted to the descent; 0 means 2·budget.
  std::size_t refine_budget = 0;
  double initial_step = 0.1;
  double min_step = 1e-4;
  std::size_t failures_before_halving = 20;
  bool antithetic = true;   // retry e^{-iδH} after a failed e^{iδH}
  double expansion = 1.5;   // step growth on acceptance
};

OptimizationReport optimize_montecarlo(const CoherentModel& model, const PriorGrid& prior,
                                       const MonteCarloOptions& options = {});

/// Van Trees information of the rank-one measurement {V_{:d,k} V_{:d,k}†}
/// induced by a unitary on the enlarged space, evaluated on a fixed prior.
/// Agrees with van_trees_information(model, povm_from_unitary(V, d), prior).
class ProjectiveEvaluator {
 public:
  ProjectiveEvaluator(const CoherentModel& model, const PriorGrid& prior);

  double operator()(const Eigen::MatrixXcd& unitary) const;
  double prior_term() const { return prior_term_; }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  Eigen::MatrixXcd states_;       // d × K, |α(θ_i)⟩ on supported grid points
  Eigen::MatrixXcd derivatives_;  // d × K, i n̂ |α(θ_i)⟩
  Eigen::VectorXd weights_;       // λ(θ_i)·h
  double prior_term_;
};

/// Generator for candidate `index` at enlarged dimension D; independent of
/// evaluation order.
std::mt19937_64 candidate_stream(std::uint64_t seed, std::uint64_t enlarged_dim, std::uint64_t index);

/// e^{iδH} for a random Hermitian H of unit Frobenius norm.
Eigen::MatrixXcd random_rotation(std::size_t dim, double step, std::mt19937_64& rng);

/// e^{iδH}·V.
Eigen::MatrixXcd perturb_unitary(const Eigen::MatrixXcd& unitary, double step, std::mt19937_64& rng);

}  // namespace vantrees
