#pragma once

#include <vector>

namespace vantrees {

/// Outcome probabilities p(ξ|θ) at one θ together with their θ-derivatives.
struct OutcomeDistribution {
  std::vector<double> probs;
  std::vector<double> dprobs;  // radians⁻¹

  std::size_t size() const { return probs.size(); }
};

/// Throws std::invalid_argument unless probs ≥ 0, Σprobs = 1 within 1e-10
/// and Σdprobs = 0 within 1e-8.
void validate(const OutcomeDistribution& dist);

}  // namespace vantrees
