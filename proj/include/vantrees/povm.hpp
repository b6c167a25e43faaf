#pragma once

// POVMs on the truncated Fock space: validation, the two-outcome projector
// family {|α(ε)⟩⟨α(ε)|, 1 - |α(ε)⟩⟨α(ε)|}, and measurements induced on the
// physical space by orthonormal bases of an enlarged space.

#include "vantrees/hilbert.hpp"
#include "vantrees/outcome.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace vantrees {

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kPositivityTol = 1e-8;
inline constexpr double kCompletenessTol = 1e-8;
inline constexpr double kProbabilityClamp = 1e-10;

class Povm {
 public:
  Povm() = default;
  /// Elements must share one square dimension; positivity and completeness
  /// are checked by validate(), not here.
  Povm(std::vector<Eigen::MatrixXcd> elements, std::vector<int> labels);

  std::size_t dim() const;
  std::size_t size() const { return elements_.size(); }
  const std::vector<Eigen::MatrixXcd>& elements() const { return elements_; }
  const std::vector<int>& labels() const { return labels_; }
  const Eigen::MatrixXcd& operator[](std::size_t k) const { return elements_[k]; }

 private:
  std::vector<Eigen::MatrixXcd> elements_;
  std::vector<int> labels_;
};

struct PovmDiagnostics {
  double max_hermiticity_error = 0.0;  // max |E - E†| entry over elements
  double min_eigenvalue = 0.0;         // smallest eigenvalue over elements
  double completeness_error = 0.0;     // max |Σ E - 1| entry
};

PovmDiagnostics diagnose(const Povm& povm);

/// Throws std::invalid_argument naming the first violated invariant.
void validate(const Povm& povm);

/// {P, 1 - P} with P = |α(ε)⟩⟨α(ε)|; labels (1, 2).
Povm projector_family(const CoherentModel& model, double epsilon);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of diag(R) absorbed into Q.
Eigen::MatrixXcd haar_unitary(std::size_t dim, std::mt19937_64& rng);

/// Outcome k of the projective measurement {|v_k⟩⟨v_k|} on the enlarged
/// space, restricted to its first `dim` coordinates: (E_k)_ij = V_ik V*_jk.
Povm povm_from_unitary(const Eigen::MatrixXcd& unitary, std::size_t dim);

/// Draws V from the Haar measure on U(enlarged_dim) with a generator seeded
/// by `seed` and returns povm_from_unitary(V, dim).
Povm random_projective_povm(std::size_t dim, std::size_t enlarged_dim, std::uint64_t seed);

/// p_ξ = ⟨ψ|E_ξ|ψ⟩ and dp_ξ/dθ = 2 Re⟨i n̂ ψ|E_ξ|ψ⟩ for a phase-encoded
/// state ψ = e^{i n̂ θ}ψ₀.
OutcomeDistribution born_probabilities(const Povm& povm, const FockVector& state);

void to_json(nlohmann::json& j, const Povm& povm);
void from_json(const nlohmann::json& j, Povm& povm);

}  // namespace vantrees
