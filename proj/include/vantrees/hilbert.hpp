#pragma once

// Truncated Fock-space numerics for a single bosonic mode: coherent states,
// the phase shift e^{i n θ}, and overlaps between phase-shifted states.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace vantrees {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Tail mass Σ_{n≥d} allowed when a truncation dimension is chosen.
inline constexpr double kTruncationTail = 1e-12;

/// Maps an angle into [-π, π).
double wrap_angle(double theta);

/// Circular distance between two angles, in [0, π].
double angular_distance(double a, double b);

/// Amplitude vector in the number basis; index n is the photon number.
class FockVector {
 public:
  FockVector() = default;
  explicit FockVector(Eigen::VectorXcd amps);

  static FockVector basis(std::size_t dim, std::size_t n);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amps() const { return amps_; }
  Complex operator[](std::size_t n) const { return amps_[static_cast<Eigen::Index>(n)]; }

  double norm() const { return amps_.norm(); }

  /// ⟨this|other⟩ (antilinear in this).
  Complex inner(const FockVector& other) const;

 private:
  Eigen::VectorXcd amps_;
};

/// Poisson tail Σ_{n≥d} e^{-|α|²}|α|^{2n}/n!, summed directly from n=d upward.
double poisson_tail_mass(double mean_photons, std::size_t dim);

/// Smallest d whose Poisson tail mass is below kTruncationTail.
std::size_t truncation_dimension(Complex alpha);

/// Coherent amplitude α together with the truncation dimension it lives in.
class CoherentModel {
 public:
  /// Picks the smallest admissible dimension.
  explicit CoherentModel(Complex alpha);
  /// Throws std::invalid_argument if `dim` leaves more than kTruncationTail
  /// of the photon-number distribution outside the space.
  CoherentModel(Complex alpha, std::size_t dim);

  Complex alpha() const { return alpha_; }
  double mean_photons() const { return std::norm(alpha_); }
  std::size_t dim() const { return dim_; }

 private:
  Complex alpha_;
  std::size_t dim_;
};

/// |α⟩ truncated to model.dim(), built by the recurrence a_n = a_{n-1} α/√n.
FockVector coherent_state(const CoherentModel& model);

/// e^{i n̂ θ}|ψ⟩.
FockVector phase_evolve(const FockVector& state, double theta);

/// ∂_θ of e^{i n̂ θ}|ψ⟩ at the given point, i.e. i n̂ |ψ⟩.
FockVector phase_derivative(const FockVector& state);

/// |α(θ)⟩ = e^{i n̂ θ}|α⟩.
FockVector phase_shifted_coherent(const CoherentModel& model, double theta);

/// |⟨α(θ)|α(ε)⟩|² from the truncated inner product.
double overlap_probability(const CoherentModel& model, double theta, double epsilon);

/// exp(-2|α|²(1 - cos(θ - ε))), the untruncated closed form.
double overlap_probability_closed_form(double mean_photons, double delta);

}  // namespace vantrees
