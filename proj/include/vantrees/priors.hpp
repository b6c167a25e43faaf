#pragma once

// Densities on a uniform grid over [-π, π): priors, Bayes updates, moments
// and the prior's own Fisher information ∫(λ')²/λ dθ.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace vantrees {

inline constexpr std::size_t kDefaultGridSize = 2048;

class PriorGrid {
 public:
  /// `density` is sampled at θ_i = -π + i·2π/M and renormalized to unit
  /// integral. `periodic` selects wrap-around derivatives at the ends.
  PriorGrid(std::vector<double> density, bool periodic);

  std::size_t size() const { return density_.size(); }
  double spacing() const { return spacing_; }
  double theta(std::size_t i) const;
  std::vector<double> thetas() const;
  const std::vector<double>& density() const { return density_; }
  double operator[](std::size_t i) const { return density_[i]; }
  bool periodic() const { return periodic_; }

  /// Trapezoid integral of f·λ over the grid; f holds one value per point.
  double expectation(std::span<const double> f) const;

 private:
  std::vector<double> density_;
  double spacing_;
  bool periodic_;
};

/// Trapezoid integral over the periodic grid: h Σ f_i.
double integrate(std::span<const double> values, double spacing);

/// Unwrapped Gaussian exp(-θ²/2σ²) restricted to [-π, π) and renormalized.
PriorGrid gaussian_prior(double sigma, std::size_t grid_size = kDefaultGridSize);

/// λ₀(θ) = 1/2π.
PriorGrid flat_prior(std::size_t grid_size = kDefaultGridSize);

/// All mass on one grid point.
PriorGrid delta_prior(std::size_t index, std::size_t grid_size = kDefaultGridSize);

/// λ₁ ∝ p(ξ|θ)λ(θ). Throws std::domain_error when the normalizer is below
/// kMinNormalizer (the outcome is impossible under the prior).
PriorGrid bayes_update(const PriorGrid& prior, std::span<const double> likelihood);

/// ∫ p(ξ|θ)λ(θ)dθ, the marginal probability of the outcome.
double marginal_probability(const PriorGrid& prior, std::span<const double> likelihood);

inline constexpr double kMinNormalizer = 1e-300;

struct PosteriorSummary {
  double estimate;  // linear mean on [-π, π), radians
  double variance;  // radians²
};

PosteriorSummary posterior_mean_and_risk(const PriorGrid& prior);

/// ∫(λ')²/λ dθ with central differences; points with λ < 1e-15·max λ are
/// left out of the quotient.
double prior_fisher(const PriorGrid& prior);

/// Two columns, `theta,density`, at 17 significant digits.
void write_csv(std::ostream& out, const PriorGrid& prior);

}  // namespace vantrees
