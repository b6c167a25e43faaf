#pragma once

// Adaptive phase estimation with the two-outcome projector family, evaluated
// by exact enumeration of the binary outcome tree.
//
// Fisher-adaptive: measure with ε = current maximum-likelihood estimate,
// starting from an initial guess; the error after k steps is the θ_r-average
// of 1/I_k(θ_r), I_k being the Fisher information of the 2^k outcome strings.
//
// Van-Trees-adaptive: at every node, measure with the ε that maximizes the
// Van Trees information Z of the node's posterior; the error after k steps
// combines Z over the depth-(k-1) nodes weighted by branch probability.

#include "vantrees/hilbert.hpp"
#include "vantrees/optimizer.hpp"
#include "vantrees/priors.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vantrees {

/// Depth beyond which tree enumeration is refused.
inline constexpr std::size_t kMaxTreeDepth = 20;
/// I_k(θ_r) below this is reported as an infinite error.
inline constexpr double kMinInformation = 1e-10;

enum class Scheme { fisher, vantrees, fixed };
enum class InitialGuess { random, zero };

/// How the Van-Trees-adaptive error at step k combines the depth-(k-1) nodes:
/// 1/Σ w·Z (inverse of the outcome-averaged information) or Σ w/Z.
enum class VanTreesAveraging { inverse_of_mean, mean_of_inverse };

std::string to_string(Scheme scheme);
std::string to_string(InitialGuess guess);
std::string to_string(VanTreesAveraging averaging);

struct AdaptiveOptions {
  std::size_t grid_size = kDefaultGridSize;  // posterior and likelihood grid
  std::size_t theta_points = 720;            // true values θ_r for the Fisher average
  InitialGuess initial_guess = InitialGuess::random;
  std::uint64_t seed = 1;
  bool exclude_singular = false;
  VanTreesAveraging averaging = VanTreesAveraging::inverse_of_mean;
  RestrictedOptions restricted;
};

void to_json(nlohmann::json& j, const AdaptiveOptions& options);

struct ErrorPoint {
  std::size_t step;
  double error;  // radians², +inf when flagged
};

struct TreeStats {
  std::size_t nodes_evaluated = 0;
  std::vector<std::size_t> nodes_per_depth;
  std::size_t prior_resets = 0;
  /// max over θ_r (or over the prior average) and depth of |Σ leaf prob - 1|
  double max_leaf_mass_error = 0.0;
};

struct AdaptiveRunReport {
  Scheme scheme = Scheme::fisher;
  std::optional<Scheme> fixed_variant;  // set when scheme == fixed
  std::size_t n = 0;
  std::vector<ErrorPoint> error_curve;
  std::vector<std::size_t> flagged;     // per step: θ_r with I_k < kMinInformation
  TreeStats tree_stats;
  double initial_guess = 0.0;           // θ₁ of the Fisher schemes
  std::vector<double> thetas;           // θ_r grid (Fisher schemes)
  std::vector<double> final_information;  // I_n(θ_r) (Fisher schemes)
  std::optional<double> epsilon;        // fixed measurement (fixed schemes)
  std::optional<double> likelihood_term;  // single-copy A (fixed Van Trees)
  std::optional<double> prior_term;       // B (fixed Van Trees)
  std::optional<double> fitted_constant;  // c in σ² ≈ c/n (fixed schemes)
  /// Van-Trees-adaptive: both averaging conventions, whichever one
  /// error_curve follows.
  std::vector<double> inverse_of_mean;
  std::vector<double> mean_of_inverse;
  nlohmann::json config;
};

void to_json(nlohmann::json& j, const AdaptiveRunReport& report);

/// `step,error` rows at 17 significant digits.
void write_csv(std::ostream& out, const AdaptiveRunReport& report);

/// θ_r = -π + 2πr/N, r = 0..N-1.
std::vector<double> uniform_thetas(std::size_t count);

/// θ₁ for the Fisher schemes: 0, or uniform on [-π, π) from the seed.
double initial_guess(const AdaptiveOptions& options);

AdaptiveRunReport run_fisher_adaptive(const CoherentModel& model, std::size_t n, std::span<const double> thetas,
                                      const AdaptiveOptions& options = {});
AdaptiveRunReport run_fisher_adaptive(const CoherentModel& model, std::size_t n,
                                      const AdaptiveOptions& options = {});

/// Starts from the flat prior.
AdaptiveRunReport run_vantrees_adaptive(const CoherentModel& model, std::size_t n,
                                        const AdaptiveOptions& options = {});

/// The same measurement on every copy: ε = θ₁ for `fisher`, the Van Trees
/// optimum under the flat prior for `vantrees`.
AdaptiveRunReport run_fixed_povm(const CoherentModel& model, std::size_t n, Scheme variant,
                                 const AdaptiveOptions& options = {});

/// Mean of k·σ²(k) over k = ⌈n/2⌉..n.
double fit_scaling_constant(std::span<const ErrorPoint> curve);

/// |y_n - y_m| / |y_n| for y_k = k·σ²(k), m the first step of the last quarter.
double last_quartile_relative_slope(std::span<const ErrorPoint> curve);

/// |α| at which the fixed Van Trees scheme gives n·σ²(n) = target under the
/// flat prior.
double calibrate_alpha(double target_constant, const AdaptiveOptions& options = {});

/// Maximum-likelihood phase after the given family measurements, searched on
/// a uniform grid of `grid_size` points and refined locally. Ties go to the
/// candidate closest to `previous`; a flat likelihood returns `previous`.
struct FamilyOutcome {
  double epsilon;
  int outcome;  // 1: projector, 2: complement
};
double ml_estimate(double mean_photons, std::span<const FamilyOutcome> history, std::size_t grid_size,
                   double previous);

}  // namespace vantrees
