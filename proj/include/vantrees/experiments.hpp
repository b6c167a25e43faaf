#pragma once

// Batch experiments behind the vantrees-lab command: config parsing, the five
// experiment kinds and their CSV/JSON/SVG outputs.

#include "vantrees/adaptive.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace vantrees {

/// Bad or inconsistent configuration, unwritable output directory (exit 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { fig1, fig2, scaling, zq_single, adaptive_single };

std::string to_string(Experiment experiment);
Experiment parse_experiment(const std::string& name);

/// Which run adaptive-single performs.
enum class SingleScheme { fisher, vantrees, fixed_fisher, fixed_vantrees };

std::string to_string(SingleScheme scheme);

struct ExperimentConfig {
  Experiment experiment = Experiment::fig1;

  // [model]
  double alpha = 1.0;
  double alpha_min = 0.0;
  double alpha_max = 1.0;
  double alpha_step = 0.1;
  bool calibrate = false;          // scaling: replace alpha by the calibrated value
  double calibration_target = 0.8;

  // [prior]
  double sigma = 0.78539816339744828;  // π/4
  std::size_t grid = kDefaultGridSize;

  // [optimizer]
  std::size_t budget = 2000;
  std::uint64_t seed = 1;
  std::size_t scan_points = 720;
  std::size_t refine_budget = 0;
  std::size_t max_extra_dims = 8;

  // [adaptive]
  std::size_t n = 8;
  std::size_t theta_points = 720;
  InitialGuess initial_guess = InitialGuess::random;
  bool exclude_singular = false;
  bool allow_large_n = false;
  VanTreesAveraging averaging = VanTreesAveraging::inverse_of_mean;
  SingleScheme scheme = SingleScheme::vantrees;

  // [output]
  std::filesystem::path out_dir = ".";
  std::vector<std::string> formats{"csv", "json", "svg"};

  bool wants(const std::string& format) const;
};

/// Parses `key = value` sections. Numbers accept pi, 2pi, pi/4, 3*pi/4.
/// Unknown sections or keys are errors.
ExperimentConfig parse_config(const std::string& text, Experiment experiment);

/// Reads an INI file, or re-reads the config embedded in a CSV, JSON or SVG
/// output of an earlier run.
ExperimentConfig load_config(const std::filesystem::path& path, Experiment experiment);

/// Every field, one `key = value` per line, doubles at 17 significant digits.
/// parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

/// Throws ConfigError on empty ranges, non-positive σ and similar.
void validate(const ExperimentConfig& config);

/// Parses a number with the pi shorthands above. Throws ConfigError.
double parse_number(const std::string& text);

struct ExperimentResult {
  std::vector<std::filesystem::path> files;
  bool converged = true;  // false when a Monte-Carlo search missed its tolerance
};

ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentResult cmd_fig1(const ExperimentConfig& config);
ExperimentResult cmd_fig2(const ExperimentConfig& config);
ExperimentResult cmd_scaling(const ExperimentConfig& config);
ExperimentResult cmd_zq_single(const ExperimentConfig& config);
ExperimentResult cmd_adaptive_single(const ExperimentConfig& config);

/// Data rows of a CSV written by this module: `#` lines and the column
/// header are skipped.
std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path);

}  // namespace vantrees
