// vantrees-lab <experiment> --config FILE [--seed N] [--out DIR] [--alpha X] [--sigma X] [--n K]
//
// Exit codes: 0 success, 2 configuration error, 3 Monte-Carlo search did not
// converge (outputs are still written), 1 anything else.

#include "vantrees/experiments.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <optional>

int main(int argc, char** argv) {
  using namespace vantrees;

  CLI::App app{"Van Trees information and adaptive phase estimation experiments", "vantrees-lab"};
  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> alpha;
  std::optional<std::string> sigma;
  std::optional<std::size_t> n;
  bool allow_large_n = false;
  bool quiet = false;

  app.add_option("experiment", experiment, "fig1 | fig2 | scaling | zq-single | adaptive-single")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "scaling", "zq-single", "adaptive-single"}));
  app.add_option("--config", config_path, "INI config, or a CSV/JSON/SVG output of an earlier run")
      ->required();
  app.add_option("--seed", seed, "optimizer and initial-guess seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--alpha", alpha, "coherent amplitude |alpha| (fig1: collapses the range to this value)");
  app.add_option("--sigma", sigma, "Gaussian prior width; accepts pi/4 style values");
  app.add_option("--n", n, "number of measurements");
  app.add_flag("--allow-large-n", allow_large_n, "let fig2 run with n > 12");
  app.add_flag("-q,--quiet", quiet, "do not list the files written");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Experiment kind = parse_experiment(experiment);
    ExperimentConfig config = load_config(config_path, kind);
    if (seed) config.seed = *seed;
    if (out_dir) config.out_dir = *out_dir;
    if (alpha) {
      config.alpha = parse_number(*alpha);
      if (kind == Experiment::fig1) config.alpha_min = config.alpha_max = config.alpha;
    }
    if (sigma) config.sigma = parse_number(*sigma);
    if (n) config.n = *n;
    if (allow_large_n) config.allow_large_n = true;

    const ExperimentResult result = run_experiment(config);
    if (!quiet) {
      for (const auto& file : result.files) fmt::print("{}\n", file.string());
    }
    if (!result.converged) {
      fmt::print(stderr, "vantrees-lab: Monte-Carlo search did not converge over the enlarged dimensions\n");
      return 3;
    }
    return 0;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "vantrees-lab: config error: {}\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "vantrees-lab: invalid parameter: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "vantrees-lab: {}\n", e.what());
    return 1;
  }
}
