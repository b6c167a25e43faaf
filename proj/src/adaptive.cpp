#include "vantrees/adaptive.hpp"

#include "vantrees/infotheory.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace vantrees {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Outcome probability and θ-derivative of the family measurement at ε.
struct Branch {
  double prob;
  double dprob;
};

Branch family_branch(double mean_photons, double delta, int outcome) {
  const double half_sin = std::sin(0.5 * delta);
  const double x = 4.0 * mean_photons * half_sin * half_sin;
  const double p = std::exp(-x);
  const double dp = -2.0 * mean_photons * std::sin(delta) * p;
  if (outcome == 1) return {p, dp};
  return {-std::expm1(-x), -dp};
}

double log_likelihood(double mean_photons, std::span<const FamilyOutcome> history, double theta) {
  double acc = 0.0;
  for (const auto& m : history) {
    acc += std::log(std::max(family_branch(mean_photons, theta - m.epsilon, m.outcome).prob, 1e-300));
  }
  return acc;
}

void check_depth(std::size_t n) {
  if (n < 1) throw std::invalid_argument("adaptive run: n must be at least 1");
  if (n > kMaxTreeDepth) {
    throw std::invalid_argument(fmt::format("adaptive run: n = {} exceeds the tree depth limit {}", n, kMaxTreeDepth));
  }
}

// Weights of the periodic trapezoid rule for sorted θ_r in [-π, π).
std::vector<double> periodic_weights(std::span<const double> thetas) {
  const std::size_t m = thetas.size();
  std::vector<double> w(m);
  if (m == 1) {
    w[0] = kTwoPi;
    return w;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double next = i + 1 < m ? thetas[i + 1] : thetas[0] + kTwoPi;
    const double prev = i > 0 ? thetas[i - 1] : thetas[m - 1] - kTwoPi;
    w[i] = 0.5 * (next - prev);
  }
  return w;
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::fisher: return "fisher";
    case Scheme::vantrees: return "vantrees";
    case Scheme::fixed: return "fixed";
  }
  return "unknown";
}

std::string to_string(InitialGuess guess) { return guess == InitialGuess::zero ? "zero" : "random"; }

std::string to_string(VanTreesAveraging averaging) {
  return averaging == VanTreesAveraging::inverse_of_mean ? "inverse_of_mean" : "mean_of_inverse";
}

void to_json(nlohmann::json& j, const AdaptiveOptions& options) {
  j = nlohmann::json{{"grid_size", options.grid_size},
                     {"theta_points", options.theta_points},
                     {"initial_guess", to_string(options.initial_guess)},
                     {"seed", options.seed},
                     {"exclude_singular", options.exclude_singular},
                     {"averaging", to_string(options.averaging)},
                     {"scan_points", options.restricted.scan_points},
                     {"scan_tolerance", options.restricted.tolerance}};
}

void to_json(nlohmann::json& j, const AdaptiveRunReport& report) {
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& point : report.error_curve) {
    // non-finite errors serialize as null
    curve.push_back({{"step", point.step},
                     {"error", std::isfinite(point.error) ? nlohmann::json(point.error) : nlohmann::json()}});
  }
  j = nlohmann::json{{"scheme", to_string(report.scheme)},
                     {"n", report.n},
                     {"error_curve", std::move(curve)},
                     {"flagged", report.flagged},
                     {"tree_stats",
                      {{"nodes_evaluated", report.tree_stats.nodes_evaluated},
                       {"nodes_per_depth", report.tree_stats.nodes_per_depth},
                       {"prior_resets", report.tree_stats.prior_resets},
                       {"max_leaf_mass_error", report.tree_stats.max_leaf_mass_error}}},
                     {"config", report.config}};
  if (report.fixed_variant) j["fixed_variant"] = to_string(*report.fixed_variant);
  if (report.scheme != Scheme::vantrees && report.fixed_variant != Scheme::vantrees) {
    j["initial_guess"] = report.initial_guess;
  }
  if (report.scheme == Scheme::vantrees) {
    auto finite_or_null = [](const std::vector<double>& values) {
      nlohmann::json out = nlohmann::json::array();
      for (double v : values) out.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json());
      return out;
    };
    j["inverse_of_mean"] = finite_or_null(report.inverse_of_mean);
    j["mean_of_inverse"] = finite_or_null(report.mean_of_inverse);
  }
  if (report.epsilon) j["epsilon"] = *report.epsilon;
  if (report.likelihood_term) j["likelihood_term"] = *report.likelihood_term;
  if (report.prior_term) j["prior_term"] = *report.prior_term;
  if (report.fitted_constant) {
    j["fitted_constant"] = std::isfinite(*report.fitted_constant) ? nlohmann::json(*report.fitted_constant)
                                                                  : nlohmann::json();
  }
}

void write_csv(std::ostream& out, const AdaptiveRunReport& report) {
  out << "step,error\n";
  for (const auto& point : report.error_curve) out << fmt::format("{},{:.17g}\n", point.step, point.error);
}

std::vector<double> uniform_thetas(std::size_t count) {
  if (count < 1) throw std::invalid_argument("uniform_thetas: need at least one point");
  std::vector<double> out(count);
  for (std::size_t r = 0; r < count; ++r) out[r] = -kPi + kTwoPi * static_cast<double>(r) / static_cast<double>(count);
  return out;
}

double initial_guess(const AdaptiveOptions& options) {
  if (options.initial_guess == InitialGuess::zero) return 0.0;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(-kPi, kPi);
  return uniform(rng);
}

double ml_estimate(double mean_photons, std::span<const FamilyOutcome> history, std::size_t grid_size,
                   double previous) {
  if (grid_size < 3) throw std::invalid_argument("ml_estimate: grid too small");
  const double h = kTwoPi / static_cast<double>(grid_size);
  std::vector<double> loglik(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    loglik[i] = log_likelihood(mean_photons, history, -kPi + static_cast<double>(i) * h);
  }
  const auto [lo_it, hi_it] = std::minmax_element(loglik.begin(), loglik.end());
  const double top = *hi_it;
  if (top - *lo_it < 1e-12) return previous;

  auto f = [&](double theta) { return log_likelihood(mean_photons, history, theta); };

  struct Candidate {
    double theta;
    double value;
  };
  std::vector<Candidate> candidates;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double left = loglik[(i + grid_size - 1) % grid_size];
    const double right = loglik[(i + 1) % grid_size];
    if (loglik[i] < left || loglik[i] < right) continue;
    // peaks that a one-cell refinement cannot lift to the global maximum
    if (loglik[i] < top - 1.0) continue;
    double a = -kPi + static_cast<double>(i) * h - h;
    double b = a + 2.0 * h;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > 1e-9) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = f(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = f(x2);
      }
    }
    const double theta = wrap_angle(0.5 * (a + b));
    candidates.push_back({theta, f(theta)});
  }

  double best = -kInf;
  for (const auto& c : candidates) best = std::max(best, c.value);
  const double tie = 1e-9 * std::max(1.0, std::abs(best));
  double chosen = previous;
  double chosen_distance = kInf;
  for (const auto& c : candidates) {
    if (c.value < best - tie) continue;
    const double distance = angular_distance(c.theta, previous);
    if (distance < chosen_distance - 1e-12 || (std::abs(distance - chosen_distance) <= 1e-12 && c.theta < chosen)) {
      chosen = c.theta;
      chosen_distance = distance;
    }
  }
  return chosen;
}

AdaptiveRunReport run_fisher_adaptive(const CoherentModel& model, std::size_t n, std::span<const double> thetas,
                                      const AdaptiveOptions& options) {
  check_depth(n);
  if (thetas.empty()) throw std::invalid_argument("run_fisher_adaptive: empty θ_r grid");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (thetas[i] < -kPi || thetas[i] >= kPi || (i > 0 && thetas[i] <= thetas[i - 1])) {
      throw std::invalid_argument("run_fisher_adaptive: θ_r must be increasing within [-π, π)");
    }
  }
  const double m = model.mean_photons();

  AdaptiveRunReport report;
  report.scheme = Scheme::fisher;
  report.n = n;
  report.initial_guess = initial_guess(options);
  report.thetas.assign(thetas.begin(), thetas.end());
  report.config = options;
  report.tree_stats.nodes_per_depth.assign(n, 0);

  // ε at every measurement node; node i has children 2i+1 (outcome 1) and 2i+2.
  const std::size_t internal_nodes = (std::size_t{1} << n) - 1;
  std::vector<double> policy(internal_nodes);
  std::vector<FamilyOutcome> history;
  std::function<void(std::size_t, std::size_t, double)> build = [&](std::size_t node, std::size_t depth, double eps) {
    policy[node] = eps;
    ++report.tree_stats.nodes_evaluated;
    ++report.tree_stats.nodes_per_depth[depth];
    if (depth + 1 == n) return;
    for (int outcome = 1; outcome <= 2; ++outcome) {
      history.push_back({eps, outcome});
      const double next = ml_estimate(m, history, options.grid_size, eps);
      build(2 * node + static_cast<std::size_t>(outcome), depth + 1, next);
      history.pop_back();
    }
  };
  build(0, 0, report.initial_guess);

  // I_k(θ_r) for k = 1..n by propagating leaf probabilities and derivatives
  const std::vector<double> weights = periodic_weights(thetas);
  std::vector<std::vector<double>> info(n, std::vector<double>(thetas.size(), 0.0));
  std::vector<double> mass(n);
  for (std::size_t r = 0; r < thetas.size(); ++r) {
    const double theta = thetas[r];
    std::fill(mass.begin(), mass.end(), 0.0);
    std::function<void(std::size_t, std::size_t, double, double)> walk = [&](std::size_t node, std::size_t depth,
                                                                             double prob, double dprob) {
      for (int outcome = 1; outcome <= 2; ++outcome) {
        const Branch b = family_branch(m, theta - policy[node], outcome);
        const double p = prob * b.prob;
        const double dp = dprob * b.prob + prob * b.dprob;
        mass[depth] += p;
        if (p > 1e-300) info[depth][r] += dp * dp / p;
        if (depth + 1 < n) walk(2 * node + static_cast<std::size_t>(outcome), depth + 1, p, dp);
      }
    };
    walk(0, 0, 1.0, 0.0);
    for (double total : mass) {
      report.tree_stats.max_leaf_mass_error = std::max(report.tree_stats.max_leaf_mass_error, std::abs(total - 1.0));
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    double weight = 0.0;
    std::size_t flagged = 0;
    for (std::size_t r = 0; r < thetas.size(); ++r) {
      if (info[k][r] < kMinInformation) {
        ++flagged;
        if (options.exclude_singular) continue;
        acc = kInf;
        weight += weights[r];
        continue;
      }
      acc += weights[r] / info[k][r];
      weight += weights[r];
    }
    report.flagged.push_back(flagged);
    // (1/2π)∫ 1/I_k dθ_r; with exclusions, averaged over the kept θ_r
    const double error = options.exclude_singular ? (weight > 0.0 ? acc / weight : kInf) : acc / kTwoPi;
    report.error_curve.push_back({k + 1, error});
  }
  report.final_information = info[n - 1];
  return report;
}

AdaptiveRunReport run_fisher_adaptive(const CoherentModel& model, std::size_t n, const AdaptiveOptions& options) {
  const std::vector<double> thetas = uniform_thetas(options.theta_points);
  return run_fisher_adaptive(model, n, thetas, options);
}

AdaptiveRunReport run_vantrees_adaptive(const CoherentModel& model, std::size_t n, const AdaptiveOptions& options) {
  check_depth(n);
  const double m = model.mean_photons();

  AdaptiveRunReport report;
  report.scheme = Scheme::vantrees;
  report.n = n;
  report.config = options;
  report.tree_stats.nodes_per_depth.assign(n, 0);

  std::vector<double> inverse_z(n, 0.0);
  std::vector<double> mean_z(n, 0.0);
  std::vector<double> reach(n, 0.0);
  const PriorGrid flat = flat_prior(options.grid_size);
  const std::vector<double> grid = flat.thetas();

  std::function<void(const PriorGrid&, std::size_t, double)> visit = [&](const PriorGrid& prior, std::size_t depth,
                                                                         double weight) {
    ++report.tree_stats.nodes_evaluated;
    ++report.tree_stats.nodes_per_depth[depth];
    const OptimizationReport best = optimize_restricted(model, prior, options.restricted);
    reach[depth] += weight;
    inverse_z[depth] += best.best_value > 0.0 ? weight / best.best_value : (weight > 0.0 ? kInf : 0.0);
    mean_z[depth] += weight * best.best_value;
    if (depth + 1 == n) return;

    const double eps = *best.best_epsilon;
    for (int outcome = 1; outcome <= 2; ++outcome) {
      std::vector<double> likelihood(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) likelihood[i] = family_branch(m, grid[i] - eps, outcome).prob;
      const double marginal = marginal_probability(prior, likelihood);
      try {
        visit(bayes_update(prior, likelihood), depth + 1, weight * marginal);
      } catch (const std::domain_error&) {
        ++report.tree_stats.prior_resets;
        visit(flat, depth + 1, weight * marginal);
      }
    }
  };
  visit(flat, 0, 1.0);

  for (std::size_t k = 0; k < n; ++k) {
    report.tree_stats.max_leaf_mass_error = std::max(report.tree_stats.max_leaf_mass_error, std::abs(reach[k] - 1.0));
    report.mean_of_inverse.push_back(inverse_z[k]);
    report.inverse_of_mean.push_back(mean_z[k] > 0.0 ? 1.0 / mean_z[k] : kInf);
    const double error = options.averaging == VanTreesAveraging::inverse_of_mean ? report.inverse_of_mean.back()
                                                                                 : report.mean_of_inverse.back();
    report.flagged.push_back(std::isfinite(error) ? 0 : 1);
    report.error_curve.push_back({k + 1, error});
  }
  return report;
}

double fit_scaling_constant(std::span<const ErrorPoint> curve) {
  if (curve.empty()) throw std::invalid_argument("fit_scaling_constant: empty curve");
  const std::size_t n = curve.back().step;
  const std::size_t first = std::max<std::size_t>(1, (n + 1) / 2);
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& point : curve) {
    if (point.step < first) continue;
    acc += static_cast<double>(point.step) * point.error;
    ++count;
  }
  return acc / static_cast<double>(count);
}

double last_quartile_relative_slope(std::span<const ErrorPoint> curve) {
  if (curve.empty()) throw std::invalid_argument("last_quartile_relative_slope: empty curve");
  const std::size_t n = curve.size();
  const std::size_t start = n - std::max<std::size_t>(1, n / 4);
  const auto scaled = [&](std::size_t i) { return static_cast<double>(curve[i].step) * curve[i].error; };
  const double last = scaled(n - 1);
  if (!std::isfinite(last)) return kInf;
  return std::abs(last - scaled(start)) / std::abs(last);
}

AdaptiveRunReport run_fixed_povm(const CoherentModel& model, std::size_t n, Scheme variant,
                                 const AdaptiveOptions& options) {
  if (n < 1) throw std::invalid_argument("run_fixed_povm: n must be at least 1");
  if (variant == Scheme::fixed) throw std::invalid_argument("run_fixed_povm: variant must be fisher or vantrees");

  AdaptiveRunReport report;
  report.scheme = Scheme::fixed;
  report.fixed_variant = variant;
  report.n = n;
  report.config = options;

  if (variant == Scheme::fisher) {
    report.initial_guess = initial_guess(options);
    report.epsilon = report.initial_guess;
    report.thetas = uniform_thetas(options.theta_points);
    const std::vector<double> weights = periodic_weights(report.thetas);
    report.final_information.resize(report.thetas.size());
    double single = 0.0;  // (1/2π)∫ 1/F
    std::size_t singular = 0;
    for (std::size_t r = 0; r < report.thetas.size(); ++r) {
      const double f = family_fisher(model.mean_photons(), report.thetas[r] - report.initial_guess);
      report.final_information[r] = static_cast<double>(n) * f;
      if (f < kMinInformation) {
        ++singular;
        if (!options.exclude_singular) single = kInf;
        continue;
      }
      single += weights[r] / f;
    }
    if (options.exclude_singular) {
      double kept = 0.0;
      for (std::size_t r = 0; r < report.thetas.size(); ++r) {
        if (family_fisher(model.mean_photons(), report.thetas[r] - report.initial_guess) >= kMinInformation) {
          kept += weights[r];
        }
      }
      single = kept > 0.0 ? single / kept : kInf;
    } else {
      single /= kTwoPi;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      report.error_curve.push_back({k, single / static_cast<double>(k)});
      report.flagged.push_back(singular);
    }
  } else {
    const PriorGrid flat = flat_prior(options.grid_size);
    const OptimizationReport best = optimize_restricted(model, flat, options.restricted);
    report.epsilon = *best.best_epsilon;
    const VanTreesTerms terms = van_trees_terms(model, *report.epsilon, flat);
    report.likelihood_term = terms.likelihood;
    report.prior_term = terms.prior;
    for (std::size_t k = 1; k <= n; ++k) {
      const double z = terms.n_copies(k);
      report.error_curve.push_back({k, z > 0.0 ? 1.0 / z : kInf});
      report.flagged.push_back(z > 0.0 ? 0 : 1);
    }
  }
  report.fitted_constant = fit_scaling_constant(report.error_curve);
  return report;
}

double calibrate_alpha(double target_constant, const AdaptiveOptions& options) {
  if (!(target_constant > 0.0)) throw std::invalid_argument("calibrate_alpha: target must be positive");
  const PriorGrid flat = flat_prior(options.grid_size);
  // under the flat prior every ε gives the same likelihood term
  auto constant = [&](double alpha) { return 1.0 / family_likelihood_information(alpha * alpha, flat, 0.0); };
  double lo = 1e-3;
  double hi = 1.0;
  while (constant(hi) > target_constant) {
    hi *= 2.0;
    if (hi > 64.0) throw std::domain_error("calibrate_alpha: target constant not reachable");
  }
  if (constant(lo) < target_constant) throw std::domain_error("calibrate_alpha: target constant not reachable");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (constant(mid) > target_constant ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace vantrees
