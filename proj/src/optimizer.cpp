#include "vantrees/optimizer.hpp"

#include "vantrees/infotheory.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vantrees {

void to_json(nlohmann::json& j, const OptimizationReport& report) {
  j = nlohmann::json{{"best_value", report.best_value},
                     {"prior_term", report.prior_term},
                     {"samples_used", report.samples_used},
                     {"refinement_steps_accepted", report.refinement_steps_accepted},
                     {"converged", report.converged}};
  if (report.best_epsilon) j["best_epsilon"] = *report.best_epsilon;
  if (report.best_povm) j["best_povm"] = *report.best_povm;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : report.dimension_trace) {
    trace.push_back({{"enlarged_dim", t.enlarged_dim}, {"best_value", t.best_value}, {"samples", t.samples}});
  }
  j["dimension_trace"] = std::move(trace);
}

OptimizationReport optimize_restricted(const CoherentModel& model, const PriorGrid& prior,
                                       const RestrictedOptions& options) {
  if (options.scan_points < 3) throw std::invalid_argument("optimize_restricted: need at least three scan points");
  const FamilyLikelihood likelihood(model.mean_photons(), prior);
  const double step = kTwoPi / static_cast<double>(options.scan_points);

  OptimizationReport report;
  report.prior_term = prior_fisher(prior);

  double best_eps = 0.0;
  double best = -1.0;
  for (std::size_t j = 0; j < options.scan_points; ++j) {
    const double eps = static_cast<double>(j) * step;
    const double value = likelihood(eps);
    ++report.samples_used;
    if (value > best) {
      best = value;
      best_eps = eps;
      report.improvements.emplace_back(report.samples_used, best + report.prior_term);
    }
  }

  // golden section on the neighbouring scan cells
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_eps - step;
  double hi = best_eps + step;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = likelihood(x1);
  double f2 = likelihood(x2);
  report.samples_used += 2;
  while (hi - lo > options.tolerance) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = likelihood(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = likelihood(x2);
    }
    ++report.samples_used;
  }
  const double refined_eps = 0.5 * (lo + hi);
  const double refined = likelihood(refined_eps);
  ++report.samples_used;
  if (refined > best) {
    best = refined;
    best_eps = refined_eps;
    report.improvements.emplace_back(report.samples_used, best + report.prior_term);
  }

  double eps = std::fmod(best_eps, kTwoPi);
  if (eps < 0.0) eps += kTwoPi;
  report.best_epsilon = eps;
  report.best_value = best + report.prior_term;
  return report;
}

ProjectiveEvaluator::ProjectiveEvaluator(const CoherentModel& model, const PriorGrid& prior)
    : dim_(model.dim()), prior_term_(prior_fisher(prior)) {
  const FockVector base = coherent_state(model);
  const double floor = 1e-15 * *std::max_element(prior.density().begin(), prior.density().end());
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (prior[i] > floor) support.push_back(i);
  }
  const auto d = static_cast<Eigen::Index>(dim_);
  const auto k = static_cast<Eigen::Index>(support.size());
  states_.resize(d, k);
  derivatives_.resize(d, k);
  weights_.resize(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const std::size_t i = support[static_cast<std::size_t>(c)];
    const FockVector psi = phase_evolve(base, prior.theta(i));
    states_.col(c) = psi.amps();
    derivatives_.col(c) = phase_derivative(psi).amps();
    weights_[c] = prior[i] * prior.spacing();
  }
}

double ProjectiveEvaluator::operator()(const Eigen::MatrixXcd& unitary) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  if (unitary.rows() < d || unitary.rows() != unitary.cols()) {
    throw std::invalid_argument("ProjectiveEvaluator: unitary does not embed the model space");
  }
  // row k: ⟨v_k|ψ(θ_i)⟩ and ⟨v_k|∂ψ(θ_i)⟩
  const Eigen::MatrixXcd rows = unitary.topRows(d).adjoint();
  const Eigen::MatrixXcd amp = rows * states_;
  const Eigen::MatrixXcd damp = rows * derivatives_;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < amp.cols(); ++i) {
    double info = 0.0;
    for (Eigen::Index k = 0; k < amp.rows(); ++k) {
      const Complex a = amp(k, i);
      const double p = std::norm(a);
      if (p <= kOutcomeThreshold) continue;
      const double dp = 2.0 * (std::conj(damp(k, i)) * a).real();
      info += dp * dp / p;
    }
    acc += info * weights_[i];
  }
  return acc + prior_term_;
}

std::mt19937_64 candidate_stream(std::uint64_t seed, std::uint64_t enlarged_dim, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(enlarged_dim), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Eigen::MatrixXcd random_rotation(std::size_t dim, double step, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd h(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      h(i, j) = Complex(re, im);
    }
  }
  h = 0.5 * (h + h.adjoint()).eval();
  h /= h.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  Eigen::VectorXcd phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases[k] = std::polar(1.0, step * solver.eigenvalues()[k]);
  const Eigen::MatrixXcd& q = solver.eigenvectors();
  return q * phases.asDiagonal() * q.adjoint();
}

Eigen::MatrixXcd perturb_unitary(const Eigen::MatrixXcd& unitary, double step, std::mt19937_64& rng) {
  return random_rotation(static_cast<std::size_t>(unitary.rows()), step, rng) * unitary;
}

OptimizationReport optimize_montecarlo(const CoherentModel& model, const PriorGrid& prior,
                                       const MonteCarloOptions& options) {
  if (options.budget < 1) throw std::invalid_argument("optimize_montecarlo: budget must be at least 1");
  const ProjectiveEvaluator evaluate(model, prior);
  const std::size_t d = model.dim();

  OptimizationReport report;
  report.prior_term = evaluate.prior_term();
  report.converged = false;

  double best = -1.0;
  Eigen::MatrixXcd best_unitary;
  double previous_dim_best = 0.0;

  for (std::size_t extra = 0; extra <= options.max_extra_dims; ++extra) {
    const std::size_t big = d + extra;
    double dim_best = -1.0;
    for (std::size_t j = 0; j < options.budget; ++j) {
      auto rng = candidate_stream(options.seed, big, j);
      Eigen::MatrixXcd v = haar_unitary(big, rng);
      const double value = evaluate(v);
      ++report.samples_used;
      dim_best = std::max(dim_best, value);
      if (value > best) {
        best = value;
        best_unitary = std::move(v);
        report.improvements.emplace_back(report.samples_used, best);
      }
    }
    report.dimension_trace.push_back({big, dim_best, options.budget});
    if (extra > 0 && std::abs(dim_best - previous_dim_best) < options.convergence_tolerance * std::abs(dim_best)) {
      report.converged = true;
      break;
    }
    previous_dim_best = dim_best;
  }

  if (options.refine) {
    const std::size_t refine_budget = options.refine_budget > 0 ? options.refine_budget : 2 * options.budget;
    auto rng = candidate_stream(options.seed, 0, ~std::uint64_t{0});
    double step = options.initial_step;
    std::size_t failures = 0;
    for (std::size_t used = 0; used < refine_budget && step >= options.min_step; ++used) {
      const Eigen::MatrixXcd rotation = random_rotation(static_cast<std::size_t>(best_unitary.rows()), step, rng);
      Eigen::MatrixXcd trial = rotation * best_unitary;
      double value = evaluate(trial);
      ++report.samples_used;
      if (value <= best && options.antithetic && used + 1 < refine_budget) {
        // the opposite direction, e^{-iδH}
        trial = rotation.adjoint() * best_unitary;
        value = evaluate(trial);
        ++report.samples_used;
        ++used;
      }
      if (value > best) {
        best = value;
        best_unitary = std::move(trial);
        failures = 0;
        step *= options.expansion;
        ++report.refinement_steps_accepted;
        report.improvements.emplace_back(report.samples_used, best);
      } else if (++failures >= options.failures_before_halving) {
        step *= 0.5;
        failures = 0;
      }
    }
  }

  report.best_value = best;
  report.best_povm = povm_from_unitary(best_unitary, d);
  return report;
}

}  // namespace vantrees
