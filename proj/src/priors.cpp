#include "vantrees/priors.hpp"

#include "vantrees/hilbert.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace vantrees {

double integrate(std::span<const double> values, double spacing) {
  return spacing * std::accumulate(values.begin(), values.end(), 0.0);
}

PriorGrid::PriorGrid(std::vector<double> density, bool periodic)
    : density_(std::move(density)), spacing_(0.0), periodic_(periodic) {
  if (density_.size() < 2) throw std::invalid_argument("PriorGrid: need at least two grid points");
  spacing_ = kTwoPi / static_cast<double>(density_.size());
  for (double v : density_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("PriorGrid: density must be finite and non-negative");
  }
  const double mass = integrate(density_, spacing_);
  if (!(mass > 0.0)) throw std::invalid_argument("PriorGrid: density has zero mass");
  for (double& v : density_) v /= mass;
}

double PriorGrid::theta(std::size_t i) const { return -kPi + static_cast<double>(i) * spacing_; }

std::vector<double> PriorGrid::thetas() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = theta(i);
  return out;
}

double PriorGrid::expectation(std::span<const double> f) const {
  if (f.size() != size()) throw std::invalid_argument("PriorGrid::expectation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < size(); ++i) acc += f[i] * density_[i];
  return acc * spacing_;
}

PriorGrid gaussian_prior(double sigma, std::size_t grid_size) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument(fmt::format("gaussian_prior: sigma must be positive, got {}", sigma));
  }
  if (grid_size < 3) throw std::invalid_argument("gaussian_prior: need at least three grid points");
  std::vector<double> density(grid_size);
  const double step = kTwoPi / static_cast<double>(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double theta = -kPi + static_cast<double>(i) * step;
    density[i] = std::exp(-theta * theta / (2.0 * sigma * sigma));
  }
  return PriorGrid(std::move(density), false);
}

PriorGrid flat_prior(std::size_t grid_size) {
  return PriorGrid(std::vector<double>(grid_size, 1.0 / kTwoPi), true);
}

PriorGrid delta_prior(std::size_t index, std::size_t grid_size) {
  if (index >= grid_size) throw std::invalid_argument("delta_prior: index outside the grid");
  std::vector<double> density(grid_size, 0.0);
  density[index] = 1.0;
  return PriorGrid(std::move(density), true);
}

double marginal_probability(const PriorGrid& prior, std::span<const double> likelihood) {
  return prior.expectation(likelihood);
}

PriorGrid bayes_update(const PriorGrid& prior, std::span<const double> likelihood) {
  if (likelihood.size() != prior.size()) throw std::invalid_argument("bayes_update: likelihood size mismatch");
  std::vector<double> posterior(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (!(likelihood[i] >= 0.0)) throw std::invalid_argument("bayes_update: negative likelihood");
    posterior[i] = likelihood[i] * prior[i];
  }
  const double normalizer = integrate(posterior, prior.spacing());
  if (!(normalizer > kMinNormalizer)) {
    throw std::domain_error(fmt::format("bayes_update: normalizer {:.3g} underflows", normalizer));
  }
  return PriorGrid(std::move(posterior), prior.periodic());
}

PosteriorSummary posterior_mean_and_risk(const PriorGrid& prior) {
  const std::vector<double> thetas = prior.thetas();
  const double mean = prior.expectation(thetas);
  std::vector<double> sq(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) sq[i] = (thetas[i] - mean) * (thetas[i] - mean);
  return {mean, prior.expectation(sq)};
}

double prior_fisher(const PriorGrid& prior) {
  const auto& lam = prior.density();
  const std::size_t m = lam.size();
  const double h = prior.spacing();
  const double floor = 1e-15 * *std::max_element(lam.begin(), lam.end());

  auto derivative = [&](std::size_t i) {
    if (prior.periodic()) return (lam[(i + 1) % m] - lam[(i + m - 1) % m]) / (2.0 * h);
    if (i == 0) return (-3.0 * lam[0] + 4.0 * lam[1] - lam[2]) / (2.0 * h);
    if (i == m - 1) return (3.0 * lam[m - 1] - 4.0 * lam[m - 2] + lam[m - 3]) / (2.0 * h);
    return (lam[i + 1] - lam[i - 1]) / (2.0 * h);
  };

  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (lam[i] < floor || lam[i] <= 0.0) continue;
    const double d = derivative(i);
    acc += d * d / lam[i];
  }
  return acc * h;
}

void write_csv(std::ostream& out, const PriorGrid& prior) {
  out << "theta,density\n";
  for (std::size_t i = 0; i < prior.size(); ++i) {
    out << fmt::format("{:.17g},{:.17g}\n", prior.theta(i), prior[i]);
  }
}

}  // namespace vantrees
