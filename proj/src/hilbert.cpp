#include "vantrees/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vantrees {

double wrap_angle(double theta) {
  double wrapped = std::fmod(theta + kPi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  wrapped -= kPi;
  // fmod can round up to exactly π
  if (wrapped >= kPi) wrapped -= kTwoPi;
  return wrapped;
}

double angular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

FockVector::FockVector(Eigen::VectorXcd amps) : amps_(std::move(amps)) {
  if (amps_.size() < 1) throw std::invalid_argument("FockVector: dimension must be at least 1");
}

FockVector FockVector::basis(std::size_t dim, std::size_t n) {
  if (n >= dim) throw std::invalid_argument("FockVector::basis: index outside the space");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  amps[static_cast<Eigen::Index>(n)] = 1.0;
  return FockVector(std::move(amps));
}

Complex FockVector::inner(const FockVector& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("FockVector::inner: dimension mismatch");
  return amps_.dot(other.amps_);
}

double poisson_tail_mass(double mean_photons, std::size_t dim) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
    throw std::invalid_argument("poisson_tail_mass: mean must be finite and non-negative");
  }
  if (mean_photons == 0.0) return dim == 0 ? 1.0 : 0.0;
  const double log_mean = std::log(mean_photons);
  double tail = 0.0;
  for (std::size_t n = dim;; ++n) {
    const double nd = static_cast<double>(n);
    const double term = std::exp(-mean_photons + nd * log_mean - std::lgamma(nd + 1.0));
    tail += term;
    if (nd > mean_photons && term <= 1e-18 * tail) break;
    if (nd > mean_photons && term < 1e-300) break;
  }
  return tail;
}

std::size_t truncation_dimension(Complex alpha) {
  const double mean = std::norm(alpha);
  if (!std::isfinite(mean)) throw std::invalid_argument("truncation_dimension: alpha is not finite");
  std::size_t dim = 1;
  while (poisson_tail_mass(mean, dim) >= kTruncationTail) ++dim;
  return dim;
}

CoherentModel::CoherentModel(Complex alpha) : alpha_(alpha), dim_(truncation_dimension(alpha)) {}

CoherentModel::CoherentModel(Complex alpha, std::size_t dim) : alpha_(alpha), dim_(dim) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("CoherentModel: alpha is not finite");
  }
  if (dim < 1) throw std::invalid_argument("CoherentModel: dimension must be at least 1");
  const double tail = poisson_tail_mass(std::norm(alpha), dim);
  if (tail >= kTruncationTail) {
    throw std::invalid_argument("CoherentModel: dimension " + std::to_string(dim) +
                                " truncates a tail mass of " + std::to_string(tail));
  }
}

FockVector coherent_state(const CoherentModel& model) {
  const auto dim = static_cast<Eigen::Index>(model.dim());
  Eigen::VectorXcd amps(dim);
  amps[0] = std::exp(-0.5 * model.mean_photons());
  for (Eigen::Index n = 1; n < dim; ++n) {
    amps[n] = amps[n - 1] * model.alpha() / std::sqrt(static_cast<double>(n));
  }
  return FockVector(std::move(amps));
}

FockVector phase_evolve(const FockVector& state, double theta) {
  Eigen::VectorXcd amps = state.amps();
  for (Eigen::Index n = 0; n < amps.size(); ++n) {
    amps[n] *= std::polar(1.0, static_cast<double>(n) * theta);
  }
  return FockVector(std::move(amps));
}

FockVector phase_derivative(const FockVector& state) {
  Eigen::VectorXcd amps = state.amps();
  for (Eigen::Index n = 0; n < amps.size(); ++n) {
    amps[n] *= Complex(0.0, static_cast<double>(n));
  }
  return FockVector(std::move(amps));
}

FockVector phase_shifted_coherent(const CoherentModel& model, double theta) {
  return phase_evolve(coherent_state(model), theta);
}

double overlap_probability(const CoherentModel& model, double theta, double epsilon) {
  const FockVector base = coherent_state(model);
  return std::norm(phase_evolve(base, theta).inner(phase_evolve(base, epsilon)));
}

double overlap_probability_closed_form(double mean_photons, double delta) {
  return std::exp(-2.0 * mean_photons * (1.0 - std::cos(delta)));
}

}  // namespace vantrees
