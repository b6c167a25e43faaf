#include "vantrees/povm.hpp"

#include <fmt/core.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vantrees {

void validate(const OutcomeDistribution& dist) {
  if (dist.probs.size() != dist.dprobs.size()) {
    throw std::invalid_argument("OutcomeDistribution: probs and dprobs differ in length");
  }
  double total = 0.0;
  double dtotal = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (!(dist.probs[k] >= 0.0)) throw std::invalid_argument("OutcomeDistribution: negative probability");
    total += dist.probs[k];
    dtotal += dist.dprobs[k];
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument(fmt::format("OutcomeDistribution: probabilities sum to {:.17g}", total));
  }
  if (std::abs(dtotal) > 1e-8) {
    throw std::invalid_argument(fmt::format("OutcomeDistribution: derivatives sum to {:.3g}", dtotal));
  }
}

Povm::Povm(std::vector<Eigen::MatrixXcd> elements, std::vector<int> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty()) throw std::invalid_argument("Povm: no elements");
  if (labels_.size() != elements_.size()) throw std::invalid_argument("Povm: one label per element required");
  const auto d = elements_.front().rows();
  for (const auto& e : elements_) {
    if (e.rows() != d || e.cols() != d) throw std::invalid_argument("Povm: elements must be square and equal-sized");
  }
}

std::size_t Povm::dim() const {
  return elements_.empty() ? 0 : static_cast<std::size_t>(elements_.front().rows());
}

PovmDiagnostics diagnose(const Povm& povm) {
  PovmDiagnostics diag;
  diag.min_eigenvalue = std::numeric_limits<double>::infinity();
  const auto d = static_cast<Eigen::Index>(povm.dim());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& e : povm.elements()) {
    diag.max_hermiticity_error =
        std::max(diag.max_hermiticity_error, (e - e.adjoint()).cwiseAbs().maxCoeff());
    const Eigen::MatrixXcd herm = 0.5 * (e + e.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, solver.eigenvalues().minCoeff());
    sum += e;
  }
  diag.completeness_error = (sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
  return diag;
}

void validate(const Povm& povm) {
  if (povm.size() == 0) throw std::invalid_argument("Povm: no elements");
  const PovmDiagnostics diag = diagnose(povm);
  if (diag.max_hermiticity_error > kHermiticityTol) {
    throw std::invalid_argument(fmt::format("Povm: element not Hermitian (error {:.3g})", diag.max_hermiticity_error));
  }
  if (diag.min_eigenvalue < -kPositivityTol) {
    throw std::invalid_argument(fmt::format("Povm: element not positive (eigenvalue {:.3g})", diag.min_eigenvalue));
  }
  if (diag.completeness_error > kCompletenessTol) {
    throw std::invalid_argument(fmt::format("Povm: elements do not sum to identity (error {:.3g})", diag.completeness_error));
  }
}

Povm projector_family(const CoherentModel& model, double epsilon) {
  const Eigen::VectorXcd v = phase_shifted_coherent(model, epsilon).amps();
  const auto d = v.size();
  Eigen::MatrixXcd projector = v * v.adjoint();
  Eigen::MatrixXcd complement = Eigen::MatrixXcd::Identity(d, d) - projector;
  return Povm({std::move(projector), std::move(complement)}, {1, 2});
}

Eigen::MatrixXcd haar_unitary(std::size_t dim, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd ginibre(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      ginibre(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(k) *= diag / mag;
  }
  return q;
}

Povm povm_from_unitary(const Eigen::MatrixXcd& unitary, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (unitary.rows() != unitary.cols()) throw std::invalid_argument("povm_from_unitary: matrix not square");
  if (unitary.rows() < d) throw std::invalid_argument("povm_from_unitary: enlarged dimension smaller than dim");
  std::vector<Eigen::MatrixXcd> elements;
  std::vector<int> labels;
  elements.reserve(static_cast<std::size_t>(unitary.cols()));
  for (Eigen::Index k = 0; k < unitary.cols(); ++k) {
    const Eigen::VectorXcd v = unitary.col(k).head(d);
    elements.push_back(v * v.adjoint());
    labels.push_back(static_cast<int>(k));
  }
  return Povm(std::move(elements), std::move(labels));
}

Povm random_projective_povm(std::size_t dim, std::size_t enlarged_dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_projective_povm: dimension must be at least 1");
  if (enlarged_dim < dim) {
    throw std::invalid_argument(fmt::format("random_projective_povm: enlarged dimension {} < {}", enlarged_dim, dim));
  }
  std::mt19937_64 rng(seed);
  return povm_from_unitary(haar_unitary(enlarged_dim, rng), dim);
}

namespace {

double clamp_probability(double p) {
  if (p < -kProbabilityClamp || p > 1.0 + kProbabilityClamp || !std::isfinite(p)) {
    throw std::domain_error(fmt::format("born_probabilities: probability {:.17g} outside [0, 1]", p));
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

OutcomeDistribution born_probabilities(const Povm& povm, const FockVector& state) {
  if (povm.dim() != state.dim()) {
    throw std::invalid_argument(
        fmt::format("born_probabilities: POVM dimension {} vs state dimension {}", povm.dim(), state.dim()));
  }
  const Eigen::VectorXcd& psi = state.amps();
  const Eigen::VectorXcd dpsi = phase_derivative(state).amps();
  OutcomeDistribution dist;
  dist.probs.reserve(povm.size());
  dist.dprobs.reserve(povm.size());
  for (const auto& e : povm.elements()) {
    const Eigen::VectorXcd e_psi = e * psi;
    dist.probs.push_back(clamp_probability(psi.dot(e_psi).real()));
    dist.dprobs.push_back(2.0 * dpsi.dot(e_psi).real());
  }
  return dist;
}

void to_json(nlohmann::json& j, const Povm& povm) {
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& e : povm.elements()) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < e.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < e.cols(); ++c) row.push_back({e(r, c).real(), e(r, c).imag()});
      rows.push_back(std::move(row));
    }
    elements.push_back(std::move(rows));
  }
  j = nlohmann::json{{"dim", povm.dim()}, {"labels", povm.labels()}, {"elements", std::move(elements)}};
}

void from_json(const nlohmann::json& j, Povm& povm) {
  const auto d = j.at("dim").get<Eigen::Index>();
  std::vector<Eigen::MatrixXcd> elements;
  for (const auto& rows : j.at("elements")) {
    if (static_cast<Eigen::Index>(rows.size()) != d) throw std::invalid_argument("Povm JSON: wrong row count");
    Eigen::MatrixXcd e(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      const auto& row = rows.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != d) throw std::invalid_argument("Povm JSON: wrong column count");
      for (Eigen::Index c = 0; c < d; ++c) {
        const auto& entry = row.at(static_cast<std::size_t>(c));
        e(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
      }
    }
    elements.push_back(std::move(e));
  }
  povm = Povm(std::move(elements), j.at("labels").get<std::vector<int>>());
}

}  // namespace vantrees
