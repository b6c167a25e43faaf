#include "vantrees/povm.hpp"

#include <doctest.h>

#include <random>

using namespace vantrees;

TEST_CASE("projector family is a valid two-outcome POVM") {
  const CoherentModel model(0.9);
  const Povm povm = projector_family(model, 1.1);
  CHECK_NOTHROW(validate(povm));
  CHECK(povm.size() == 2);
  CHECK(povm.labels() == std::vector<int>{1, 2});
  const PovmDiagnostics diag = diagnose(povm);
  CHECK(diag.completeness_error < 1e-12);
  CHECK(diag.min_eigenvalue > -1e-12);
}

TEST_CASE("projector family outcome 1 has the overlap probability") {
  const CoherentModel model(0.7);
  const Povm povm = projector_family(model, 0.2);
  const auto dist = born_probabilities(povm, phase_shifted_coherent(model, 1.0));
  CHECK(dist.probs[0] == doctest::Approx(overlap_probability_closed_form(0.49, 0.8)).epsilon(1e-11));
  CHECK(dist.probs[0] + dist.probs[1] == doctest::Approx(1.0));
  CHECK(dist.dprobs[0] + dist.dprobs[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("born derivative matches a central difference") {
  const CoherentModel model(1.0);
  const Povm povm = random_projective_povm(model.dim(), model.dim() + 3, 7);
  const double theta = 0.37;
  const double h = 1e-5;
  const auto at = [&](double t) { return born_probabilities(povm, phase_shifted_coherent(model, t)); };
  const auto mid = at(theta);
  const auto plus = at(theta + h);
  const auto minus = at(theta - h);
  for (std::size_t k = 0; k < povm.size(); ++k) {
    CHECK(mid.dprobs[k] == doctest::Approx((plus.probs[k] - minus.probs[k]) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("validate rejects broken POVMs") {
  const CoherentModel model(0.5);
  Povm good = projector_family(model, 0.0);

  auto elements = good.elements();
  elements[0](0, 1) += Complex(0.0, 1e-6);
  CHECK_THROWS_AS(validate(Povm(elements, good.labels())), std::invalid_argument);

  elements = good.elements();
  elements[1] *= 0.9;
  CHECK_THROWS_AS(validate(Povm(elements, good.labels())), std::invalid_argument);

  const auto d = static_cast<Eigen::Index>(model.dim());
  Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(d, d);
  neg(0, 0) = -0.1;
  Eigen::MatrixXcd rest = Eigen::MatrixXcd::Identity(d, d);
  rest(0, 0) = 1.1;
  CHECK_THROWS_AS(validate(Povm({neg, rest}, {1, 2})), std::invalid_argument);
}

TEST_CASE("haar unitary is unitary and seed-deterministic") {
  std::mt19937_64 a(5), b(5);
  const Eigen::MatrixXcd u = haar_unitary(6, a);
  const Eigen::MatrixXcd v = haar_unitary(6, b);
  CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(6, 6)).norm() < 1e-12);
  CHECK((u - v).norm() == 0.0);
}

TEST_CASE("haar first-moment oracle: E|U_00|^2 = 1/D and E[Tr E_k] = d/D") {
  // independent Monte-Carlo oracle over 10^4 draws
  constexpr int draws = 10000;
  const std::size_t d = 3, big = 5;
  std::mt19937_64 rng(11);
  double u00 = 0.0;
  double trace0 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Eigen::MatrixXcd u = haar_unitary(big, rng);
    u00 += std::norm(u(0, 0));
    trace0 += povm_from_unitary(u, d)[0].trace().real();
  }
  u00 /= draws;
  trace0 /= draws;
  // standard errors are about 0.002 and 0.003
  CHECK(u00 == doctest::Approx(1.0 / big).epsilon(0.05));
  CHECK(trace0 == doctest::Approx(static_cast<double>(d) / big).epsilon(0.03));
}

TEST_CASE("povm_from_unitary is complete with D rank-one elements") {
  const Povm povm = random_projective_povm(4, 7, 3);
  CHECK(povm.size() == 7);
  CHECK(povm.dim() == 4);
  CHECK_NOTHROW(validate(povm));
  CHECK(povm.labels().front() == 0);
  CHECK(povm.labels().back() == 6);
}

TEST_CASE("born probabilities reject a non-physical measurement") {
  const CoherentModel model(0.5);
  const auto d = static_cast<Eigen::Index>(model.dim());
  const Eigen::MatrixXcd twice = 2.0 * Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd minus = -1.0 * Eigen::MatrixXcd::Identity(d, d);
  CHECK_THROWS_AS(born_probabilities(Povm({twice, minus}, {1, 2}), coherent_state(model)), std::domain_error);
}

TEST_CASE("povm json round trip") {
  const Povm povm = random_projective_povm(3, 5, 9);
  const nlohmann::json j = povm;
  const Povm back = j.get<Povm>();
  REQUIRE(back.size() == povm.size());
  CHECK(back.labels() == povm.labels());
  for (std::size_t k = 0; k < povm.size(); ++k) CHECK((back[k] - povm[k]).norm() == 0.0);
}
