// One PASS/FAIL line per acceptance criterion.
//
//   acceptance [--only N] [--expect-red N[,N...]]
//
// Exit status is 0 when every criterion outside the --expect-red list passes.
// Criteria in that list still print FAIL when they fail.

#include "vantrees/adaptive.hpp"
#include "vantrees/infotheory.hpp"
#include "vantrees/optimizer.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace vantrees;

namespace {

// tolerances
constexpr double kMonteCarloTol = 0.05;       // criterion 1
constexpr double kRestrictedTol = 0.03;       // criterion 1
constexpr double kClosedFormTol = 1e-6;       // criterion 2, against the truncated-prior closed form
constexpr double kTruncationTol = 2e-3;       // criterion 2, 1/σ² against the truncated prior
constexpr double kSandwichSlack = 0.02;       // criterion 3
constexpr double kPointwiseTol = 0.005;       // criterion 4
constexpr double kFlatnessTol = 0.02;         // criterion 6
constexpr double kRatioMin = 2.0;             // criterion 6
constexpr double kConstantTol = 0.15;         // criterion 6
constexpr double kFisherConstant = 1.9;
constexpr double kVanTreesConstant = 0.8;

// grid for the Monte-Carlo sweeps of criteria 2 and 3
constexpr std::size_t kSweepGrid = 1024;
// documented amplitude for the adaptive comparison
constexpr double kAdaptiveAlpha = 1.0;
constexpr std::size_t kAdaptiveSteps = 8;
constexpr std::size_t kScalingSteps = 64;

struct Verdict {
  bool pass;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Verdict criterion1() {
  const double sigma = kPi / 4;
  const PriorGrid prior = gaussian_prior(sigma);
  bool ok = true;
  std::string detail;
  for (double a : {0.1, 0.2, 0.3, 0.4}) {
    const CoherentModel model(a);
    const double analytic = zq_restricted_analytic(model, sigma);
    const double mc = optimize_montecarlo(model, prior).best_value;
    const double rs = optimize_restricted(model, prior).best_value;
    ok = ok && rel(mc, analytic) <= kMonteCarloTol && rel(rs, analytic) <= kRestrictedTol;
    detail += fmt::format(" |a|={:.1f}: analytic {:.5f} mc {:+.2f}% restricted {:+.2f}%;", a, analytic,
                          100 * (mc - analytic) / analytic, 100 * (rs - analytic) / analytic);
  }
  return {ok, detail};
}

// ∫(λ')²/λ of exp(-θ²/2σ²) truncated to [-π, π]: E[θ²]/σ⁴
double truncated_gaussian_fisher(double sigma) {
  const double a = kPi / sigma;
  const double phi = std::exp(-0.5 * a * a) / std::sqrt(kTwoPi);
  const double mass = std::erf(a / std::sqrt(2.0));
  return (1.0 - 2.0 * a * phi / mass) / (sigma * sigma);
}

Verdict criterion2() {
  const double sigma = kPi / 4;
  const PriorGrid prior = gaussian_prior(sigma, kSweepGrid);
  const PriorGrid fine = gaussian_prior(sigma);
  bool ok = true;
  double worst_closed = 0.0;
  double min_gap = INFINITY;
  for (int i = 0; i <= 10; ++i) {
    const double a = 0.1 * i;
    const CoherentModel model(a);
    const double vq = generalized_qfi_vq(model, fine);
    const double closed = 4 * a * a + truncated_gaussian_fisher(sigma);
    worst_closed = std::max(worst_closed, rel(vq, closed));
    ok = ok && rel(vq, closed) <= kClosedFormTol && rel(vq - 4 * a * a, 16 / (kPi * kPi)) <= kTruncationTol;
    if (i >= 1) {
      const double zq = optimize_montecarlo(model, prior).best_value;
      const double gap = generalized_qfi_vq(model, prior) - zq;
      min_gap = std::min(min_gap, gap);
      ok = ok && gap > 0.0;
    }
  }
  return {ok, fmt::format(" V_Q vs 4|a|^2 + truncated-prior term: max rel err {:.2e}; prior term {:.6f} vs 16/pi^2 = "
                          "{:.6f}; min V_Q - Z_Q over |a| in [0.1, 1] = {:.4f}",
                          worst_closed, prior_fisher(fine), 16 / (kPi * kPi), min_gap)};
}

Verdict criterion3() {
  bool ok = true;
  std::string detail;
  for (double divisor : {8.0, 4.0, 2.0}) {
    const PriorGrid prior = gaussian_prior(kPi / divisor, kSweepGrid);
    double worst_low = INFINITY, worst_high = INFINITY;
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const CoherentModel model(a);
      const double rs = optimize_restricted(model, prior).best_value;
      const double mc = optimize_montecarlo(model, prior).best_value;
      const double vq = generalized_qfi_vq(model, prior);
      // restricted <= mc (1 + slack) and mc <= V_Q
      worst_low = std::min(worst_low, mc * (1 + kSandwichSlack) / rs - 1);
      worst_high = std::min(worst_high, vq - mc);
      ok = ok && rs <= mc * (1 + kSandwichSlack) && mc <= vq * (1 + 1e-12);
    }
    detail += fmt::format(" sigma=pi/{:g}: min margin low {:+.3f}, V_Q - mc {:+.4f};", divisor, worst_low, worst_high);
  }
  return {ok, detail};
}

Verdict criterion4() {
  bool ok = true;
  std::string detail;
  for (double a : {0.3, 1.0}) {
    const CoherentModel model(a);
    const double target = 4 * a * a;
    const double closed = family_fisher(model, 0.7, 0.7);
    // Born-rule quotient on the truncated state, just off the removable point
    const Povm povm = projector_family(model, 0.7);
    const double born = fisher_information(born_probabilities(povm, phase_shifted_coherent(model, 0.7 + 1e-3)));
    ok = ok && rel(closed, target) <= kPointwiseTol && rel(born, target) <= kPointwiseTol;
    detail += fmt::format(" |a|={:.1f}: F(eps,eps) {:.8f}, Born quotient at 1e-3 {:.6f}, 4|a|^2 {:.6f};", a, closed, born,
                          target);
  }
  return {ok, detail};
}

Verdict criterion5() {
  const CoherentModel model(kAdaptiveAlpha);
  const AdaptiveRunReport fisher = run_fisher_adaptive(model, kAdaptiveSteps);
  const AdaptiveRunReport vantrees = run_vantrees_adaptive(model, kAdaptiveSteps);
  bool ordered = true;
  std::string curve;
  for (std::size_t k = 0; k < kAdaptiveSteps; ++k) {
    ordered = ordered && vantrees.error_curve[k].error <= fisher.error_curve[k].error;
    curve += fmt::format(" {}:{:.4g}/{:.4g}", k + 1, vantrees.error_curve[k].error, fisher.error_curve[k].error);
  }
  auto gap = [&](std::size_t k) {
    return (fisher.error_curve[k - 1].error - vantrees.error_curve[k - 1].error) / fisher.error_curve[k - 1].error;
  };
  const bool converging = gap(8) < gap(2);
  return {ordered && converging, fmt::format(" |a|={:g}, VT/Fisher per k:{}; gap k=2 {:.3f}, k=8 {:.3f}", kAdaptiveAlpha,
                                             curve, gap(2), gap(8))};
}

Verdict criterion6() {
  AdaptiveOptions options;
  const double alpha = calibrate_alpha(kVanTreesConstant, options);
  const CoherentModel model(alpha);
  const AdaptiveRunReport fisher = run_fixed_povm(model, kScalingSteps, Scheme::fisher, options);
  const AdaptiveRunReport vantrees = run_fixed_povm(model, kScalingSteps, Scheme::vantrees, options);
  const double cf = *fisher.fitted_constant;
  const double cv = *vantrees.fitted_constant;
  const double sf = last_quartile_relative_slope(fisher.error_curve);
  const double sv = last_quartile_relative_slope(vantrees.error_curve);
  const bool flat = sf < kFlatnessTol && sv < kFlatnessTol;
  const bool ratio = cf / cv > kRatioMin;
  const bool constants = rel(cf, kFisherConstant) <= kConstantTol && rel(cv, kVanTreesConstant) <= kConstantTol;
  return {flat && ratio && constants,
          fmt::format(" calibrated |a|={:.10f}; c_fisher {:.6g} (target {} +-15%: {}), c_vantrees {:.6g} (target {}: {}); "
                      "ratio {:.4g} (> 2: {}); slopes {:.2e}, {:.2e} (< 2%: {})",
                      alpha, cf, kFisherConstant, rel(cf, kFisherConstant) <= kConstantTol ? "ok" : "MISS", cv,
                      kVanTreesConstant, rel(cv, kVanTreesConstant) <= kConstantTol ? "ok" : "MISS", cf / cv,
                      ratio ? "ok" : "MISS", sf, sv, flat ? "ok" : "MISS")};
}

Verdict criterion7() {
  const int status = std::system(PROPERTY_SUITE_PATH " --no-intro=true --reporters=console > /dev/null 2>&1");
  return {status == 0, fmt::format(" standalone property suite {} exited with status {}", PROPERTY_SUITE_PATH, status)};
}

std::set<int> parse_list(const std::string& text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expect_red;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = parse_list(argv[++i]);
    } else if (arg == "--expect-red" && i + 1 < argc) {
      expect_red = parse_list(argv[++i]);
    } else {
      fmt::print(stderr, "usage: acceptance [--only N[,N...]] [--expect-red N[,N...]]\n");
      return 2;
    }
  }

  const std::vector<std::pair<int, std::function<Verdict()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}};

  int unexpected = 0;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    const Verdict v = run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool red_ok = !v.pass && expect_red.count(id);
    fmt::print("criterion {}: {}{} ({:.1f} s){}\n", id, v.pass ? "PASS" : "FAIL", red_ok ? " [expected red]" : "",
               seconds, v.detail);
    std::fflush(stdout);
    if (!v.pass && !red_ok) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
