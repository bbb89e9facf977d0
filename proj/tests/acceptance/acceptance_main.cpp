// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in the individual checks.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smax/smax.hpp"

using namespace smax;

namespace {

int g_failed = 0;

void criterion(int id, const std::string& label,
               const std::function<std::pair<bool, std::string>()>& fn) {
  std::pair<bool, std::string> outcome{false, "exception"};
  try {
    outcome = fn();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  std::printf("[%s] criterion %d: %s (%s)\n",
              outcome.first ? "PASS" : "FAIL", id, label.c_str(),
              outcome.second.c_str());
  std::fflush(stdout);
  if (!outcome.first) ++g_failed;
}

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

Vector random_vector(std::mt19937_64& rng, Index n, double lo, double hi) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = uniform_in(rng, lo, hi);
  return v;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform_in(rng, std::log(lo), std::log(hi)));
}

const MatrixGame& rps() {
  static const MatrixGame g = MatrixGame::rock_paper_scissors();
  return g;
}

const Vector kRpsStart = (Vector(3) << 1.0, 0.5, 0.0).finished();

// Criterion 1: score dynamics on the cyclic game reach the uniform logit
// equilibrium to 1e-6 in under a second.
std::pair<bool, std::string> rps_convergence(Trajectory& out_traj) {
  const auto t0 = std::chrono::steady_clock::now();
  out_traj = integrate(rps(), Temperature(1), ScoreVector(kRpsStart),
                       {0.01, 50.0, 10});
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const double dev = (out_traj.back().x - Vector::Constant(3, 1.0 / 3.0))
                         .lpNorm<Eigen::Infinity>();
  const bool ok = dev <= 1e-6 && seconds < 1.0;
  return {ok, fmt("deviation %.3g, %.3f s", dev, seconds)};
}

// Criterion 2: the Bregman divergence about z* = 0 never increases by more
// than 1e-10 per recorded step and ends below 1e-10. The dissipation-rate
// bound is additionally monitored on the densely recorded run.
std::pair<bool, std::string> lyapunov_dissipation(const Trajectory& traj) {
  const Temperature t(1);
  const ScoreVector ref = ScoreVector::zero(3);
  double v_prev =
      lyapunov_value(ScoreVector(traj.front().z), ref, t);
  double worst_step = -1e300;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double v = lyapunov_value(ScoreVector(traj.samples()[k].z), ref, t);
    worst_step = std::max(worst_step, v - v_prev);
    v_prev = v;
  }
  const double v_end = v_prev;
  const Trajectory dense = integrate(rps(), Temperature(1),
                                     ScoreVector(kRpsStart), {0.01, 50.0, 1});
  const PropertyReport monitor = monitor_lyapunov(dense, rps(), ref, t);
  const bool ok =
      worst_step <= 1e-10 && v_end <= 1e-10 && monitor.violations == 0;
  return {ok, fmt("max step increase %.3g, V(t_end) %.3g, rate violations %ld",
                  worst_step, v_end, monitor.violations)};
}

// Criterion 3: the operator property suite over the full grid.
std::pair<bool, std::string> property_suite() {
  const long samples = 10000;
  const double lo = -50.0, hi = 50.0;
  long violations = 0;
  long checks = 0;
  std::string first_fail;
  std::uint64_t seed = 1000;
  auto account = [&](const PropertyReport& r, Index n, double lambda) {
    ++checks;
    violations += r.violations;
    if (r.violations > 0 && first_fail.empty()) {
      first_fail = fmt("%s n=%ld lambda=%g worst=%.3g", r.property.c_str(),
                       static_cast<long>(n), lambda, r.worst_margin);
    }
  };
  for (Index n : {2, 3, 5, 10}) {
    for (double lambda : {0.1, 0.5, 1.0, 2.0, 10.0}) {
      const Temperature t(lambda);
      auto ens = [&] { return SampleEnsemble(n, samples, lo, hi, seed++); };
      account(check_monotone(ens(), t), n, lambda);
      account(check_lipschitz(ens(), t), n, lambda);
      account(check_cocoercive(ens(), t), n, lambda);
      account(check_fenchel_young(ens(), t), n, lambda);
      account(check_vecmax_sandwich(ens(), t), n, lambda);
      account(check_shift_invariance(ens(), t), n, lambda);
      account(check_permutation_equivariance(ens(), t), n, lambda);
      account(check_one_vs_each(ens(), t), n, lambda);
    }
    account(check_coordinate_nonexpansive(
                SampleEnsemble(n, samples, lo, hi, seed++)),
            n, 1.0);
  }
  const bool ok = violations == 0;
  std::string detail = fmt("%ld checks, %ld violations", checks, violations);
  if (!first_fail.empty()) detail += ", first: " + first_fail;
  return {ok, detail};
}

// Criterion 4: analytic Jacobian against central finite differences.
std::pair<bool, std::string> jacobian_oracle() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Index n = 2 + static_cast<Index>(rep % 9);
    const double lambda = log_uniform(rng, 0.1, 10.0);
    const Vector z = random_vector(rng, n, -5.0, 5.0);
    const Temperature t(lambda);
    const Matrix analytic = softmax_jacobian(ScoreVector(z), t).entries();
    const double h = 1e-5;
    for (Index c = 0; c < n; ++c) {
      Vector hi_v = z, lo_v = z;
      hi_v[c] += h;
      lo_v[c] -= h;
      const Vector col = (softmax(ScoreVector(hi_v), t).probs() -
                          softmax(ScoreVector(lo_v), t).probs()) /
                         (2.0 * h);
      worst = std::max(worst, (analytic.col(c) - col).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-6, fmt("max deviation %.3g over 100 configs", worst)};
}

// Criterion 5: Gumbel-perturbed argmax frequencies match the softmax.
std::pair<bool, std::string> gumbel_representation() {
  const long draws = 1000000;
  double worst = 0.0;
  struct Case {
    Vector z;
    double lambda;
    std::uint64_t seed;
  };
  const std::vector<Case> cases = {
      {(Vector(2) << 1.0, 0.0).finished(), 1.0, 2024},
      {(Vector(3) << 2.0, 0.0, -2.0).finished(), 0.5, 2025},
  };
  for (const auto& c : cases) {
    const ScoreVector z(c.z);
    const Temperature t(c.lambda);
    std::mt19937_64 rng(c.seed);
    Vector counts = Vector::Zero(c.z.size());
    for (long i = 0; i < draws; ++i) counts[gumbel_choice(z, t, rng)] += 1.0;
    const Vector freq = counts / static_cast<double>(draws);
    worst = std::max(
        worst, (freq - softmax(z, t).probs()).lpNorm<Eigen::Infinity>());
  }
  return {worst <= 3e-3, fmt("max frequency deviation %.3g", worst)};
}

// Criterion 6: softmax equals the projected-ascent regularized argmax.
std::pair<bool, std::string> argmax_equivalence() {
  double worst = 0.0;
  long inconclusive = 0;
  std::uint64_t seed = 600;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const PropertyReport r = check_argmax_equivalence(
        SampleEnsemble(4, 100, -1.5, 1.5, seed++), Temperature(lambda));
    worst = std::max(worst, r.worst_margin);
    inconclusive += r.inconclusive;
  }
  const bool ok = worst <= 1e-6 && inconclusive == 0;
  return {ok, fmt("max deviation %.3g, %ld inconclusive", worst, inconclusive)};
}

// Criterion 7: certified contraction regime of the cyclic game.
std::pair<bool, std::string> contraction_regime() {
  const Temperature t(0.1);
  const ContractionCertificate cert = contraction_certificate(rps(), t);
  const double expected_bound = 2.0 * std::sqrt(3.0) * 0.1;
  if (!cert.certified || std::abs(cert.bound - expected_bound) > 1e-12) {
    return {false, fmt("certificate bound %.6g", cert.bound)};
  }
  const FixedPointResult solved =
      solve_fixed_point(rps(), t, ScoreVector(kRpsStart),
                        SolverConfig{1e-10, 100000, 1.0});
  if (!solved.converged) return {false, "undamped iteration did not converge"};
  const std::size_t m = solved.residual_history.size();
  if (m < 3) return {false, "history too short to fit a ratio"};
  const double ratio =
      std::pow(solved.residual_history[m - 2] / solved.residual_history[0],
               1.0 / static_cast<double>(m - 2));
  const Trajectory traj =
      integrate(rps(), t, ScoreVector(kRpsStart), {0.01, 100.0, 100});
  const double gap =
      (solved.z_star - traj.back().z).lpNorm<Eigen::Infinity>();
  const bool ok = ratio < 1.0 && gap <= 1e-6;
  return {ok, fmt("bound %.4g, ratio %.3g, solver/ode gap %.3g", cert.bound,
                  ratio, gap)};
}

// Criterion 8: empirical RK4 order on the exactly solvable decay problem.
std::pair<bool, std::string> rk4_order() {
  const MatrixGame zero(Matrix::Zero(2, 2), "zero");
  const ScoreVector z0((Vector(2) << 1.0, -2.0).finished());
  const double t_end = 5.0;
  const Vector exact = std::exp(-t_end) * z0.values();
  double err[3];
  const double dts[3] = {0.1, 0.05, 0.025};
  for (int i = 0; i < 3; ++i) {
    const Trajectory traj =
        integrate(zero, Temperature(1), z0, {dts[i], t_end, 1 << 30});
    err[i] = (traj.back().z - exact).lpNorm<Eigen::Infinity>();
  }
  const double order1 = std::log2(err[0] / err[1]);
  const double order2 = std::log2(err[1] / err[2]);
  const bool ok = order1 >= 3.8 && order2 >= 3.8;
  return {ok, fmt("orders %.2f, %.2f", order1, order2)};
}

// Criterion 9: replicator field equals the softmax Jacobian times payoff.
std::pair<bool, std::string> replicator_consistency() {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Index n = 2 + static_cast<Index>(rng() % 9);
    const double lambda = log_uniform(rng, 0.1, 10.0);
    const Temperature t(lambda);
    const Vector z = random_vector(rng, n, -5.0, 5.0);
    const Vector u = random_vector(rng, n, -10.0, 10.0);
    const Vector lhs = replicator_field(softmax(ScoreVector(z), t), u, t);
    const Vector rhs = softmax_jacobian(ScoreVector(z), t).apply(u);
    worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>());
  }
  return {worst <= 1e-12, fmt("max deviation %.3g over 1000 draws", worst)};
}

}  // namespace

int main() {
  Trajectory rps_traj;
  criterion(1, "cyclic-game convergence to the uniform logit equilibrium",
            [&] { return rps_convergence(rps_traj); });
  criterion(2, "lyapunov dissipation along the criterion-1 trajectory",
            [&] { return lyapunov_dissipation(rps_traj); });
  criterion(3, "operator property suite over the full parameter grid",
            property_suite);
  criterion(4, "analytic jacobian against finite differences",
            jacobian_oracle);
  criterion(5, "gumbel choice frequencies reproduce the softmax",
            gumbel_representation);
  criterion(6, "regularized argmax equals softmax (projected-ascent oracle)",
            argmax_equivalence);
  criterion(7, "certified contraction regime: solver and dynamics agree",
            contraction_regime);
  criterion(8, "rk4 convergence order on the exact decay problem", rk4_order);
  criterion(9, "replicator field consistency with the softmax jacobian",
            replicator_consistency);

  if (g_failed == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failed);
  return 1;
}
