#include <cmath>
#include <random>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "test_helpers.hpp"

using namespace smax;
using testutil::max_abs_diff;
using testutil::vec;

namespace {

const MatrixGame& rps() {
  static const MatrixGame g = MatrixGame::rock_paper_scissors();
  return g;
}

}  // namespace

TEST_CASE("solver stops immediately at a fixed point") {
  const FixedPointResult r = solve_fixed_point(
      rps(), Temperature(1), ScoreVector::zero(3), SolverConfig{});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.residual == 0.0);
  CHECK(r.residual_history.size() == 1);
  CHECK(max_abs_diff(r.x_star, Vector::Constant(3, 1.0 / 3.0)) < 1e-15);
}

TEST_CASE("constant payoff converges in one undamped step") {
  // Every row constant makes U(x) = c for any simplex x.
  Matrix a(3, 3);
  a << 2, 2, 2,
       -1, -1, -1,
       0.5, 0.5, 0.5;
  const MatrixGame g(a);
  const FixedPointResult r =
      solve_fixed_point(g, Temperature(1), ScoreVector(vec({3, -2, 1})),
                        SolverConfig{1e-10, 100, 1.0});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(max_abs_diff(r.z_star, vec({2, -1, 0.5})) < 1e-12);
}

TEST_CASE("certified contraction converges geometrically") {
  const Temperature t(0.1);
  const ContractionCertificate cert = contraction_certificate(rps(), t);
  CHECK(cert.certified);

  const FixedPointResult r = solve_fixed_point(
      rps(), t, ScoreVector(vec({1, 0.5, 0})), SolverConfig{1e-10, 100000, 1.0});
  CHECK(r.converged);
  CHECK(r.z_star.lpNorm<Eigen::Infinity>() < 1e-9);

  // Empirical geometric ratio fitted over the whole residual history.
  REQUIRE(r.residual_history.size() >= 3);
  const double r0 = r.residual_history.front();
  const double rk = r.residual_history[r.residual_history.size() - 2];
  const double ratio =
      std::pow(rk / r0,
               1.0 / static_cast<double>(r.residual_history.size() - 2));
  CHECK(ratio < 1.0);
  CHECK(ratio < cert.bound + 0.05);

  // Under certification with alpha = 1 the residuals never increase.
  for (std::size_t i = 1; i < r.residual_history.size(); ++i) {
    CHECK(r.residual_history[i] <=
          r.residual_history[i - 1] * (1.0 + 1e-12) + 1e-18);
  }
}

TEST_CASE("solver agrees with the long-horizon integration") {
  SUBCASE("cyclic game at small lambda") {
    const Temperature t(0.1);
    const FixedPointResult solved = solve_fixed_point(
        rps(), t, ScoreVector(vec({1, 0.5, 0})), SolverConfig{1e-12, 100000, 1.0});
    const Trajectory traj = integrate(rps(), t, ScoreVector(vec({1, 0.5, 0})),
                                      {0.01, 100.0, 100});
    CHECK(max_abs_diff(solved.z_star, traj.back().z) <= 1e-6);
  }
  SUBCASE("random certified game") {
    std::mt19937_64 rng(61);
    Matrix a(3, 3);
    for (Index r = 0; r < 3; ++r)
      for (Index c = 0; c < 3; ++c) a(r, c) = uniform_in(rng, -1.0, 1.0);
    const MatrixGame g(a);
    // Pick lambda so that ||A||_inf sqrt(n) lambda = 0.9.
    const double a_inf = a.cwiseAbs().rowwise().sum().maxCoeff();
    const Temperature t(0.9 / (a_inf * std::sqrt(3.0)));
    CHECK(contraction_certificate(g, t).certified);
    const FixedPointResult solved = solve_fixed_point(
        g, t, ScoreVector(vec({0.3, -0.2, 0.7})), SolverConfig{1e-12, 100000, 1.0});
    CHECK(solved.converged);
    const Trajectory traj = integrate(g, t, ScoreVector(vec({0.3, -0.2, 0.7})),
                                      {0.01, 100.0, 100});
    CHECK(max_abs_diff(solved.z_star, traj.back().z) <= 1e-6);
  }
}

TEST_CASE("logit equilibria") {
  SUBCASE("cyclic game has the uniform equilibrium") {
    const MixedStrategy x = logit_equilibrium(
        rps(), Temperature(1), ScoreVector(vec({1, 0.5, 0})), SolverConfig{});
    CHECK(max_abs_diff(x.probs(), Vector::Constant(3, 1.0 / 3.0)) < 1e-9);
  }
  SUBCASE("zero game maps to uniform") {
    const MixedStrategy x =
        logit_equilibrium(MatrixGame(Matrix::Zero(4, 4)), Temperature(2),
                          ScoreVector(vec({1, 2, 3, 4})), SolverConfig{});
    CHECK(max_abs_diff(x.probs(), Vector::Constant(4, 0.25)) < 1e-9);
  }
  SUBCASE("identity game matches the scalar bisection oracle") {
    // For U = x and n = 2, the equilibrium satisfies
    // x = logistic(lambda (2x - 1)); solve it by bisection on [0, 1].
    const double lambda = 1.0;
    auto g = [lambda](double x) {
      return 1.0 / (1.0 + std::exp(-lambda * (2.0 * x - 1.0))) - x;
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
    const double oracle = 0.5 * (lo + hi);

    const MixedStrategy x = logit_equilibrium(
        MatrixGame(Matrix::Identity(2, 2)), Temperature(lambda),
        ScoreVector(vec({0.3, -0.1})), SolverConfig{});
    CHECK(std::abs(x.probs()[0] - oracle) < 1e-8);
    CHECK(std::abs(x.probs()[0] - 0.5) < 1e-8);
  }
  SUBCASE("iteration budget exhaustion is an explicit failure") {
    CHECK_THROWS_AS(
        logit_equilibrium(MatrixGame(Matrix::Identity(2, 2)), Temperature(5),
                          ScoreVector::zero(2), SolverConfig{1e-10, 10, 0.5}),
        NoConvergenceError);
    // solve_fixed_point reports the same situation as data, not an error.
    const FixedPointResult r = solve_fixed_point(
        MatrixGame(Matrix::Identity(2, 2)), Temperature(5),
        ScoreVector::zero(2), SolverConfig{1e-10, 10, 0.5});
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 10);
    CHECK(r.residual > 1e-10);
  }
}

TEST_CASE("equilibrium verification residual") {
  const Temperature t(1);
  CHECK(verify_equilibrium(rps(), t, MixedStrategy::uniform(3)) <= 1e-15);

  // A vertex-leaning strategy is not an equilibrium; compare against the
  // directly composed map.
  const MixedStrategy x(vec({0.6, 0.2, 0.2}));
  const double res = verify_equilibrium(rps(), t, x);
  const Vector u = rps().payoff_matrix() * x.probs();
  const Vector mapped = softmax(ScoreVector(u), t).probs();
  CHECK(res == doctest::Approx((mapped - x.probs()).lpNorm<Eigen::Infinity>())
                   .epsilon(1e-15));
  CHECK(res > 1e-2);

  // Solver output verifies within twice its tolerance.
  const SolverConfig cfg{1e-10, 100000, 0.5};
  const MixedStrategy eq =
      logit_equilibrium(rps(), t, ScoreVector(vec({1, 0.5, 0})), cfg);
  CHECK(verify_equilibrium(rps(), t, eq) <= 2.0 * cfg.tol);

  CHECK_THROWS_AS(verify_equilibrium(rps(), t, MixedStrategy(vec({1, 0, 0}))),
                  InvalidInputError);
  CHECK_THROWS_AS(verify_equilibrium(rps(), t, MixedStrategy::uniform(4)),
                  InvalidInputError);
}

TEST_CASE("contraction certificate values") {
  const ContractionCertificate small = contraction_certificate(rps(),
                                                               Temperature(0.1));
  CHECK(small.bound == doctest::Approx(2.0 * std::sqrt(3.0) * 0.1)
                           .epsilon(1e-14));
  CHECK(small.certified);

  const ContractionCertificate big = contraction_certificate(rps(),
                                                              Temperature(1));
  CHECK(big.bound == doctest::Approx(3.4641).epsilon(1e-4));
  CHECK_FALSE(big.certified);

  const ContractionCertificate zero = contraction_certificate(
      MatrixGame(Matrix::Zero(5, 5)), Temperature(3));
  CHECK(zero.bound == 0.0);
  CHECK(zero.certified);
}

TEST_CASE("solving from shifted starts lands on the same strategy") {
  const Temperature t(1);
  const SolverConfig cfg{1e-12, 200000, 0.5};
  const FixedPointResult a =
      solve_fixed_point(rps(), t, ScoreVector(vec({1, 0.5, 0})), cfg);
  const FixedPointResult b =
      solve_fixed_point(rps(), t, ScoreVector(vec({4, 3.5, 3})), cfg);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(max_abs_diff(a.x_star, b.x_star) <= 1e-9);
}

TEST_CASE("solver config validation") {
  const ScoreVector z0 = ScoreVector::zero(3);
  CHECK_THROWS_AS(
      solve_fixed_point(rps(), Temperature(1), z0, SolverConfig{0.0, 10, 0.5}),
      InvalidInputError);
  CHECK_THROWS_AS(
      solve_fixed_point(rps(), Temperature(1), z0, SolverConfig{1e-10, 0, 0.5}),
      InvalidInputError);
  CHECK_THROWS_AS(
      solve_fixed_point(rps(), Temperature(1), z0,
                        SolverConfig{1e-10, 10, 0.0}),
      InvalidInputError);
  CHECK_THROWS_AS(
      solve_fixed_point(rps(), Temperature(1), z0,
                        SolverConfig{1e-10, 10, 1.5}),
      InvalidInputError);
  CHECK_THROWS_AS(
      solve_fixed_point(rps(), Temperature(1), ScoreVector::zero(4),
                        SolverConfig{}),
      InvalidInputError);
}

TEST_CASE("contract-violating payoff map triggers the divergence guard") {
  // Blows up as the first coordinate shrinks, violating the finite-output
  // contract of PayoffFunction.
  const PayoffFunction bad = [](const Vector& x) {
    Vector u(x.size());
    u.setConstant(1e308 / std::max(x[0], 1e-12));
    return u;
  };
  CHECK_THROWS_AS(solve_fixed_point(bad, Temperature(5),
                                    ScoreVector(vec({-40.0, 40.0})),
                                    SolverConfig{1e-10, 1000, 1.0}),
                  SolverDivergedError);
}

TEST_CASE("fixed point result serialization") {
  const Temperature t(0.1);
  const FixedPointResult r = solve_fixed_point(
      rps(), t, ScoreVector(vec({1, 0.5, 0})), SolverConfig{});
  const ContractionCertificate cert = contraction_certificate(rps(), t);
  const auto j = nlohmann::json::parse(to_json(r, cert, t));
  CHECK(j["z_star"].size() == 3);
  CHECK(j["x_star"].size() == 3);
  CHECK(j["converged"] == true);
  CHECK(j["certified_contraction"] == true);
  CHECK(j["lambda"] == 0.1);
  CHECK(j["residual"].get<double>() <= 1e-10);
  CHECK(j["iterations"].get<long>() >= 1);
}
