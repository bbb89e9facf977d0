#pragma once

#include <string>
#include <vector>

#include "smax/matrix_game.hpp"
#include "smax/types.hpp"

namespace smax {

struct SolverConfig {
  double tol = 1e-10;      // inf-norm residual target
  long max_iter = 100000;
  double damping = 0.5;    // step alpha in (0, 1]; 1 = undamped
};

// Outcome of a damped Picard iteration on z -> U(sigma(z)). The residual
// is ||U(sigma(z)) - z||_inf; residual_history holds it for the start
// iterate and every subsequent one.
struct FixedPointResult {
  Vector z_star;
  Vector x_star;      // sigma(z_star)
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

// Iterates z <- (1 - alpha) z + alpha U(sigma(z)) until the residual drops
// to cfg.tol or cfg.max_iter is exhausted (the latter returns a result
// with converged = false rather than throwing). A non-finite iterate
// raises SolverDivergedError.
FixedPointResult solve_fixed_point(const MatrixGame& g, Temperature t,
                                   const ScoreVector& z0,
                                   const SolverConfig& cfg);
FixedPointResult solve_fixed_point(const PayoffFunction& payoff, Temperature t,
                                   const ScoreVector& z0,
                                   const SolverConfig& cfg);

// sigma(z_star) from a converged solve; raises NoConvergenceError when the
// solver runs out of iterations.
MixedStrategy logit_equilibrium(const MatrixGame& g, Temperature t,
                                const ScoreVector& z0, const SolverConfig& cfg);

// ||sigma(U(x_star)) - x_star||_inf; zero exactly at a logit equilibrium.
// Requires a strictly interior strategy.
double verify_equilibrium(const MatrixGame& g, Temperature t,
                          const MixedStrategy& x_star);

// A-priori modulus of U o sigma in the inf-norm:
// L_hat = ||A||_inf * sqrt(n) * lambda. certified iff L_hat < 1 (sufficient,
// not necessary, for the map to be a contraction).
struct ContractionCertificate {
  double bound = 0.0;
  bool certified = false;
};

ContractionCertificate contraction_certificate(const MatrixGame& g,
                                               Temperature t);

// {z_star, x_star, residual, iterations, converged, certified_contraction,
// lambda}.
std::string to_json(const FixedPointResult& result,
                    const ContractionCertificate& cert, Temperature t);

}  // namespace smax
