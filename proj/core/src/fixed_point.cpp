#include "smax/fixed_point.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "internal.hpp"

namespace smax {

namespace {

void validate_config(const SolverConfig& cfg) {
  if (!std::isfinite(cfg.tol) || cfg.tol <= 0.0) {
    throw InvalidInputError("solver: tol must be finite and > 0");
  }
  if (cfg.max_iter < 1) {
    throw InvalidInputError("solver: max_iter must be >= 1");
  }
  if (!std::isfinite(cfg.damping) || cfg.damping <= 0.0 || cfg.damping > 1.0) {
    throw InvalidInputError("solver: damping must be in (0, 1]");
  }
}

}  // namespace

FixedPointResult solve_fixed_point(const PayoffFunction& payoff, Temperature t,
                                   const ScoreVector& z0,
                                   const SolverConfig& cfg) {
  validate_config(cfg);
  const double lambda = t.lambda();
  const double alpha = cfg.damping;

  Vector z = z0.values();
  Vector mapped = payoff(detail::softmax_values(z, lambda));
  if (mapped.size() != z.size()) {
    throw InvalidInputError("solver: payoff dimension mismatch");
  }

  FixedPointResult result;
  result.residual_history.reserve(64);
  double residual = (mapped - z).lpNorm<Eigen::Infinity>();
  result.residual_history.push_back(residual);

  long iter = 0;
  while (residual > cfg.tol && iter < cfg.max_iter) {
    z = (1.0 - alpha) * z + alpha * mapped;
    ++iter;
    if (!z.allFinite()) {
      throw SolverDivergedError("solver: non-finite iterate at iteration " +
                                std::to_string(iter));
    }
    mapped = payoff(detail::softmax_values(z, lambda));
    if (!mapped.allFinite()) {
      throw SolverDivergedError("solver: non-finite payoff at iteration " +
                                std::to_string(iter));
    }
    residual = (mapped - z).lpNorm<Eigen::Infinity>();
    result.residual_history.push_back(residual);
  }

  result.z_star = std::move(z);
  result.x_star = detail::softmax_values(result.z_star, lambda);
  result.residual = residual;
  result.iterations = iter;
  result.converged = residual <= cfg.tol;
  return result;
}

FixedPointResult solve_fixed_point(const MatrixGame& g, Temperature t,
                                   const ScoreVector& z0,
                                   const SolverConfig& cfg) {
  if (g.actions() != z0.dim()) {
    throw InvalidInputError("solver: game dimension mismatch");
  }
  return solve_fixed_point(payoff_function(g), t, z0, cfg);
}

MixedStrategy logit_equilibrium(const MatrixGame& g, Temperature t,
                                const ScoreVector& z0,
                                const SolverConfig& cfg) {
  const FixedPointResult result = solve_fixed_point(g, t, z0, cfg);
  if (!result.converged) {
    throw NoConvergenceError(
        "logit equilibrium: no convergence after " +
        std::to_string(result.iterations) +
        " iterations (residual " + std::to_string(result.residual) + ")");
  }
  return MixedStrategy(result.x_star);
}

double verify_equilibrium(const MatrixGame& g, Temperature t,
                          const MixedStrategy& x_star) {
  if (g.actions() != x_star.dim()) {
    throw InvalidInputError("verify equilibrium: dimension mismatch");
  }
  if (x_star.probs().minCoeff() <= 0.0) {
    throw InvalidInputError(
        "verify equilibrium: strategy must be strictly interior");
  }
  const Vector u = g.payoff_matrix() * x_star.probs();
  const Vector mapped = detail::softmax_values(u, t.lambda());
  return (mapped - x_star.probs()).lpNorm<Eigen::Infinity>();
}

ContractionCertificate contraction_certificate(const MatrixGame& g,
                                               Temperature t) {
  const double a_inf = g.payoff_matrix().cwiseAbs().rowwise().sum().maxCoeff();
  const double bound =
      a_inf * std::sqrt(static_cast<double>(g.actions())) * t.lambda();
  return {bound, bound < 1.0};
}

std::string to_json(const FixedPointResult& result,
                    const ContractionCertificate& cert, Temperature t) {
  nlohmann::json j;
  j["z_star"] = std::vector<double>(result.z_star.data(),
                                    result.z_star.data() + result.z_star.size());
  j["x_star"] = std::vector<double>(result.x_star.data(),
                                    result.x_star.data() + result.x_star.size());
  j["residual"] = result.residual;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["certified_contraction"] = cert.certified;
  j["lambda"] = t.lambda();
  return j.dump(2);
}

}  // namespace smax
