#include "smax/score_dynamics.hpp"

#include <cmath>
#include <cstdio>

#include "internal.hpp"

namespace smax {

namespace {

using detail::lse_value;
using detail::softmax_values;

void validate_config(const IntegratorConfig& cfg) {
  if (!std::isfinite(cfg.dt) || cfg.dt <= 0.0) {
    throw InvalidInputError("integrator: dt must be finite and > 0");
  }
  if (!std::isfinite(cfg.t_end) || cfg.t_end < cfg.dt) {
    throw InvalidInputError("integrator: t_end must be finite and >= dt");
  }
  if (cfg.record_every < 1) {
    throw InvalidInputError("integrator: record_every must be >= 1");
  }
}

void write_field(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

Trajectory::Trajectory(std::vector<TrajectorySample> samples)
    : samples_(std::move(samples)) {}

void Trajectory::set_lyapunov_reference(const ScoreVector& z_star,
                                        Temperature t) {
  for (auto& s : samples_) {
    s.lyapunov = lyapunov_value(ScoreVector(s.z), z_star, t);
  }
}

void Trajectory::write_csv(std::ostream& os) const {
  const Index n = dim();
  os << "t";
  for (Index i = 1; i <= n; ++i) os << ",z_" << i;
  for (Index i = 1; i <= n; ++i) os << ",x_" << i;
  os << ",V\n";
  for (const auto& s : samples_) {
    write_field(os, s.t);
    for (Index i = 0; i < n; ++i) {
      os << ',';
      write_field(os, s.z[i]);
    }
    for (Index i = 0; i < n; ++i) {
      os << ',';
      write_field(os, s.x[i]);
    }
    os << ',';
    if (s.lyapunov) write_field(os, *s.lyapunov);
    os << '\n';
  }
}

Vector score_field(const PayoffFunction& payoff, Temperature t,
                   const ScoreVector& z) {
  const Vector u = payoff(softmax_values(z.values(), t.lambda()));
  if (u.size() != z.dim()) {
    throw InvalidInputError("score field: payoff dimension mismatch");
  }
  return u - z.values();
}

Vector score_field(const MatrixGame& g, Temperature t, const ScoreVector& z) {
  if (g.actions() != z.dim()) {
    throw InvalidInputError("score field: game dimension mismatch");
  }
  return score_field(payoff_function(g), t, z);
}

Trajectory integrate(const PayoffFunction& payoff, Temperature t,
                     const ScoreVector& z0, const IntegratorConfig& cfg) {
  validate_config(cfg);
  const double lambda = t.lambda();
  const auto field = [&](const Vector& v) -> Vector {
    return payoff(softmax_values(v, lambda)) - v;
  };

  const long steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt));
  std::vector<TrajectorySample> samples;
  samples.reserve(static_cast<std::size_t>(steps / cfg.record_every + 2));

  Vector z = z0.values();
  samples.push_back({0.0, z, softmax_values(z, lambda), std::nullopt});

  for (long k = 1; k <= steps; ++k) {
    const bool last = k == steps;
    const double h = last ? cfg.t_end - cfg.dt * static_cast<double>(steps - 1)
                          : cfg.dt;
    const Vector k1 = field(z);
    const Vector k2 = field(z + 0.5 * h * k1);
    const Vector k3 = field(z + 0.5 * h * k2);
    const Vector k4 = field(z + h * k3);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tk = last ? cfg.t_end : cfg.dt * static_cast<double>(k);
    if (!z.allFinite()) {
      throw IntegrationDivergedError(
          "integration diverged at t = " + std::to_string(tk),
          Trajectory(std::move(samples)));
    }
    if (last || k % cfg.record_every == 0) {
      samples.push_back({tk, z, softmax_values(z, lambda), std::nullopt});
    }
  }
  return Trajectory(std::move(samples));
}

Trajectory integrate(const MatrixGame& g, Temperature t, const ScoreVector& z0,
                     const IntegratorConfig& cfg) {
  if (g.actions() != z0.dim()) {
    throw InvalidInputError("integrate: game dimension mismatch");
  }
  return integrate(payoff_function(g), t, z0, cfg);
}

double lyapunov_value(const ScoreVector& z, const ScoreVector& z_star,
                      Temperature t) {
  if (z.dim() != z_star.dim()) {
    throw InvalidInputError("lyapunov: dimension mismatch");
  }
  const double lambda = t.lambda();
  const Vector s_star = softmax_values(z_star.values(), lambda);
  return lse_value(z.values(), lambda) - lse_value(z_star.values(), lambda) -
         s_star.dot(z.values() - z_star.values());
}

PropertyReport monitor_lyapunov(const Trajectory& traj, const MatrixGame& g,
                                const ScoreVector& z_star, Temperature t) {
  if (traj.empty()) {
    throw InvalidInputError("lyapunov monitor: empty trajectory");
  }
  if (traj.dim() != z_star.dim() || traj.dim() != g.actions()) {
    throw InvalidInputError("lyapunov monitor: dimension mismatch");
  }
  const double rest_residual = score_field(g, t, z_star).norm();
  if (rest_residual > 1e-8) {
    throw InvalidReferenceError(
        "lyapunov monitor: reference is not a rest point (field norm " +
        std::to_string(rest_residual) + ")");
  }

  PropertyReport report;
  report.property = "lyapunov_dissipation";
  const double lambda = t.lambda();
  const double inv_lambda = t.inverse();
  const Vector s_star = softmax_values(z_star.values(), lambda);
  const auto& samples = traj.samples();
  double worst = -std::numeric_limits<double>::infinity();

  double v_prev = lyapunov_value(ScoreVector(samples.front().z), z_star, t);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double v_next =
        lyapunov_value(ScoreVector(samples[k].z), z_star, t);
    const double dt = samples[k].t - samples[k - 1].t;
    const double excess_monotone = (v_next - v_prev) - 1e-10;
    const double rate = (v_next - v_prev) / dt;
    const double rate_bound =
        -inv_lambda * (samples[k - 1].x - s_star).squaredNorm() + 1e-3;
    const double excess = std::max(excess_monotone, rate - rate_bound);
    if (excess > worst) {
      worst = excess;
      report.witness = {samples[k - 1].z, samples[k].z, lambda};
    }
    ++report.n_samples;
    if (excess > 0.0) ++report.violations;
    v_prev = v_next;
  }
  report.worst_margin = std::isfinite(worst) ? worst : 0.0;
  return report;
}

Vector replicator_field(const MixedStrategy& x, const Vector& u,
                        Temperature t) {
  if (u.size() != x.dim()) {
    throw InvalidInputError("replicator field: dimension mismatch");
  }
  if (!u.allFinite()) {
    throw InvalidInputError("replicator field: payoff must be finite");
  }
  const Vector& p = x.probs();
  const double mean = p.dot(u);
  return t.lambda() * p.cwiseProduct((u.array() - mean).matrix());
}

PropertyReport invariant_set_check(const Trajectory& traj,
                                   const MatrixGame& g) {
  if (traj.empty()) {
    throw InvalidInputError("invariant set check: empty trajectory");
  }
  if (traj.dim() != g.actions()) {
    throw InvalidInputError("invariant set check: dimension mismatch");
  }
  PropertyReport report;
  report.property = "invariant_set";
  const double radius =
      std::sqrt(static_cast<double>(g.actions())) * payoff_bound(g);
  const double bound =
      std::max(traj.front().z.norm(), radius) + 1e-8;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : traj.samples()) {
    const double excess = s.z.norm() - bound;
    if (excess > worst) {
      worst = excess;
      report.witness = {s.z, traj.front().z,
                        std::numeric_limits<double>::quiet_NaN()};
    }
    ++report.n_samples;
    if (excess > 0.0) ++report.violations;
  }
  report.worst_margin = worst;
  return report;
}

}  // namespace smax
