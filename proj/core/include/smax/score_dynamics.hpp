#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "smax/matrix_game.hpp"
#include "smax/property_checks.hpp"
#include "smax/types.hpp"

namespace smax {

struct IntegratorConfig {
  double dt = 0.01;
  double t_end = 50.0;
  long record_every = 10;  // sampling stride in steps
};

struct TrajectorySample {
  double t;
  Vector z;
  Vector x;                        // sigma(z) at the sample time
  std::optional<double> lyapunov;  // set once a reference point is attached
};

// Time-ordered samples of a score-dynamics run. Sample times are strictly
// increasing and x = sigma(z) at every sample.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<TrajectorySample> samples);

  const std::vector<TrajectorySample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const TrajectorySample& front() const { return samples_.front(); }
  const TrajectorySample& back() const { return samples_.back(); }
  Index dim() const { return samples_.empty() ? 0 : samples_.front().z.size(); }

  // Fills the Lyapunov column with the Bregman divergence of lse about
  // z_star at every sample.
  void set_lyapunov_reference(const ScoreVector& z_star, Temperature t);

  // Header "t,z_1..z_n,x_1..x_n,V", one row per sample, 17 significant
  // digits; the V field stays empty when no reference is attached.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<TrajectorySample> samples_;
};

// Raised when the integration state turns non-finite; carries whatever was
// recorded up to that point.
class IntegrationDivergedError : public Error {
 public:
  IntegrationDivergedError(const std::string& what, Trajectory partial)
      : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

// U(sigma(z)) - z.
Vector score_field(const MatrixGame& g, Temperature t, const ScoreVector& z);
Vector score_field(const PayoffFunction& payoff, Temperature t,
                   const ScoreVector& z);

// Classical fixed-step 4th-order Runge-Kutta on zdot = U(sigma(z)) - z.
// Records the initial state, every record_every-th step, and the state at
// t_end (final step shortened when t_end is not a step multiple).
Trajectory integrate(const MatrixGame& g, Temperature t, const ScoreVector& z0,
                     const IntegratorConfig& cfg);
Trajectory integrate(const PayoffFunction& payoff, Temperature t,
                     const ScoreVector& z0, const IntegratorConfig& cfg);

// Bregman divergence generated by lse:
// V(z) = lse(z) - lse(z_star) - sigma(z_star)^T (z - z_star).
// Nonnegative by convexity; vanishes along the whole line z_star + c 1.
double lyapunov_value(const ScoreVector& z, const ScoreVector& z_star,
                      Temperature t);

// Scans a trajectory against the reference rest point z_star: V must not
// increase by more than 1e-10 per recorded step, and the discrete rate
// (V_{k+1} - V_k) / (t_{k+1} - t_k) must stay below
// -lambda^{-1} ||sigma(z_k) - sigma(z_star)||_2^2 + 1e-3 (left-endpoint
// bound with discretization slack). Margin: the larger constraint excess;
// worst_margin its max over consecutive sample pairs. Throws
// InvalidReferenceError when ||U(sigma(z_star)) - z_star||_2 > 1e-8.
PropertyReport monitor_lyapunov(const Trajectory& traj, const MatrixGame& g,
                                const ScoreVector& z_star, Temperature t);

// lambda (diag(x) - x x^T) u, computed componentwise as
// lambda x_i (u_i - x^T u). Components sum to zero.
Vector replicator_field(const MixedStrategy& x, const Vector& u,
                        Temperature t);

// ||z(t)||_2 <= max(||z(0)||_2, sqrt(n) M) + 1e-8 at every sample, with
// M = payoff_bound(g). Margin: the excess; worst_margin its max.
PropertyReport invariant_set_check(const Trajectory& traj,
                                   const MatrixGame& g);

}  // namespace smax
