#include "smax/property_checks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "internal.hpp"

namespace smax {

namespace {

using detail::lse_value;
using detail::softmax_values;

VectorMap softmax_map(double lambda) {
  return [lambda](const Vector& z) { return softmax_values(z, lambda); };
}

double neg_entropy_raw(const Vector& x, double inv_lambda) {
  double acc = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) acc += x[i] * std::log(x[i]);
  }
  return acc * inv_lambda;
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Tracks the extremal margin and its witness. `minimize` selects whether
// smaller margins are worse.
struct MarginTracker {
  bool minimize;
  double worst;
  Witness witness;

  explicit MarginTracker(bool minimize_)
      : minimize(minimize_),
        worst(minimize_ ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity()) {}

  void offer(double margin, const Vector& z, const Vector& zp, double lambda) {
    const bool worse = minimize ? margin < worst : margin > worst;
    if (worse) {
      worst = margin;
      witness = {z, zp, lambda};
    }
  }

  void finish(PropertyReport& report) const {
    report.worst_margin = std::isfinite(worst) ? worst : 0.0;
    report.witness = witness;
  }
};

}  // namespace

std::string to_json(const PropertyReport& r) {
  nlohmann::json j;
  j["property"] = r.property;
  j["n_samples"] = r.n_samples;
  j["violations"] = r.violations;
  j["worst_margin"] = r.worst_margin;
  j["witness"] = {{"z", to_std(r.witness.z)},
                  {"z_prime", to_std(r.witness.z_prime)},
                  {"lambda", r.witness.lambda}};
  if (r.inconclusive > 0) j["inconclusive"] = r.inconclusive;
  return j.dump(2);
}

PropertyReport check_monotone(const SampleEnsemble& ens, Temperature t,
                              const VectorMap& op) {
  PropertyReport report;
  report.property = "monotonicity";
  EnsembleSampler s(ens);
  MarginTracker tracker(true);
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const Vector zp = s.score_vector();
    const double margin = (op(z) - op(zp)).dot(z - zp);
    tracker.offer(margin, z, zp, t.lambda());
    ++report.n_samples;
    if (margin < -1e-12) ++report.violations;
  }
  tracker.finish(report);
  return report;
}

PropertyReport check_monotone(const SampleEnsemble& ens, Temperature t) {
  return check_monotone(ens, t, softmax_map(t.lambda()));
}

PropertyReport check_lipschitz(const SampleEnsemble& ens, Temperature t,
                               const VectorMap& op) {
  PropertyReport report;
  report.property = "lipschitz";
  EnsembleSampler s(ens);
  MarginTracker tracker(false);
  const double bound = t.lambda() * (1.0 + 1e-9);
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const Vector zp = s.score_vector();
    const double dz = (z - zp).norm();
    if (dz <= 1e-12) continue;
    const double ratio = (op(z) - op(zp)).norm() / dz;
    tracker.offer(ratio, z, zp, t.lambda());
    ++report.n_samples;
    if (ratio > bound) ++report.violations;
  }
  tracker.finish(report);
  return report;
}

PropertyReport check_lipschitz(const SampleEnsemble& ens, Temperature t) {
  return check_lipschitz(ens, t, softmax_map(t.lambda()));
}

PropertyReport check_cocoercive(const SampleEnsemble& ens, Temperature t,
                                const VectorMap& op) {
  PropertyReport report;
  report.property = "cocoercivity";
  EnsembleSampler s(ens);
  MarginTracker tracker(true);
  const double inv_lambda = t.inverse();
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const Vector zp = s.score_vector();
    const Vector ds = op(z) - op(zp);
    const double margin = ds.dot(z - zp) - inv_lambda * ds.squaredNorm();
    tracker.offer(margin, z, zp, t.lambda());
    ++report.n_samples;
    if (margin < -1e-12) ++report.violations;
  }
  tracker.finish(report);
  return report;
}

PropertyReport check_cocoercive(const SampleEnsemble& ens, Temperature t) {
  return check_cocoercive(ens, t, softmax_map(t.lambda()));
}

PropertyReport check_fenchel_young(const SampleEnsemble& ens, Temperature t) {
  PropertyReport report;
  report.property = "fenchel_young";
  EnsembleSampler s(ens);
  MarginTracker tracker(true);
  const double lambda = t.lambda();
  const double inv_lambda = t.inverse();
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const Vector x = s.simplex_point();
    const double val = lse_value(z, lambda);
    const double gap = val - (x.dot(z) - neg_entropy_raw(x, inv_lambda));
    tracker.offer(gap, z, x, lambda);
    ++report.n_samples;
    if (gap < -1e-10) ++report.violations;
    // Conjugacy equality at the maximizer x = sigma(z).
    const Vector sm = softmax_values(z, lambda);
    const double dev =
        std::abs(val - (sm.dot(z) - neg_entropy_raw(sm, inv_lambda)));
    if (dev > 1e-9) ++report.violations;
  }
  tracker.finish(report);
  return report;
}

PropertyReport check_argmax_equivalence(const SampleEnsemble& ens,
                                        Temperature t) {
  if (ens.dimension() > 6) {
    throw InvalidInputError(
        "argmax equivalence: oracle limited to dimension <= 6");
  }
  PropertyReport report;
  report.property = "argmax_equivalence";
  EnsembleSampler s(ens);
  MarginTracker tracker(false);
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const ProjectedAscentResult oracle = maximize_free_energy(z, t);
    ++report.n_samples;
    if (!oracle.converged) {
      ++report.inconclusive;
      continue;
    }
    const double dev = (softmax_values(z, t.lambda()) - oracle.maximizer)
                           .lpNorm<Eigen::Infinity>();
    tracker.offer(dev, z, oracle.maximizer, t.lambda());
    if (dev > 1e-6) ++report.violations;
  }
  tracker.finish(report);
  return report;
}

PropertyReport check_permutation_equivariance(const SampleEnsemble& ens,
                                              Temperature t) {
  PropertyReport report;
  report.property = "permutation_equivariance";
  EnsembleSampler s(ens);
  MarginTracker tracker(false);
  const Index n = ens.dimension();
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const auto perm = s.permutation();
    Vector pz(n);
    for (Index k = 0; k < n; ++k) pz[k] = z[perm[static_cast<std::size_t>(k)]];
    const Vector lhs = softmax_values(pz, t.lambda());
    const Vector sz = softmax_values(z, t.lambda());
    double dev = 0.0;
    for (Index k = 0; k < n; ++k) {
      dev = std::max(dev,
                     std::abs(lhs[k] - sz[perm[static_cast<std::size_t>(k)]]));
    }
    tracker.offer(dev, z, pz, t.lambda());
    ++report.n_samples;
    if (dev > 1e-12) ++report.violations;
  }
  tracker.finish(report);
  return report;
}

PropertyReport check_coordinate_nonexpansive(const SampleEnsemble& ens) {
  PropertyReport report;
  report.property = "coordinate_nonexpansive";
  EnsembleSampler s(ens);
  MarginTracker tracker(false);
  const Index n = ens.dimension();
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const Vector sm = softmax_values(z, 1.0);
    double excess = -std::numeric_limits<double>::infinity();
    for (Index a = 0; a < n; ++a) {
      for (Index b = a + 1; b < n; ++b) {
        const Index hi = z[a] >= z[b] ? a : b;
        const Index lo = z[a] >= z[b] ? b : a;
        const double d = sm[hi] - sm[lo];
        excess = std::max(excess, -d);
        excess = std::max(excess, d - 0.5 * (z[hi] - z[lo]));
      }
    }
    tracker.offer(excess, z, z, 1.0);
    ++report.n_samples;
    if (excess > 1e-12) ++report.violations;
  }
  tracker.finish(report);
  return report;
}

PropertyReport check_one_vs_each(const SampleEnsemble& ens, Temperature t) {
  PropertyReport report;
  report.property = "one_vs_each";
  EnsembleSampler s(ens);
  MarginTracker tracker(true);
  const Index n = ens.dimension();
  const double lambda = t.lambda();
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const Vector sm = softmax_values(z, lambda);
    for (Index a = 0; a < n; ++a) {
      double prod = 1.0;
      for (Index b = 0; b < n; ++b) {
        if (b == a) continue;
        prod *= 1.0 / (1.0 + std::exp(-lambda * (z[a] - z[b])));
      }
      const double margin = sm[a] - prod;
      tracker.offer(margin, z, z, lambda);
      if (margin < -1e-12) ++report.violations;
      // The bound is an equality in dimension 2.
      if (n == 2 && std::abs(margin) > 1e-12) ++report.violations;
    }
    ++report.n_samples;
  }
  tracker.finish(report);
  return report;
}

PropertyReport check_shift_invariance(const SampleEnsemble& ens,
                                      Temperature t) {
  PropertyReport report;
  report.property = "shift_invariance";
  EnsembleSampler s(ens);
  MarginTracker tracker(false);
  const double lambda = t.lambda();
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const double c = s.uniform(-1e3, 1e3);
    const Vector zc = z.array() + c;
    const double dev_sm = (softmax_values(zc, lambda) -
                           softmax_values(z, lambda))
                              .lpNorm<Eigen::Infinity>();
    const double dev_lse =
        std::abs(lse_value(zc, lambda) - lse_value(z, lambda) - c);
    const double excess = std::max(dev_sm - 1e-12, dev_lse - 1e-9);
    tracker.offer(excess, z, zc, lambda);
    ++report.n_samples;
    if (excess > 0.0) ++report.violations;
  }
  tracker.finish(report);
  return report;
}

PropertyReport check_vecmax_sandwich(const SampleEnsemble& ens,
                                     Temperature t) {
  PropertyReport report;
  report.property = "vecmax_sandwich";
  EnsembleSampler s(ens);
  MarginTracker tracker(false);
  const double lambda = t.lambda();
  const double gap = std::log(static_cast<double>(ens.dimension())) / lambda;
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const double m = z.maxCoeff();
    const double val = lse_value(z, lambda);
    const double excess = std::max(m - val, val - (m + gap));
    tracker.offer(excess, z, z, lambda);
    ++report.n_samples;
    if (excess > 1e-12) ++report.violations;
  }
  tracker.finish(report);
  return report;
}

double empirical_lipschitz_modulus(const VectorMap& map,
                                   const SampleEnsemble& ens, Norm norm) {
  EnsembleSampler s(ens);
  double worst = 0.0;
  for (long i = 0; i < ens.count(); ++i) {
    const Vector z = s.score_vector();
    const Vector zp = s.score_vector();
    const Vector dz = z - zp;
    const Vector df = map(z) - map(zp);
    const double den = norm == Norm::kTwo ? dz.norm()
                                          : dz.lpNorm<Eigen::Infinity>();
    if (den <= 1e-12) continue;
    const double num = norm == Norm::kTwo ? df.norm()
                                          : df.lpNorm<Eigen::Infinity>();
    worst = std::max(worst, num / den);
  }
  return worst;
}

Vector simplex_projection(const Vector& v) {
  const Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double tau = u[0] - 1.0;
  for (Index i = 0; i < n; ++i) {
    css += u[static_cast<std::size_t>(i)];
    const double cand = (css - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] > cand) tau = cand;
  }
  return (v.array() - tau).max(0.0);
}

namespace {

double free_energy(const Vector& x, const Vector& z, double inv_lambda) {
  return x.dot(z) - neg_entropy_raw(x, inv_lambda);
}

Vector free_energy_grad(const Vector& x, const Vector& z, double inv_lambda) {
  Vector g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    // The entropy term's slope blows up at the boundary; the floor keeps
    // the gradient finite while still pushing clamped coordinates inward.
    g[i] = z[i] - inv_lambda * (1.0 + std::log(std::max(x[i], 1e-16)));
  }
  return g;
}

}  // namespace

ProjectedAscentResult maximize_free_energy(const Vector& z, Temperature t,
                                           long max_iter) {
  const Index n = z.size();
  const double lambda = t.lambda();
  const double inv_lambda = t.inverse();
  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  double fx = free_energy(x, z, inv_lambda);
  // 1/L at the barycenter, where the entropy curvature is inv_lambda * n.
  const double step0 = lambda / static_cast<double>(n);
  double step = step0;

  ProjectedAscentResult result;
  long iter = 0;

  // Phase 1: Armijo-backtracked ascent for globalization. Objective
  // comparisons bottom out at sqrt(eps) accuracy, so this phase only needs
  // to reach a loose plateau.
  const long phase1_budget = max_iter / 2;
  for (; iter < phase1_budget; ++iter) {
    const Vector g = free_energy_grad(x, z, inv_lambda);
    bool accepted = false;
    Vector x_new;
    double f_new = 0.0;
    while (step >= 1e-18) {
      x_new = simplex_projection(x + step * g);
      f_new = free_energy(x_new, z, inv_lambda);
      const double linear = g.dot(x_new - x);
      if (f_new >= fx + 1e-4 * linear - 1e-15 * (1.0 + std::abs(fx))) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double move = (x_new - x).lpNorm<Eigen::Infinity>();
    x = std::move(x_new);
    fx = f_new;
    if (move <= 1e-7) break;
    step = std::min(step * 1.25, lambda);
  }

  // Phase 2: fixed curvature-bounded steps, no objective comparisons. The
  // entropy curvature on the segment is at most inv_lambda / (x_min / 2),
  // so s = lambda x_min / 2 keeps plain gradient steps contractive and the
  // displacement is a clean optimality measure down to machine precision.
  for (; iter < max_iter; ++iter) {
    const Vector g = free_energy_grad(x, z, inv_lambda);
    const double x_min = std::max(x.minCoeff(), 1e-12);
    const double s = 0.5 * lambda * x_min;
    const Vector x_new = simplex_projection(x + s * g);
    const double move = (x_new - x).lpNorm<Eigen::Infinity>();
    x = x_new;
    if (move <= 1e-13 && x_min >= 1e-6) {
      result.converged = true;
      break;
    }
  }

  if (!result.converged) {
    // Fixed points of the projected gradient step are exactly the
    // maximizers; a vanishing probe displacement at the reference step
    // still certifies the answer when the iteration cap was hit.
    const Vector probe =
        simplex_projection(x + step0 * free_energy_grad(x, z, inv_lambda));
    result.converged = (probe - x).lpNorm<Eigen::Infinity>() <= 1e-8;
  }
  result.maximizer = std::move(x);
  result.iterations = iter;
  return result;
}

}  // namespace smax
