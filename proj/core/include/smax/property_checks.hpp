#pragma once

#include <functional>
#include <limits>
#include <string>

#include "smax/ensemble.hpp"
#include "smax/types.hpp"

namespace smax {

// Inputs achieving the extremal margin of a check. `z_prime` holds the
// second input when the check involves one (the paired score vector, the
// permuted copy, the simplex point, the oracle output); otherwise it
// repeats `z`.
struct Witness {
  Vector z;
  Vector z_prime;
  double lambda = std::numeric_limits<double>::quiet_NaN();
};

// Outcome of one sampled property check. `worst_margin` is the extremal
// per-sample margin in the units documented on each check; `violations` is
// zero exactly when every sampled margin stays within the check's tolerance.
// `inconclusive` counts samples whose independent oracle failed to converge
// (argmax equivalence only); an inconclusive report is not a pass.
struct PropertyReport {
  std::string property;
  long n_samples = 0;
  long violations = 0;
  long inconclusive = 0;
  double worst_margin = 0.0;
  Witness witness;

  bool passed() const { return violations == 0 && inconclusive == 0; }
};

// {property, n_samples, violations, worst_margin, witness:{z, z_prime,
// lambda}}; an "inconclusive" key is added only when that counter is
// nonzero.
std::string to_json(const PropertyReport& report);

using VectorMap = std::function<Vector(const Vector&)>;

enum class Norm { kTwo, kInf };

// (sigma(z) - sigma(z'))^T (z - z') >= -1e-12 over sampled pairs.
// Margin: the inner product; worst_margin is its minimum.
PropertyReport check_monotone(const SampleEnsemble& ens, Temperature t);
PropertyReport check_monotone(const SampleEnsemble& ens, Temperature t,
                              const VectorMap& op);

// ||sigma(z) - sigma(z')||_2 <= lambda ||z - z'||_2 (1 + 1e-9) over sampled
// pairs with ||z - z'|| > 1e-12. Margin: the ratio; worst_margin its max.
PropertyReport check_lipschitz(const SampleEnsemble& ens, Temperature t);
PropertyReport check_lipschitz(const SampleEnsemble& ens, Temperature t,
                               const VectorMap& op);

// (sigma(z) - sigma(z'))^T (z - z') >= lambda^{-1} ||sigma(z) -
// sigma(z')||_2^2 - 1e-12. Margin: lhs - rhs; worst_margin its minimum.
PropertyReport check_cocoercive(const SampleEnsemble& ens, Temperature t);
PropertyReport check_cocoercive(const SampleEnsemble& ens, Temperature t,
                                const VectorMap& op);

// lse(z) >= x^T z - psi(x) - 1e-10 over sampled (z, simplex x) pairs, and
// equality at x = sigma(z) within 1e-9. Margin: the inequality gap;
// worst_margin is its minimum over the random pairs.
PropertyReport check_fenchel_young(const SampleEnsemble& ens, Temperature t);

// sigma(z) agrees within 1e-6 (inf-norm) with an independent Euclidean
// projected-ascent maximizer of x^T z - psi(x) over the simplex. Requires
// dimension <= 6 (oracle tractability). Margin: the deviation; worst_margin
// its max. Oracle non-convergence counts as inconclusive, not a pass.
PropertyReport check_argmax_equivalence(const SampleEnsemble& ens,
                                        Temperature t);

// ||sigma(P z) - P sigma(z)||_inf <= 1e-12 for random permutations P.
// Margin: the deviation; worst_margin its max.
PropertyReport check_permutation_equivariance(const SampleEnsemble& ens,
                                              Temperature t);

// Standard softmax (lambda = 1) only: for every index pair with z_j >= z_i,
// 0 <= sigma_j - sigma_i <= (z_j - z_i) / 2, to 1e-12 slack. Margin: the
// larger constraint excess (<= 0 when satisfied); worst_margin its max.
PropertyReport check_coordinate_nonexpansive(const SampleEnsemble& ens);

// sigma_i(z) >= prod_{j != i} 1 / (1 + exp(-lambda (z_i - z_j))) to 1e-12
// slack, for every i; for n = 2 the two sides must agree to 1e-12.
// Margin: sigma_i - product; worst_margin its minimum.
PropertyReport check_one_vs_each(const SampleEnsemble& ens, Temperature t);

// ||sigma(z + c 1) - sigma(z)||_inf <= 1e-12 and |lse(z + c 1) - lse(z) - c|
// <= 1e-9 for c sampled in [-1e3, 1e3]. Margin: the larger tolerance excess
// (<= 0 when satisfied); worst_margin its max.
PropertyReport check_shift_invariance(const SampleEnsemble& ens,
                                      Temperature t);

// vecmax(z) <= lse(z) <= vecmax(z) + lambda^{-1} log n, to 1e-12 slack.
// Margin: the larger constraint excess (<= 0 when satisfied); worst_margin
// its max.
PropertyReport check_vecmax_sandwich(const SampleEnsemble& ens, Temperature t);

// Max over sampled pairs of ||F(z) - F(z')|| / ||z - z'|| in the requested
// norm; a sampled lower bound on the true modulus.
double empirical_lipschitz_modulus(const VectorMap& map,
                                   const SampleEnsemble& ens, Norm norm);

// Euclidean projection onto the probability simplex (sort-based).
Vector simplex_projection(const Vector& v);

struct ProjectedAscentResult {
  Vector maximizer;
  long iterations = 0;
  bool converged = false;
};

// Projected gradient ascent with Armijo backtracking on the free-energy
// objective x^T z - lambda^{-1} sum_j x_j log x_j over the simplex.
// Independent of the softmax evaluation path: only the Euclidean projection
// and the raw objective/gradient are used.
ProjectedAscentResult maximize_free_energy(const Vector& z, Temperature t,
                                           long max_iter = 100000);

}  // namespace smax
