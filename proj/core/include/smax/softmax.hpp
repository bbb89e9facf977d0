#pragma once

#include <cstdint>
#include <random>

#include "smax/types.hpp"

namespace smax {

struct VecmaxResult {
  double value;
  Index index;  // lowest index attaining the maximum
};

// Largest entry of z and its index; ties resolve to the lowest index.
VecmaxResult vecmax(const ScoreVector& z);

// lambda^{-1} log sum_j exp(lambda z_j), evaluated in max-shifted form so
// that arbitrarily large scores cannot overflow. Always lies between
// vecmax(z) and vecmax(z) + lambda^{-1} log n.
double lse(const ScoreVector& z, Temperature t);

// sigma_i(z) = exp(lambda z_i) / sum_j exp(lambda z_j), max-shifted.
// Output sums to one; components are strictly positive unless the exponent
// underflows (|lambda (z_i - max z)| beyond ~745).
MixedStrategy softmax(const ScoreVector& z, Temperature t);

// Per-coordinate inverse temperatures:
// sigma_i(z) = exp(lambda_i z_i) / sum_j exp(lambda_j z_j).
MixedStrategy generalized_softmax(const ScoreVector& z,
                                  const GeneralizedTemperature& gt);

// Jacobian of the softmax map: lambda (diag(sigma) - sigma sigma^T).
// Symmetric, positive semidefinite, zero row sums (the ones vector spans
// the kernel). Symmetry and row sums are validated on construction.
class JacobianMatrix {
 public:
  explicit JacobianMatrix(Matrix entries);
  const Matrix& entries() const { return entries_; }
  Vector apply(const Vector& u) const;
  Index dim() const { return entries_.rows(); }

 private:
  Matrix entries_;
};

JacobianMatrix softmax_jacobian(const ScoreVector& z, Temperature t);

// lambda^{-1} sum_j x_j log x_j with the 0 log 0 = 0 convention.
// Always in [-lambda^{-1} log n, 0]; minimized at the uniform strategy.
double negative_entropy(const MixedStrategy& x, Temperature t);

// Index of argmax_i z_i + eps_i where the eps_i are i.i.d. draws with CDF
// exp(-exp(-lambda c - gamma)), gamma the Euler-Mascheroni constant.
// Sampled via the inverse CDF, eps = -(log(-log u) + gamma) / lambda.
// Over many draws the choice frequency of index i converges to sigma_i(z).
Index gumbel_choice(const ScoreVector& z, Temperature t, std::mt19937_64& rng);
Index gumbel_choice(const ScoreVector& z, Temperature t, std::uint64_t seed);

}  // namespace smax
