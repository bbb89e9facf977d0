#include "smax/softmax.hpp"

#include <cmath>
#include <limits>

#include "internal.hpp"
#include "smax/random.hpp"

namespace smax {

namespace {

constexpr double kEulerGamma = 0.57721566490153286;

}  // namespace

namespace detail {

// Shifted softmax on a raw vector. The shift by the max entry is exact for
// the value (shift identity) and keeps every exponent <= 0.
Vector softmax_values(const Vector& z, double lambda) {
  const double m = z.maxCoeff();
  Vector w = ((z.array() - m) * lambda).exp();
  return w / w.sum();
}

double lse_value(const Vector& z, double lambda) {
  const double m = z.maxCoeff();
  const double s = ((z.array() - m) * lambda).exp().sum();
  return m + std::log(s) / lambda;
}

}  // namespace detail

VecmaxResult vecmax(const ScoreVector& z) {
  const Vector& v = z.values();
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return {v[best], best};
}

double lse(const ScoreVector& z, Temperature t) {
  return detail::lse_value(z.values(), t.lambda());
}

MixedStrategy softmax(const ScoreVector& z, Temperature t) {
  return MixedStrategy(detail::softmax_values(z.values(), t.lambda()));
}

MixedStrategy generalized_softmax(const ScoreVector& z,
                                  const GeneralizedTemperature& gt) {
  if (z.dim() != gt.dim()) {
    throw InvalidInputError("generalized softmax: dimension mismatch");
  }
  Vector e = z.values().cwiseProduct(gt.lambdas());
  const double m = e.maxCoeff();
  Vector w = (e.array() - m).exp();
  return MixedStrategy(w / w.sum());
}

JacobianMatrix::JacobianMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 2) {
    throw InvalidInputError("jacobian: matrix must be square, n >= 2");
  }
  if (!entries_.allFinite()) {
    throw InvalidInputError("jacobian: entries must be finite");
  }
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw InvalidInputError("jacobian: not symmetric within 1e-12");
  }
  const double row = entries_.rowwise().sum().cwiseAbs().maxCoeff();
  if (row > 1e-12) {
    throw InvalidInputError("jacobian: row sums not zero within 1e-12");
  }
}

Vector JacobianMatrix::apply(const Vector& u) const {
  if (u.size() != dim()) {
    throw InvalidInputError("jacobian apply: dimension mismatch");
  }
  return entries_ * u;
}

JacobianMatrix softmax_jacobian(const ScoreVector& z, Temperature t) {
  const Vector s = detail::softmax_values(z.values(), t.lambda());
  Matrix j = -(s * s.transpose());
  j.diagonal() += s;
  j *= t.lambda();
  return JacobianMatrix(std::move(j));
}

double negative_entropy(const MixedStrategy& x, Temperature t) {
  const Vector& p = x.probs();
  double acc = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) acc += p[i] * std::log(p[i]);
  }
  return acc * t.inverse();
}

Index gumbel_choice(const ScoreVector& z, Temperature t, std::mt19937_64& rng) {
  const Vector& v = z.values();
  const double inv_lambda = t.inverse();
  Index best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < v.size(); ++i) {
    const double u = uniform01_open(rng);
    const double eps = -(std::log(-std::log(u)) + kEulerGamma) * inv_lambda;
    const double perturbed = v[i] + eps;
    if (perturbed > best_val) {
      best_val = perturbed;
      best = i;
    }
  }
  return best;
}

Index gumbel_choice(const ScoreVector& z, Temperature t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gumbel_choice(z, t, rng);
}

}  // namespace smax
