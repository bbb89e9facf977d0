#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace smax {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// 1-norm slack accepted when validating externally supplied probability
// vectors; vectors passing the check are renormalized to sum exactly to one.
inline constexpr double kSimplexInputTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violation: non-finite entries, bad dimensions, bad config.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Lyapunov monitoring against a reference that is not a rest point.
class InvalidReferenceError : public Error {
 public:
  using Error::Error;
};

// Fixed-point iteration produced a non-finite iterate.
class SolverDivergedError : public Error {
 public:
  using Error::Error;
};

// Equilibrium requested but the solver ran out of iterations.
class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

// Inverse temperature constant, strictly positive. Large values sharpen the
// softmax toward argmax, small values flatten it toward uniform.
class Temperature {
 public:
  explicit Temperature(double lambda);
  double lambda() const { return lambda_; }
  double inverse() const { return 1.0 / lambda_; }

 private:
  double lambda_;
};

// One strictly positive inverse temperature per coordinate.
class GeneralizedTemperature {
 public:
  explicit GeneralizedTemperature(Vector lambdas);
  const Vector& lambdas() const { return lambdas_; }
  Index dim() const { return lambdas_.size(); }

 private:
  Vector lambdas_;
};

// Point z in R^n (scores / Q-values): n >= 2, every entry finite.
class ScoreVector {
 public:
  explicit ScoreVector(Vector values);
  static ScoreVector zero(Index n) { return ScoreVector(Vector::Zero(n)); }
  const Vector& values() const { return values_; }
  Index dim() const { return values_.size(); }

 private:
  Vector values_;
};

// Probability vector on the (n-1)-simplex, n >= 2. Construction accepts
// inputs within kSimplexInputTol of the simplex (1-norm) and renormalizes;
// afterwards |sum - 1| is at machine precision and entries are >= 0.
class MixedStrategy {
 public:
  explicit MixedStrategy(Vector probs);
  static MixedStrategy uniform(Index n);
  const Vector& probs() const { return probs_; }
  Index dim() const { return probs_.size(); }

 private:
  Vector probs_;
};

}  // namespace smax
