#include "smax/types.hpp"

#include <cmath>

namespace smax {

namespace {

bool all_finite(const Vector& v) {
  return v.allFinite();
}

}  // namespace

Temperature::Temperature(double lambda) : lambda_(lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw InvalidInputError("temperature: lambda must be finite and > 0");
  }
}

GeneralizedTemperature::GeneralizedTemperature(Vector lambdas)
    : lambdas_(std::move(lambdas)) {
  if (lambdas_.size() < 2) {
    throw InvalidInputError("generalized temperature: need at least 2 entries");
  }
  if (!all_finite(lambdas_) || (lambdas_.array() <= 0.0).any()) {
    throw InvalidInputError(
        "generalized temperature: every lambda_i must be finite and > 0");
  }
}

ScoreVector::ScoreVector(Vector values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw InvalidInputError("score vector: dimension must be >= 2");
  }
  if (!all_finite(values_)) {
    throw InvalidInputError("score vector: entries must be finite");
  }
}

MixedStrategy::MixedStrategy(Vector probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw InvalidInputError("mixed strategy: dimension must be >= 2");
  }
  if (!all_finite(probs_)) {
    throw InvalidInputError("mixed strategy: entries must be finite");
  }
  if (probs_.minCoeff() < -kSimplexInputTol) {
    throw InvalidInputError("mixed strategy: negative probability");
  }
  const double sum = probs_.sum();
  if (std::abs(sum - 1.0) > kSimplexInputTol) {
    throw InvalidInputError("mixed strategy: probabilities must sum to 1 (" +
                            std::to_string(sum) + ")");
  }
  probs_ = probs_.cwiseMax(0.0);
  probs_ /= probs_.sum();
}

MixedStrategy MixedStrategy::uniform(Index n) {
  return MixedStrategy(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

}  // namespace smax
