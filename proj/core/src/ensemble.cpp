#include "smax/ensemble.hpp"

#include <cmath>
#include <numeric>

#include "smax/random.hpp"

namespace smax {

SampleEnsemble::SampleEnsemble(Index dimension, long count, double lo,
                               double hi, std::uint64_t seed)
    : dimension_(dimension), count_(count), lo_(lo), hi_(hi), seed_(seed) {
  if (dimension < 2) {
    throw InvalidInputError("ensemble: dimension must be >= 2");
  }
  if (count < 1) {
    throw InvalidInputError("ensemble: count must be >= 1");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw InvalidInputError("ensemble: need finite bounds with lo < hi");
  }
}

EnsembleSampler::EnsembleSampler(const SampleEnsemble& ens)
    : n_(ens.dimension()), lo_(ens.lo()), hi_(ens.hi()), rng_(ens.seed()) {}

Vector EnsembleSampler::score_vector() {
  Vector v(n_);
  for (Index i = 0; i < n_; ++i) v[i] = uniform_in(rng_, lo_, hi_);
  return v;
}

Vector EnsembleSampler::simplex_point() {
  Vector v(n_);
  for (Index i = 0; i < n_; ++i) v[i] = -std::log(uniform01_open(rng_));
  return v / v.sum();
}

std::vector<Index> EnsembleSampler::permutation() {
  std::vector<Index> p(static_cast<std::size_t>(n_));
  std::iota(p.begin(), p.end(), Index{0});
  for (Index i = n_ - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng_() % static_cast<std::uint64_t>(i + 1));
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  }
  return p;
}

double EnsembleSampler::uniform(double lo, double hi) {
  return uniform_in(rng_, lo, hi);
}

}  // namespace smax
