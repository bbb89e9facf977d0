#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "smax/types.hpp"

namespace smax {

// Deterministic sampling plan for property checks: `count` draws in
// dimension n with i.i.d. U[lo, hi] coordinates, fixed by the seed.
class SampleEnsemble {
 public:
  SampleEnsemble(Index dimension, long count, double lo, double hi,
                 std::uint64_t seed);

  Index dimension() const { return dimension_; }
  long count() const { return count_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Index dimension_;
  long count_;
  double lo_;
  double hi_;
  std::uint64_t seed_;
};

// Seeded draw stream over an ensemble. Score vectors get i.i.d. uniform
// coordinates; simplex points come from normalized i.i.d. exponentials
// (uniform on the simplex); permutations from Fisher-Yates.
class EnsembleSampler {
 public:
  explicit EnsembleSampler(const SampleEnsemble& ens);

  Vector score_vector();
  Vector simplex_point();
  std::vector<Index> permutation();
  double uniform(double lo, double hi);

 private:
  Index n_;
  double lo_;
  double hi_;
  std::mt19937_64 rng_;
};

}  // namespace smax
