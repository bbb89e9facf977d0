#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "smax/property_checks.hpp"
#include "smax/types.hpp"

namespace smax {

// Continuous payoff map on the simplex: x -> payoff vector u. Inputs are
// raw probability vectors; outputs must stay finite on the simplex.
using PayoffFunction = std::function<Vector(const Vector&)>;

// Single-population game with payoff vector U(x) = A x.
class MatrixGame {
 public:
  explicit MatrixGame(Matrix payoff_matrix, std::string name = "");

  Index actions() const { return payoff_matrix_.rows(); }
  const Matrix& payoff_matrix() const { return payoff_matrix_; }
  const std::string& name() const { return name_; }

  // The standard three-action cyclic game with entries in {-1, 0, 1}.
  static MatrixGame rock_paper_scissors();

 private:
  Matrix payoff_matrix_;
  std::string name_;
};

PayoffFunction payoff_function(const MatrixGame& g);

// A x.
Vector payoff(const MatrixGame& g, const MixedStrategy& x);

// x^T A x.
double expected_payoff(const MatrixGame& g, const MixedStrategy& x);

// M = max_ij |A_ij|; every payoff component on the simplex is bounded by M.
double payoff_bound(const MatrixGame& g);

// Sampled anti-monotonicity of the payoff map plus the exact criterion:
// the symmetrized matrix restricted to the simplex tangent space
// {y : y^T 1 = 0} must have no eigenvalue above 1e-10.
struct StableGameReport {
  PropertyReport sampled;          // margin: (x - x')^T (U(x) - U(x')),
                                   // violation above 1e-12; worst is the max
  double tangent_eigenvalue_max = 0.0;
  bool eigen_stable = false;
  bool sampled_stable = false;

  bool stable() const { return eigen_stable; }
  bool classifications_agree() const { return eigen_stable == sampled_stable; }
};

StableGameReport check_stable_game(const MatrixGame& g,
                                   const SampleEnsemble& ens);

// JSON game format: {"n": <int>, "payoff_matrix": [[row-major reals]],
// "name": <optional string>}. The matrix must be exactly n x n with finite
// entries.
MatrixGame parse_game_json(const std::string& text);
MatrixGame load_game(const std::filesystem::path& path);
std::string to_json(const MatrixGame& g);

}  // namespace smax
