#include "smax/matrix_game.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace smax {

MatrixGame::MatrixGame(Matrix payoff_matrix, std::string name)
    : payoff_matrix_(std::move(payoff_matrix)), name_(std::move(name)) {
  if (payoff_matrix_.rows() != payoff_matrix_.cols() ||
      payoff_matrix_.rows() < 2) {
    throw InvalidInputError("matrix game: payoff matrix must be square, n >= 2");
  }
  if (!payoff_matrix_.allFinite()) {
    throw InvalidInputError("matrix game: payoff entries must be finite");
  }
}

MatrixGame MatrixGame::rock_paper_scissors() {
  Matrix a(3, 3);
  a << 0, -1, 1,
       1, 0, -1,
       -1, 1, 0;
  return MatrixGame(std::move(a), "rock-paper-scissors");
}

PayoffFunction payoff_function(const MatrixGame& g) {
  const Matrix a = g.payoff_matrix();
  return [a](const Vector& x) { return a * x; };
}

Vector payoff(const MatrixGame& g, const MixedStrategy& x) {
  if (x.dim() != g.actions()) {
    throw InvalidInputError("payoff: strategy dimension mismatch");
  }
  return g.payoff_matrix() * x.probs();
}

double expected_payoff(const MatrixGame& g, const MixedStrategy& x) {
  if (x.dim() != g.actions()) {
    throw InvalidInputError("expected payoff: strategy dimension mismatch");
  }
  return x.probs().dot(g.payoff_matrix() * x.probs());
}

double payoff_bound(const MatrixGame& g) {
  return g.payoff_matrix().cwiseAbs().maxCoeff();
}

StableGameReport check_stable_game(const MatrixGame& g,
                                   const SampleEnsemble& ens) {
  if (ens.dimension() != g.actions()) {
    throw InvalidInputError("stable game check: ensemble dimension mismatch");
  }
  StableGameReport out;
  out.sampled.property = "stable_game";
  EnsembleSampler s(ens);
  const Matrix& a = g.payoff_matrix();
  double worst = -std::numeric_limits<double>::infinity();
  for (long i = 0; i < ens.count(); ++i) {
    const Vector x = s.simplex_point();
    const Vector xp = s.simplex_point();
    const Vector dx = x - xp;
    const double margin = dx.dot(a * dx);
    if (margin > worst) {
      worst = margin;
      out.sampled.witness = {x, xp, std::numeric_limits<double>::quiet_NaN()};
    }
    ++out.sampled.n_samples;
    if (margin > 1e-12) ++out.sampled.violations;
  }
  out.sampled.worst_margin = worst;
  out.sampled_stable = out.sampled.violations == 0;

  // Exact route: eigenvalues of the symmetrized payoff matrix projected
  // onto an orthonormal basis of the tangent space.
  const Index n = g.actions();
  Matrix ones = Matrix::Ones(n, 1);
  const Matrix q = Eigen::HouseholderQR<Matrix>(ones).householderQ();
  const Matrix basis = q.rightCols(n - 1);
  const Matrix sym = 0.5 * (a + a.transpose());
  const Matrix reduced = basis.transpose() * sym * basis;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced);
  out.tangent_eigenvalue_max = eig.eigenvalues().maxCoeff();
  out.eigen_stable = out.tangent_eigenvalue_max <= 1e-10;
  return out;
}

namespace {

MatrixGame from_json_object(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw InvalidInputError("game file: top level must be a JSON object");
  }
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw InvalidInputError("game file: missing integer field 'n'");
  }
  const auto n = j["n"].get<long>();
  if (n < 2) {
    throw InvalidInputError("game file: n must be >= 2");
  }
  if (!j.contains("payoff_matrix") || !j["payoff_matrix"].is_array()) {
    throw InvalidInputError("game file: missing array field 'payoff_matrix'");
  }
  const auto& rows = j["payoff_matrix"];
  if (static_cast<long>(rows.size()) != n) {
    throw InvalidInputError("game file: payoff_matrix must have n rows");
  }
  Matrix a(n, n);
  for (long r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<long>(row.size()) != n) {
      throw InvalidInputError("game file: payoff_matrix rows must have n entries");
    }
    for (long c = 0; c < n; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) {
        throw InvalidInputError("game file: payoff entries must be numbers");
      }
      a(r, c) = cell.get<double>();
    }
  }
  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) {
      throw InvalidInputError("game file: 'name' must be a string");
    }
    name = j["name"].get<std::string>();
  }
  return MatrixGame(std::move(a), std::move(name));
}

}  // namespace

MatrixGame parse_game_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInputError(std::string("game file: invalid JSON: ") + e.what());
  }
  return from_json_object(j);
}

MatrixGame load_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("game file: cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_json(buf.str());
}

std::string to_json(const MatrixGame& g) {
  nlohmann::json j;
  const Index n = g.actions();
  j["n"] = n;
  auto rows = nlohmann::json::array();
  for (Index r = 0; r < n; ++r) {
    auto row = nlohmann::json::array();
    for (Index c = 0; c < n; ++c) row.push_back(g.payoff_matrix()(r, c));
    rows.push_back(std::move(row));
  }
  j["payoff_matrix"] = std::move(rows);
  if (!g.name().empty()) j["name"] = g.name();
  return j.dump(2);
}

}  // namespace smax
