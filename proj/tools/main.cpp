// Command-line front end: simulate score dynamics, solve logit equilibria,
// run the operator property suite, evaluate replicator fields.
//
// Exit codes: 0 success, 1 numerical failure (divergence, non-convergence,
// property violations), 2 usage or configuration error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "smax/smax.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Manifest {
  std::string game_path;
  std::string lambda_csv = "1";
  std::string z0_csv;
  std::string x_csv;
  std::string u_csv;
  std::string n_csv = "2,3,5,10";
  double dt = 0.01;
  double t_end = 50.0;
  long record_every = 10;
  double tol = 1e-10;
  long max_iter = 100000;
  double damping = 0.5;
  long samples = 10000;
  std::uint64_t seed = 0;
  std::string out;
  double inject_lambda_skew = 1.0;  // test hook; see run_verify
};

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw smax::InvalidInputError(flag + ": cannot parse '" + item + "'");
    }
    if (pos != item.size()) {
      throw smax::InvalidInputError(flag + ": trailing junk in '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw smax::InvalidInputError(flag + ": empty list");
  }
  return out;
}

std::vector<long> parse_int_list(const std::string& text,
                                 const std::string& flag) {
  std::vector<long> out;
  for (double v : parse_double_list(text, flag)) {
    const long i = static_cast<long>(v);
    if (static_cast<double>(i) != v) {
      throw smax::InvalidInputError(flag + ": expected integers");
    }
    out.push_back(i);
  }
  return out;
}

double parse_single_lambda(const Manifest& m) {
  const auto lambdas = parse_double_list(m.lambda_csv, "--lambda");
  if (lambdas.size() != 1) {
    throw smax::InvalidInputError(
        "--lambda: this subcommand takes a single value");
  }
  return lambdas.front();
}

smax::Vector to_vector(const std::vector<double>& v) {
  smax::Vector out(static_cast<smax::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<smax::Index>(i)] = v[i];
  return out;
}

smax::ScoreVector initial_scores(const Manifest& m, smax::Index n) {
  if (m.z0_csv.empty()) return smax::ScoreVector::zero(n);
  const smax::Vector z0 = to_vector(parse_double_list(m.z0_csv, "--z0"));
  if (z0.size() != n) {
    throw smax::InvalidInputError("--z0: expected " + std::to_string(n) +
                                  " entries");
  }
  return smax::ScoreVector(z0);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw smax::InvalidInputError("cannot open output file " + path);
  }
  out << content;
  if (!out) {
    throw smax::InvalidInputError("failed writing output file " + path);
  }
}

std::string format_vector(const smax::Vector& v) {
  std::string s = "(";
  char buf[32];
  for (smax::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", v[i]);
    if (i > 0) s += ", ";
    s += buf;
  }
  return s + ")";
}

smax::MatrixGame load_game_checked(const Manifest& m) {
  if (m.game_path.empty()) {
    throw smax::InvalidInputError("--game is required");
  }
  return smax::load_game(m.game_path);
}

std::optional<smax::FixedPointResult> try_reference_solve(
    const smax::MatrixGame& g, smax::Temperature t, const smax::ScoreVector& z0,
    const smax::SolverConfig& cfg) {
  try {
    smax::FixedPointResult r = smax::solve_fixed_point(g, t, z0, cfg);
    if (r.converged) return r;
  } catch (const smax::Error&) {
  }
  return std::nullopt;
}

int run_simulate(const Manifest& m) {
  const smax::MatrixGame game = load_game_checked(m);
  const smax::Temperature temp(parse_single_lambda(m));
  const smax::ScoreVector z0 = initial_scores(m, game.actions());
  const smax::IntegratorConfig cfg{m.dt, m.t_end, m.record_every};
  const std::string out_path = m.out.empty() ? "trajectory.csv" : m.out;

  // The Lyapunov column needs an equilibrium reference; skip it silently
  // when the solve fails rather than aborting the run.
  const smax::SolverConfig solver_cfg{m.tol, m.max_iter, m.damping};
  const auto reference =
      try_reference_solve(game, temp, z0, solver_cfg);

  smax::Trajectory traj;
  try {
    traj = smax::integrate(game, temp, z0, cfg);
  } catch (const smax::IntegrationDivergedError& e) {
    std::ostringstream csv;
    e.partial().write_csv(csv);
    write_text_file(out_path, csv.str());
    std::cerr << "error: " << e.what() << " (partial trajectory in "
              << out_path << ")\n";
    return kExitNumerical;
  }

  if (reference) {
    traj.set_lyapunov_reference(smax::ScoreVector(reference->z_star), temp);
  }
  std::ostringstream csv;
  traj.write_csv(csv);
  write_text_file(out_path, csv.str());

  const auto& last = traj.back();
  std::cout << "final x: " << format_vector(last.x) << "\n";
  if (last.lyapunov) {
    std::printf("final V: %.9g\n", *last.lyapunov);
  }
  const double rest = smax::score_field(game, temp,
                                        smax::ScoreVector(last.z)).norm();
  std::printf("rest-point residual: %.9g\n", rest);
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int run_equilibrium(const Manifest& m) {
  const smax::MatrixGame game = load_game_checked(m);
  const smax::Temperature temp(parse_single_lambda(m));
  const smax::ScoreVector z0 = initial_scores(m, game.actions());
  const smax::SolverConfig cfg{m.tol, m.max_iter, m.damping};
  const std::string out_path = m.out.empty() ? "equilibrium.json" : m.out;

  const smax::FixedPointResult result =
      smax::solve_fixed_point(game, temp, z0, cfg);
  const smax::ContractionCertificate cert =
      smax::contraction_certificate(game, temp);
  write_text_file(out_path, smax::to_json(result, cert, temp) + "\n");

  std::cout << "x_star: " << format_vector(result.x_star) << "\n";
  std::printf("residual: %.9g after %ld iterations\n", result.residual,
              result.iterations);
  std::cout << "converged: " << (result.converged ? "yes" : "no")
            << ", contraction certified: " << (cert.certified ? "yes" : "no")
            << "\n";
  std::cout << "wrote " << out_path << "\n";
  return result.converged ? kExitOk : kExitNumerical;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

int run_verify(const Manifest& m) {
  const auto dims = parse_int_list(m.n_csv, "--n");
  const auto lambdas = parse_double_list(m.lambda_csv, "--lambda");
  if (m.samples < 1) {
    throw smax::InvalidInputError("--samples must be >= 1");
  }
  for (long n : dims) {
    if (n < 2) throw smax::InvalidInputError("--n entries must be >= 2");
  }
  const std::string out_path = m.out.empty() ? "verify_report.json" : m.out;
  constexpr double kLo = -50.0;
  constexpr double kHi = 50.0;

  nlohmann::json entries = nlohmann::json::array();
  long total_violations = 0;
  long total_inconclusive = 0;
  std::uint64_t counter = 0;

  auto add = [&](long n, double lambda, const smax::PropertyReport& report,
                 std::optional<std::pair<double, double>> range = {}) {
    total_violations += report.violations;
    total_inconclusive += report.inconclusive;
    nlohmann::json entry;
    entry["n"] = n;
    entry["lambda"] = lambda;
    if (range) entry["coordinate_range"] = {range->first, range->second};
    entry["report"] = nlohmann::json::parse(smax::to_json(report));
    entries.push_back(std::move(entry));
    std::printf("[%s] %-26s n=%-3ld lambda=%-5g violations=%ld worst=%.3g\n",
                report.passed() ? "ok" : "FAIL", report.property.c_str(), n,
                lambda, report.violations, report.worst_margin);
  };

  // Test hook: evaluate the operator at a skewed temperature while the
  // bounds keep using the declared one.
  const bool skewed = m.inject_lambda_skew != 1.0;

  for (long n : dims) {
    for (double lambda : lambdas) {
      const smax::Temperature temp(lambda);
      auto ens = [&](std::uint64_t tag) {
        return smax::SampleEnsemble(n, m.samples, kLo, kHi,
                                    mix_seed(m.seed, counter + tag));
      };
      counter += 16;
      if (skewed) {
        const double skew_lambda = lambda * m.inject_lambda_skew;
        const smax::VectorMap op = [skew_lambda](const smax::Vector& z) {
          return smax::softmax(smax::ScoreVector(z),
                               smax::Temperature(skew_lambda))
              .probs();
        };
        // Narrow range so the corrupted operator's non-saturated region is
        // actually sampled; at +-50 a wrong lambda stays invisible.
        auto tight = [&](std::uint64_t tag) {
          return smax::SampleEnsemble(n, m.samples, -2.0 / lambda,
                                      2.0 / lambda,
                                      mix_seed(m.seed, counter + tag));
        };
        add(n, lambda, smax::check_monotone(tight(0), temp, op));
        add(n, lambda, smax::check_lipschitz(tight(1), temp, op));
        add(n, lambda, smax::check_cocoercive(tight(2), temp, op));
      } else {
        add(n, lambda, smax::check_monotone(ens(0), temp));
        add(n, lambda, smax::check_lipschitz(ens(1), temp));
        add(n, lambda, smax::check_cocoercive(ens(2), temp));
      }
      add(n, lambda, smax::check_fenchel_young(ens(3), temp));
      add(n, lambda, smax::check_vecmax_sandwich(ens(4), temp));
      add(n, lambda, smax::check_shift_invariance(ens(5), temp));
      add(n, lambda, smax::check_permutation_equivariance(ens(6), temp));
      add(n, lambda, smax::check_one_vs_each(ens(7), temp));

      // The projected-ascent oracle is only tractable for small n and
      // moderate lambda * coordinate-span; run it on a clipped ensemble.
      if (n <= 6 && lambda <= 2.0) {
        const smax::SampleEnsemble small(n, std::min(m.samples, 100L), -1.5,
                                         1.5, mix_seed(m.seed, counter + 8));
        add(n, lambda, smax::check_argmax_equivalence(small, temp),
            std::make_pair(-1.5, 1.5));
      }
    }
    // Stated for the standard softmax only.
    const smax::SampleEnsemble ens(n, m.samples, kLo, kHi,
                                   mix_seed(m.seed, counter + 9));
    counter += 16;
    add(n, 1.0, smax::check_coordinate_nonexpansive(ens));
  }

  nlohmann::json j;
  j["seed"] = m.seed;
  j["samples"] = m.samples;
  j["dimensions"] = dims;
  j["lambdas"] = lambdas;
  j["coordinate_range"] = {kLo, kHi};
  j["total_violations"] = total_violations;
  j["total_inconclusive"] = total_inconclusive;
  j["reports"] = std::move(entries);
  write_text_file(out_path, j.dump(2) + "\n");

  std::printf("total violations: %ld, inconclusive: %ld\n", total_violations,
              total_inconclusive);
  std::cout << "wrote " << out_path << "\n";
  return (total_violations == 0 && total_inconclusive == 0) ? kExitOk
                                                            : kExitNumerical;
}

int run_replicator(const Manifest& m) {
  if (m.x_csv.empty() || m.u_csv.empty()) {
    throw smax::InvalidInputError("--x and --u are required");
  }
  const smax::Temperature temp(parse_single_lambda(m));
  const smax::MixedStrategy x(to_vector(parse_double_list(m.x_csv, "--x")));
  const smax::Vector u = to_vector(parse_double_list(m.u_csv, "--u"));
  const smax::Vector field = smax::replicator_field(x, u, temp);

  std::cout << "replicator field: " << format_vector(field) << "\n";
  if (!m.out.empty()) {
    std::string line;
    char buf[32];
    for (smax::Index i = 0; i < field.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", field[i]);
      if (i > 0) line += ",";
      line += buf;
    }
    write_text_file(m.out, line + "\n");
    std::cout << "wrote " << m.out << "\n";
  }
  return kExitOk;
}

void add_common_output(CLI::App* cmd, Manifest& m) {
  cmd->add_option("--out", m.out, "Output file path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"softmax operator toolkit and score-dynamics simulator"};
  app.require_subcommand(1);
  Manifest m;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Integrate the score dynamics and write a trajectory CSV");
  simulate->add_option("--game", m.game_path, "Game JSON file")->required();
  simulate->add_option("--lambda", m.lambda_csv, "Inverse temperature");
  simulate->add_option("--z0", m.z0_csv, "Initial scores (comma separated)");
  simulate->add_option("--dt", m.dt, "Integration step");
  simulate->add_option("--t-end", m.t_end, "Final time");
  simulate->add_option("--record-every", m.record_every, "Sampling stride");
  simulate->add_option("--tol", m.tol, "Reference solve tolerance");
  simulate->add_option("--max-iter", m.max_iter, "Reference solve iterations");
  simulate->add_option("--damping", m.damping, "Reference solve damping");
  add_common_output(simulate, m);

  CLI::App* equilibrium = app.add_subcommand(
      "equilibrium", "Solve the score fixed point and write the result JSON");
  equilibrium->add_option("--game", m.game_path, "Game JSON file")->required();
  equilibrium->add_option("--lambda", m.lambda_csv, "Inverse temperature");
  equilibrium->add_option("--z0", m.z0_csv, "Initial scores");
  equilibrium->add_option("--tol", m.tol, "Residual tolerance (inf-norm)");
  equilibrium->add_option("--max-iter", m.max_iter, "Iteration budget");
  equilibrium->add_option("--damping", m.damping, "Damping factor in (0,1]");
  add_common_output(equilibrium, m);

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the operator property suite and write a JSON report");
  verify->add_option("--n", m.n_csv, "Dimensions (comma separated)");
  verify->add_option("--lambda", m.lambda_csv, "Inverse temperatures")
      ->default_str("0.1,0.5,1,2,10");
  verify->add_option("--samples", m.samples, "Sample pairs per check");
  verify->add_option("--seed", m.seed, "Ensemble seed");
  verify->add_option("--inject-lambda-skew", m.inject_lambda_skew,
                     "Evaluate softmax at a skewed lambda (test hook)")
      ->group("");
  add_common_output(verify, m);

  CLI::App* replicator = app.add_subcommand(
      "replicator", "Evaluate the replicator vector field at (x, u)");
  replicator->add_option("--x", m.x_csv, "Mixed strategy (comma separated)");
  replicator->add_option("--u", m.u_csv, "Payoff vector (comma separated)");
  replicator->add_option("--lambda", m.lambda_csv, "Inverse temperature");
  add_common_output(replicator, m);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  // verify's lambda default differs from the single-value commands.
  if (app.got_subcommand(verify) && verify->count("--lambda") == 0) {
    m.lambda_csv = "0.1,0.5,1,2,10";
  }

  try {
    if (app.got_subcommand(simulate)) return run_simulate(m);
    if (app.got_subcommand(equilibrium)) return run_equilibrium(m);
    if (app.got_subcommand(verify)) return run_verify(m);
    if (app.got_subcommand(replicator)) return run_replicator(m);
  } catch (const smax::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const smax::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
