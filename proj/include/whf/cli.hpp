// Command-line front end: whfactor {indices|check|factorize|sweep}.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "whf/factorizer.hpp"

namespace whf {

struct RunConfig {
  std::string example = "solvable";
  double eps = 0.1;
  std::vector<double> eps_list;
  int order = 1;
  std::string c21 = "zero";
  int grid_points = 2001;
  int panels = 64;
  int nodes = 32;
  double tol = 1e-6;
  std::string out;     // empty: standard output
  std::string format;  // csv | json; empty: command default

  /// Throws ConfigError when a field is out of range.
  void validate() const;
  QuadratureSpec quadrature() const;
  ConstantPolicy policy() const;
};

/// A perturbed matrix with its base factorization: a gallery entry or a user spec.
struct Problem {
  std::string name;
  BaseFactorization base;
  std::function<MatrixFunction(double)> matrix;        // eps -> G_eps
  std::function<MatrixFunction(double)> perturbation;  // eps -> G_eps - G0
};

/// Gallery name, or path to a JSON spec:
///   {"dim": n, "indices": [...], "matrix": [[expr, ...], ...],
///    "g_minus": [[expr, ...], ...], "g_plus": [[expr, ...], ...]}
/// Entries of "matrix" may use x and eps; the optional base factors use x only
/// (identity when omitted). Throws ConfigError.
Problem load_problem(const std::string& example);

/// Runs the CLI; returns the process exit code (0 ok, 2 configuration error,
/// 3 numerical non-convergence).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace whf
