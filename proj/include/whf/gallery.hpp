// Named example matrices with known base factorizations and closed-form
// first-step solutions.
//
//   gk0         diag(b, 1/b), b = (x - i)/(x + i); indices (1, -1)
//   gk-singular [[b, eps], [0, 1/b]]; canonical factorization with 1/eps entries
//   solvable    2x2 trigonometric-rational perturbation of gk0 whose first step
//               is solvable
//   unsolvable  the same with entry (1,2) modified so the cross condition fails
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "whf/factorizer.hpp"

namespace whf {

struct GalleryEntry {
  std::string name;
  /// eps -> G_eps; builder(0) is the base product.
  std::function<MatrixFunction(double)> builder;
  /// eps -> G_eps - G0 in closed form (no cancellation).
  std::function<MatrixFunction(double)> perturbation;
  BaseFactorization base;
  bool has_oracle = false;
};

GalleryEntry gk_diagonal();

struct SingularWitness {
  GalleryEntry entry;                 // G_eps = gk-singular, base gk0
  BaseFactorization canonical;        // canonical factorization at the given eps
};

/// Throws ConfigError for eps <= 0 (the canonical factors degenerate).
SingularWitness gk_singular(double eps);

GalleryEntry example_solvable();
GalleryEntry example_unsolvable();

/// Looks up gk0, gk-singular, solvable or unsolvable; throws ConfigError.
GalleryEntry gallery_entry(const std::string& name);
std::vector<std::string> gallery_names();

struct OracleStep {
  MatrixFunction n1_minus;
  MatrixFunction n1_plus;
  CMatrix constants;
};

/// Closed-form first-step factors of the solvable example with the given
/// free constant c21.
OracleStep oracle_first_step(double eps, cplx c21);

/// Closed-form pinned constants (c11, c12, c22) of the solvable example.
CMatrix oracle_constants(double eps, cplx c21);

/// G- (Lambda + eps^k E_{ij}) G+ with (i, j) the first index of largest and last
/// index of smallest partial index; throws NoUnstablePair if kappa_1 - kappa_n < 2.
MatrixFunction singular_perturbation(const BaseFactorization& base, double eps, int k);

}  // namespace whf
