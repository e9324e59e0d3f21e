// Order-N asymptotic right factorization of a perturbed matrix function
//   G_eps = G0- Lambda G0+ + N_eps
// around a base factorization with (possibly unstable) partial indices.
//
// Step r solves the boundary problem
//   Lambda+ Nt_r+ + Nt_r- Lambda- = M_{r-1}
// entrywise with Nt_r- = (m- + C) b^{-min(kappa_j,0)} and
// Nt_r+ = b^{-max(kappa_l,0)} (m+ - C), where m = m+ + m- is the decaying
// split of M_{r-1} and C the matrix of step constants; then
// N_r- = G0- Nt_r-, N_r+ = Nt_r+ G0+ and
//   M_r = -(G0-)^{-1} [sum_{a+b=r+1} N_a- N_b+] (G0+)^{-1}.
// The assembled factors after m steps are
//   G- = G0- + sum N_r- (Lambda+)^{-1},  G+ = G0+ + sum (Lambda-)^{-1} N_r+.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "whf/cauchy.hpp"
#include "whf/funcspace.hpp"
#include "whf/indices.hpp"
#include "whf/quadrature.hpp"

namespace whf {

using EntryKey = std::pair<std::size_t, std::size_t>;  // zero-based (row, column)

struct BaseFactorization {
  MatrixFunction g_minus;
  MatrixFunction g_plus;
  MatrixFunction g_minus_inv;
  MatrixFunction g_plus_inv;
  PartialIndices indices;
  bool identity_factors = false;

  /// G0- = G0+ = I.
  static BaseFactorization trivial(const PartialIndices& indices);
  /// Inverses computed pointwise (entries of the factors must be non-oscillatory).
  static BaseFactorization make(MatrixFunction g_minus, const PartialIndices& indices,
                                MatrixFunction g_plus);
  /// Inverses supplied in closed form.
  static BaseFactorization make(MatrixFunction g_minus, const PartialIndices& indices,
                                MatrixFunction g_plus, MatrixFunction g_minus_inv,
                                MatrixFunction g_plus_inv);

  /// G0- Lambda G0+.
  MatrixFunction product() const;
  /// Largest deviation of F F^{-1} from I over both factors on the grid.
  double inverse_defect(const GridSpec& grid) const;
};

struct ConstantPolicy {
  enum class Mode { zero, match_infinity, explicit_values };
  Mode mode = Mode::zero;
  /// Free entries only; applied at the first step (later steps use zero).
  std::map<EntryKey, cplx> values;

  static ConstantPolicy zero() { return {}; }
  static ConstantPolicy match_infinity() { return {Mode::match_infinity, {}}; }
  static ConstantPolicy explicit_values(std::map<EntryKey, cplx> v) {
    return {Mode::explicit_values, std::move(v)};
  }
};

enum class ConditionKind { cond2_moment, cond4_moment, cond5_cross };
std::string to_string(ConditionKind kind);

struct ConditionResidual {
  ConditionKind kind;
  std::size_t row;
  std::size_t col;
  int order;  // moment order r; 0 for cross conditions
  cplx value;
};

struct SolvabilityReport {
  /// Cross conditions first, then moment conditions, each in row-major order.
  std::vector<ConditionResidual> residuals;
  std::map<EntryKey, cplx> pinned_constants;
  /// Split constants of every entry: K = m+(i), W = weighted integral.
  CMatrix split_k;
  CMatrix split_w;
  bool passed = true;
  double tolerance = 1e-6;
  double scale = 1.0;
};

struct FactorizationStep {
  int order = 0;
  MatrixFunction rhs;          // M_{r-1}
  MatrixFunction tilde_minus;  // Nt_r-
  MatrixFunction tilde_plus;   // Nt_r+
  MatrixFunction n_minus;      // N_r-
  MatrixFunction n_plus;       // N_r+
  CMatrix constants;           // C^{r-1}
  SolvabilityReport report;
};

struct AsymptoticFactorization {
  BaseFactorization base;
  std::vector<FactorizationStep> steps;
  int achieved_order = 0;
  std::optional<SolvabilityReport> failure;
};

/// M0 = (G0-)^{-1} N (G0+)^{-1}.
MatrixFunction reduce_rhs(const BaseFactorization& base, const MatrixFunction& n);

/// Solvability conditions and pinned constants. `tol` is relative to
/// max(1, sup |M|) on the default grid.
SolvabilityReport check_solvability(const MatrixFunction& m, const PartialIndices& indices,
                                    const QuadratureSpec& quad = {}, double tol = 1e-6);

/// Solves one step. Throws NotSolvable if the report failed and PolicyConflict
/// if explicit values target pinned entries.
FactorizationStep solve_step(const MatrixFunction& m, const PartialIndices& indices,
                             const ConstantPolicy& policy, const QuadratureSpec& quad,
                             const SolvabilityReport& report, int order = 1);
FactorizationStep solve_step(const MatrixFunction& m, const PartialIndices& indices,
                             const ConstantPolicy& policy, const QuadratureSpec& quad = {},
                             double tol = 1e-6);

/// Right-hand side of step len(steps) + 1.
MatrixFunction next_rhs(const BaseFactorization& base, const std::vector<FactorizationStep>& steps);

/// Runs the procedure up to `order` steps; stops at the first failed step and
/// records its report.
AsymptoticFactorization factorize(const BaseFactorization& base, const MatrixFunction& n_eps,
                                  int order, const ConstantPolicy& policy = {},
                                  const QuadratureSpec& quad = {}, double tol = 1e-6);

struct AssembledFactors {
  CMatrix minus_factor;
  CMatrix lambda;
  CMatrix plus_factor;
  CMatrix product;
};

/// Factors after m steps at x (m = 0 gives the base factorization); throws
/// OrderExceeded if m > achieved_order.
AssembledFactors assemble(const AsymptoticFactorization& fact, int m, double x);

/// Assembled factors after m steps as functions.
MatrixFunction assembled_minus(const AsymptoticFactorization& fact, int m);
MatrixFunction assembled_plus(const AsymptoticFactorization& fact, int m);

struct RemainderSamples {
  std::vector<double> x;
  std::vector<CMatrix> values;
  double sup = 0.0;
};

/// Delta K_m = G_eps - assembled product after m steps, sampled on the grid.
RemainderSamples remainder(const MatrixFunction& g_eps, const AsymptoticFactorization& fact, int m,
                           const GridSpec& grid = {});

/// The algebraic remainder -sum_{a,b <= m, a+b > m} N_a- N_b+ (equals Delta K_m
/// when every boundary problem is solved exactly).
MatrixFunction remainder_function(const AsymptoticFactorization& fact, int m);

/// Limit of Delta K_m at infinity (default m = 1).
CMatrix remainder_at_infinity(const AsymptoticFactorization& fact, int m = 1,
                              const TailSpec& tail = {});

}  // namespace whf
