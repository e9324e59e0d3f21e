#include "whf/factorizer.hpp"

#include <algorithm>
#include <cmath>

#include "whf/errors.hpp"

namespace whf {

namespace {

MatrixFunction inverse_lambda_plus(const PartialIndices& indices) {
  std::vector<BoundaryFunction> d;
  for (int k : indices.kappa()) d.push_back(blaschke_power(-std::max(k, 0)));
  return MatrixFunction::diagonal(std::move(d));
}

MatrixFunction inverse_lambda_minus(const PartialIndices& indices) {
  std::vector<BoundaryFunction> d;
  for (int k : indices.kappa()) d.push_back(blaschke_power(-std::min(k, 0)));
  return MatrixFunction::diagonal(std::move(d));
}

void require_dim(const MatrixFunction& m, std::size_t n, const char* what) {
  if (m.dim() != n)
    throw DimensionMismatch(std::string(what) + " has dimension " + std::to_string(m.dim()) +
                            ", expected " + std::to_string(n));
}

}  // namespace

// ---------------------------------------------------------------------------
// BaseFactorization

BaseFactorization BaseFactorization::trivial(const PartialIndices& indices) {
  BaseFactorization b;
  const std::size_t n = indices.n();
  b.g_minus = b.g_plus = b.g_minus_inv = b.g_plus_inv = MatrixFunction::identity(n);
  b.indices = indices;
  b.identity_factors = true;
  return b;
}

BaseFactorization BaseFactorization::make(MatrixFunction g_minus, const PartialIndices& indices,
                                          MatrixFunction g_plus) {
  MatrixFunction gm_inv = pointwise_inverse(g_minus);
  MatrixFunction gp_inv = pointwise_inverse(g_plus);
  return make(std::move(g_minus), indices, std::move(g_plus), std::move(gm_inv), std::move(gp_inv));
}

BaseFactorization BaseFactorization::make(MatrixFunction g_minus, const PartialIndices& indices,
                                          MatrixFunction g_plus, MatrixFunction g_minus_inv,
                                          MatrixFunction g_plus_inv) {
  const std::size_t n = indices.n();
  require_dim(g_minus, n, "minus factor");
  require_dim(g_plus, n, "plus factor");
  require_dim(g_minus_inv, n, "inverse minus factor");
  require_dim(g_plus_inv, n, "inverse plus factor");
  BaseFactorization b;
  b.g_minus = std::move(g_minus);
  b.g_plus = std::move(g_plus);
  b.g_minus_inv = std::move(g_minus_inv);
  b.g_plus_inv = std::move(g_plus_inv);
  b.indices = indices;
  return b;
}

MatrixFunction BaseFactorization::product() const {
  const MatrixFunction lambda = build_lambda(indices, LambdaVariant::full);
  if (identity_factors) return lambda;
  return g_minus * lambda * g_plus;
}

double BaseFactorization::inverse_defect(const GridSpec& grid) const {
  const auto n = static_cast<Eigen::Index>(indices.n());
  const CMatrix id = CMatrix::Identity(n, n);
  double worst = 0.0;
  for (double x : grid.points()) {
    worst = std::max(worst, (g_minus.eval(x) * g_minus_inv.eval(x) - id).cwiseAbs().maxCoeff());
    worst = std::max(worst, (g_plus.eval(x) * g_plus_inv.eval(x) - id).cwiseAbs().maxCoeff());
  }
  return worst;
}

// ---------------------------------------------------------------------------

std::string to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::cond2_moment:
      return "cond2_moment";
    case ConditionKind::cond4_moment:
      return "cond4_moment";
    case ConditionKind::cond5_cross:
      return "cond5_cross";
  }
  return "unknown";
}

MatrixFunction reduce_rhs(const BaseFactorization& base, const MatrixFunction& n) {
  require_dim(n, base.indices.n(), "perturbation");
  if (base.identity_factors) return n;
  return base.g_minus_inv * n * base.g_plus_inv;
}

SolvabilityReport check_solvability(const MatrixFunction& m, const PartialIndices& indices,
                                    const QuadratureSpec& quad, double tol) {
  const std::size_t n = indices.n();
  require_dim(m, n, "right-hand side");
  SolvabilityReport rep;
  rep.tolerance = tol;
  rep.scale = std::max(1.0, sup_norm(m, GridSpec{}));
  const auto en = static_cast<Eigen::Index>(n);
  rep.split_k = CMatrix::Zero(en, en);
  rep.split_w = CMatrix::Zero(en, en);

  std::vector<ConditionResidual> cross;
  std::vector<ConditionResidual> moments;
  const std::size_t p = indices.p();
  const std::size_t q = indices.q();
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t j = 0; j < n; ++j) {
      const BoundaryFunction& f = m(l, j);
      const SplitConstants c = split_constants(f, quad);
      rep.split_k(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = c.K;
      rep.split_w(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = c.W;
      const bool row_pinned = l < p;
      const bool col_pinned = j >= q;
      if (row_pinned) {
        // m+ - c must vanish at i
        rep.pinned_constants[{l, j}] = c.K;
      } else if (col_pinned) {
        // m- + c must vanish at -i
        rep.pinned_constants[{l, j}] = c.K - c.W;
      }
      if (row_pinned && col_pinned) {
        // both requirements: mismatch between the column and the row choice
        cross.push_back({ConditionKind::cond5_cross, l, j, 0, -c.W});
      }
      for (int r = 1; r < indices[l]; ++r)
        moments.push_back({ConditionKind::cond4_moment, l, j, r, moment(f, kI, r, quad)});
      for (int r = 1; r < -indices[j]; ++r)
        moments.push_back({ConditionKind::cond2_moment, l, j, r, moment(f, -kI, r, quad)});
    }
  }
  rep.residuals = std::move(cross);
  rep.residuals.insert(rep.residuals.end(), moments.begin(), moments.end());
  for (const auto& r : rep.residuals)
    if (!(std::abs(r.value) <= tol * rep.scale)) rep.passed = false;
  return rep;
}

namespace {

CMatrix choose_constants(const PartialIndices& indices, const ConstantPolicy& policy,
                         const SolvabilityReport& report, int order) {
  const std::size_t n = indices.n();
  const auto en = static_cast<Eigen::Index>(n);
  CMatrix c = CMatrix::Zero(en, en);
  for (const auto& [key, v] : report.pinned_constants)
    c(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) = v;

  switch (policy.mode) {
    case ConstantPolicy::Mode::zero:
      break;
    case ConstantPolicy::Mode::explicit_values:
      for (const auto& [key, v] : policy.values) {
        if (key.first >= n || key.second >= n)
          throw ConfigError("explicit constant (" + std::to_string(key.first + 1) + ", " +
                            std::to_string(key.second + 1) + ") is outside the matrix");
        if (!indices.is_free(key.first, key.second))
          throw PolicyConflict("constant (" + std::to_string(key.first + 1) + ", " +
                               std::to_string(key.second + 1) + ") is pinned by the conditions");
        if (order == 1)
          c(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) = v;
      }
      break;
    case ConstantPolicy::Mode::match_infinity:
      if (n != 2) throw ConfigError("match-infinity constant policy is defined for 2x2 matrices only");
      if (indices.is_free(1, 0)) {
        const cplx c11 = c(0, 0);
        const cplx c12 = c(0, 1);
        c(1, 0) = std::abs(c12) > 0.0 ? -c11 * c11 / c12 : cplx{0.0};
      }
      break;
  }
  return c;
}

// (m- + c) b^k near -i, k >= 0
BoundaryFunction tilde_minus_entry(const BoundaryFunction& minus, cplx c, int k) {
  const BoundaryFunction shifted = minus + BoundaryFunction::constant(c);
  if (shifted.is_zero()) return shifted;
  BoundaryFunction out = shifted * blaschke_power(k);
  if (k == 0 || !shifted.has_continuation()) return out;
  auto q = std::make_shared<const RemovableQuotient>(
      [shifted, k](cplx z) { return shifted.continue_to(z) * std::pow(z - kI, k); }, -kI, k);
  return out.with_continuation([q](cplx z) { return (*q)(z); }, Region::lower);
}

// b^{-k} (m+ - c) near i, k >= 0
BoundaryFunction tilde_plus_entry(const BoundaryFunction& plus, cplx c, int k) {
  const BoundaryFunction shifted = plus - BoundaryFunction::constant(c);
  if (shifted.is_zero()) return shifted;
  BoundaryFunction out = blaschke_power(-k) * shifted;
  if (k == 0 || !shifted.has_continuation()) return out;
  auto q = std::make_shared<const RemovableQuotient>(
      [shifted, k](cplx z) { return shifted.continue_to(z) * std::pow(z + kI, k); }, kI, k);
  return out.with_continuation([q](cplx z) { return (*q)(z); }, Region::upper);
}

}  // namespace

FactorizationStep solve_step(const MatrixFunction& m, const PartialIndices& indices,
                             const ConstantPolicy& policy, const QuadratureSpec& quad,
                             const SolvabilityReport& report, int order) {
  const std::size_t n = indices.n();
  require_dim(m, n, "right-hand side");
  if (!report.passed) throw NotSolvable("solvability conditions are violated at step " + std::to_string(order));
  FactorizationStep step;
  step.order = order;
  step.rhs = m;
  step.report = report;
  step.constants = choose_constants(indices, policy, report, order);
  step.tilde_minus = MatrixFunction(n);
  step.tilde_plus = MatrixFunction(n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t j = 0; j < n; ++j) {
      const DecayingSplit split = decaying_split(m(l, j), quad);
      const cplx c = step.constants(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j));
      step.tilde_minus(l, j) = tilde_minus_entry(split.minus, c, -std::min(indices[j], 0));
      step.tilde_plus(l, j) = tilde_plus_entry(split.plus, c, std::max(indices[l], 0));
    }
  }
  step.n_minus = step.tilde_minus;
  step.n_plus = step.tilde_plus;
  return step;
}

FactorizationStep solve_step(const MatrixFunction& m, const PartialIndices& indices,
                             const ConstantPolicy& policy, const QuadratureSpec& quad, double tol) {
  const SolvabilityReport report = check_solvability(m, indices, quad, tol);
  return solve_step(m, indices, policy, quad, report, 1);
}

MatrixFunction next_rhs(const BaseFactorization& base, const std::vector<FactorizationStep>& steps) {
  if (steps.empty()) throw ConfigError("next_rhs needs at least one completed step");
  const std::size_t r = steps.size() + 1;
  MatrixFunction sum(base.indices.n());
  for (std::size_t a = 1; a < r; ++a) sum = sum + steps[a - 1].n_minus * steps[r - a - 1].n_plus;
  if (base.identity_factors) return -sum;
  return -(base.g_minus_inv * sum * base.g_plus_inv);
}

AsymptoticFactorization factorize(const BaseFactorization& base, const MatrixFunction& n_eps,
                                  int order, const ConstantPolicy& policy,
                                  const QuadratureSpec& quad, double tol) {
  if (order < 1) throw ConfigError("order must be at least 1");
  AsymptoticFactorization fact;
  fact.base = base;
  for (int r = 1; r <= order; ++r) {
    const MatrixFunction m = r == 1 ? reduce_rhs(base, n_eps) : next_rhs(base, fact.steps);
    SolvabilityReport report = check_solvability(m, base.indices, quad, tol);
    if (!report.passed) {
      fact.failure = std::move(report);
      break;
    }
    FactorizationStep step = solve_step(m, base.indices, policy, quad, report, r);
    if (!base.identity_factors) {
      step.n_minus = base.g_minus * step.tilde_minus;
      step.n_plus = step.tilde_plus * base.g_plus;
    }
    fact.steps.push_back(std::move(step));
    fact.achieved_order = r;
  }
  return fact;
}

// ---------------------------------------------------------------------------

namespace {

void require_order(const AsymptoticFactorization& fact, int m) {
  if (m < 0 || m > fact.achieved_order)
    throw OrderExceeded("order " + std::to_string(m) + " requested, achieved order is " +
                        std::to_string(fact.achieved_order));
}

}  // namespace

AssembledFactors assemble(const AsymptoticFactorization& fact, int m, double x) {
  require_order(fact, m);
  const PartialIndices& idx = fact.base.indices;
  AssembledFactors a;
  const CMatrix lp_inv = inverse_lambda_plus(idx).eval(x);
  const CMatrix lm_inv = inverse_lambda_minus(idx).eval(x);
  a.lambda = build_lambda(idx, LambdaVariant::full).eval(x);
  a.minus_factor = fact.base.g_minus.eval(x);
  a.plus_factor = fact.base.g_plus.eval(x);
  for (int r = 0; r < m; ++r) {
    const auto& s = fact.steps[static_cast<std::size_t>(r)];
    a.minus_factor += s.n_minus.eval(x) * lp_inv;
    a.plus_factor += lm_inv * s.n_plus.eval(x);
  }
  a.product = a.minus_factor * a.lambda * a.plus_factor;
  return a;
}

MatrixFunction assembled_minus(const AsymptoticFactorization& fact, int m) {
  require_order(fact, m);
  MatrixFunction out = fact.base.g_minus;
  const MatrixFunction lp_inv = inverse_lambda_plus(fact.base.indices);
  for (int r = 0; r < m; ++r) out = out + fact.steps[static_cast<std::size_t>(r)].n_minus * lp_inv;
  return out;
}

MatrixFunction assembled_plus(const AsymptoticFactorization& fact, int m) {
  require_order(fact, m);
  MatrixFunction out = fact.base.g_plus;
  const MatrixFunction lm_inv = inverse_lambda_minus(fact.base.indices);
  for (int r = 0; r < m; ++r) out = out + lm_inv * fact.steps[static_cast<std::size_t>(r)].n_plus;
  return out;
}

RemainderSamples remainder(const MatrixFunction& g_eps, const AsymptoticFactorization& fact, int m,
                           const GridSpec& grid) {
  require_order(fact, m);
  require_dim(g_eps, fact.base.indices.n(), "perturbed matrix");
  RemainderSamples out;
  out.x = grid.points();
  out.values.reserve(out.x.size());
  for (double x : out.x) {
    CMatrix d = g_eps.eval(x) - assemble(fact, m, x).product;
    out.sup = std::max(out.sup, d.cwiseAbs().maxCoeff());
    out.values.push_back(std::move(d));
  }
  return out;
}

MatrixFunction remainder_function(const AsymptoticFactorization& fact, int m) {
  require_order(fact, m);
  MatrixFunction sum(fact.base.indices.n());
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b)
      if (a + b > m)
        sum = sum + fact.steps[static_cast<std::size_t>(a - 1)].n_minus *
                        fact.steps[static_cast<std::size_t>(b - 1)].n_plus;
  return -sum;
}

CMatrix remainder_at_infinity(const AsymptoticFactorization& fact, int m, const TailSpec& tail) {
  if (m < 1) throw ConfigError("remainder at infinity needs order >= 1");
  require_order(fact, m);
  return limit_at_infinity(remainder_function(fact, m), tail).value;
}

}  // namespace whf
