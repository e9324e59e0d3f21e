#include "whf/indices.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "whf/errors.hpp"

namespace whf {

PartialIndices::PartialIndices(std::vector<int> kappa) : kappa_(std::move(kappa)) {
  if (kappa_.empty()) throw InvalidIndices("index vector is empty");
  for (std::size_t j = 1; j < kappa_.size(); ++j)
    if (kappa_[j] > kappa_[j - 1]) throw InvalidIndices("partial indices must be non-increasing");
  for (int k : kappa_) {
    if (k > 0) ++p_;
    if (k >= 0) ++q_;
  }
}

int PartialIndices::sum() const { return std::accumulate(kappa_.begin(), kappa_.end(), 0); }

BoundaryFunction blaschke_power(int k) {
  if (k == 0) return BoundaryFunction::constant(1.0, "1");
  auto value = [k](cplx z) { return std::pow((z - kI) / (z + kI), k); };
  BoundaryFunction f([value](double x) { return value(cplx(x, 0.0)); }, 0.0,
                     "b^" + std::to_string(k));
  return f.with_continuation(value, k > 0 ? Region::upper : Region::lower);
}

MatrixFunction build_lambda(const PartialIndices& indices, LambdaVariant variant) {
  std::vector<BoundaryFunction> diag;
  for (int k : indices.kappa()) {
    switch (variant) {
      case LambdaVariant::full:
        diag.push_back(blaschke_power(k));
        break;
      case LambdaVariant::plus:
        diag.push_back(blaschke_power(std::max(k, 0)));
        break;
      case LambdaVariant::minus:
        diag.push_back(blaschke_power(std::min(k, 0)));
        break;
    }
  }
  return MatrixFunction::diagonal(std::move(diag));
}

namespace {

double phase_step(cplx a, cplx b) { return std::arg(b / a); }

double unwrap_interval(const BoundaryFunction& f, double x0, double x1, cplx f0, cplx f1,
                       double det_floor, int depth) {
  const double step = phase_step(f0, f1);
  if (std::abs(step) < std::numbers::pi / 2) return step;
  if (depth >= 12)
    throw ArgumentJump("phase jumps by " + std::to_string(step) + " between x = " +
                       std::to_string(x0) + " and " + std::to_string(x1) + " (grid too coarse)");
  const double xm = 0.5 * (x0 + x1);
  const cplx fm = f(xm);
  if (std::abs(fm) < det_floor) throw NearZero("|f| below floor at x = " + std::to_string(xm));
  return unwrap_interval(f, x0, xm, f0, fm, det_floor, depth + 1) +
         unwrap_interval(f, xm, x1, fm, f1, det_floor, depth + 1);
}

}  // namespace

WindingResult winding_detail(const BoundaryFunction& f, const GridSpec& grid, double det_floor) {
  const std::vector<double> xs = grid.points();
  std::vector<cplx> vals(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    vals[k] = f(xs[k]);
    if (!(std::abs(vals[k]) >= det_floor))
      throw NearZero("|f| = " + std::to_string(std::abs(vals[k])) + " below floor at x = " +
                     std::to_string(xs[k]));
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k)
    total += unwrap_interval(f, xs[k], xs[k + 1], vals[k], vals[k + 1], det_floor, 0);
  // close the contour through infinity
  total += phase_step(vals.back(), vals.front());
  const double turns = total / (2.0 * std::numbers::pi);
  WindingResult r;
  r.winding = static_cast<int>(std::lround(turns));
  r.residual = std::abs(turns - r.winding);
  if (!(r.residual < 0.1))
    throw ArgumentJump("winding residual " + std::to_string(r.residual) + " is not below 0.1");
  return r;
}

int winding_number(const BoundaryFunction& f, const GridSpec& grid, double det_floor) {
  return winding_detail(f, grid, det_floor).winding;
}

bool is_stable(const PartialIndices& indices) {
  return indices.kappa().front() - indices.kappa().back() <= 1;
}

ConditionCounts count_conditions(const PartialIndices& indices) {
  const long n = static_cast<long>(indices.n());
  const long p = static_cast<long>(indices.p());
  const long q = static_cast<long>(indices.q());
  ConditionCounts c;
  for (std::size_t j = static_cast<std::size_t>(q); j < indices.n(); ++j)
    c.solvability += (-indices[j] - 1) * n;
  for (std::size_t i = 0; i < static_cast<std::size_t>(p); ++i) c.solvability += (indices[i] - 1) * n;
  c.solvability += (n - q) * p;
  c.pinned = (n - q) * n + n * p - (n - q) * p;
  c.free = n * (n - p + q);
  return c;
}

}  // namespace whf
