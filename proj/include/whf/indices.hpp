// Partial-index bookkeeping: the diagonal factor Lambda, its plus/minus split,
// winding numbers, stability and condition counts.
//
// b(x) = (x - i)/(x + i) has winding +1 along R; Lambda = diag(b^kappa_j),
// Lambda+ uses exponents max(kappa_j, 0) (analytic in the upper half-plane) and
// Lambda- uses min(kappa_j, 0) (analytic in the lower half-plane).
#pragma once

#include <vector>

#include "whf/funcspace.hpp"

namespace whf {

class PartialIndices {
 public:
  PartialIndices() = default;
  /// Throws InvalidIndices unless `kappa` is non-empty and non-increasing.
  explicit PartialIndices(std::vector<int> kappa);

  const std::vector<int>& kappa() const { return kappa_; }
  int operator[](std::size_t j) const { return kappa_[j]; }
  std::size_t n() const { return kappa_.size(); }
  /// Number of strictly positive indices.
  std::size_t p() const { return p_; }
  /// n minus the number of strictly negative indices.
  std::size_t q() const { return q_; }
  int sum() const;

  /// Entry (row, col), zero-based, whose step constant is not fixed by any
  /// condition (rows with kappa <= 0 crossed with columns with kappa >= 0).
  bool is_free(std::size_t row, std::size_t col) const { return row >= p_ && col < q_; }

 private:
  std::vector<int> kappa_;
  std::size_t p_ = 0;
  std::size_t q_ = 0;
};

/// b(x)^k with its continuation (upper half-plane for k > 0, lower for k < 0).
BoundaryFunction blaschke_power(int k);

enum class LambdaVariant { full, plus, minus };

MatrixFunction build_lambda(const PartialIndices& indices, LambdaVariant variant);

struct WindingResult {
  int winding = 0;
  double residual = 0.0;  // |total turn - winding|
};

/// Winding number of f along R by phase unwrapping on the grid, bisecting
/// intervals whose phase step reaches pi/2 (depth <= 12). Throws NearZero if
/// |f| < det_floor at a sample, ArgumentJump if refinement cannot resolve a
/// step, and ArgumentJump if the rounding residual is >= 0.1.
WindingResult winding_detail(const BoundaryFunction& f, const GridSpec& grid = {},
                             double det_floor = 1e-10);
int winding_number(const BoundaryFunction& f, const GridSpec& grid = {}, double det_floor = 1e-10);

bool is_stable(const PartialIndices& indices);

struct ConditionCounts {
  long solvability = 0;
  long pinned = 0;
  long free = 0;
};

ConditionCounts count_conditions(const PartialIndices& indices);

}  // namespace whf
