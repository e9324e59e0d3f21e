// Regularized Cauchy-type integrals on the real line.
//
// With the kernel k_z(t) = 1 / ((t - i)(t - z)) the projections are
//   (W+ f)(z) =  (z - i) / (2 pi i) * int f(t) k_z(t) dt,   Im z > 0,
//   (W- f)(z) = -(z - i) / (2 pi i) * int f(t) k_z(t) dt,   Im z < 0,
// so that W+ f vanishes at z = i and the boundary values satisfy
// (W+ f)(x) + (W- f)(x) = f(x). The upper half-plane (containing i) is the
// "plus" side.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "whf/funcspace.hpp"
#include "whf/quadrature.hpp"

namespace whf {

enum class Side { plus, minus };

/// Quadrature engine bound to one function; caches integrand values at the
/// quadrature nodes so that many evaluations reuse them. Thread-safe.
class CauchyTransform {
 public:
  explicit CauchyTransform(BoundaryFunction f, QuadratureSpec q = {});

  const BoundaryFunction& source() const { return f_; }
  const QuadratureSpec& spec() const { return q_; }

  /// Projection value off the axis; throws TooCloseToAxis if |Im z| < delta or
  /// z is on the wrong side.
  cplx omega(Side side, cplx z) const;
  /// Non-tangential boundary value at real x.
  cplx boundary_value(Side side, double x) const;

  /// (1 / pi) int f(t) / (t^2 + 1) dt.
  cplx weighted_integral() const;
  /// int f(t) / (t - pole)^(r + 1) dt, pole off the real axis.
  cplx moment(cplx pole, int r) const;
  /// int f(t) kernel(t) dt for a kernel that is smooth on R and decays at least
  /// like 1/|t|; `kernel` must be cheap (it is called at every node).
  cplx integrate(const std::function<cplx(double)>& kernel) const;

 private:
  // int f(t) k_z(t) dt with subtraction at Re z. `from_above` picks the
  // boundary limit for real z.
  cplx kernel_integral(cplx z, bool from_above) const;
  const std::vector<cplx>& smooth_values(const Harmonic& h, std::size_t index) const;
  const std::vector<cplx>& oscillatory_values(const Harmonic& h, std::size_t index, double X) const;

  BoundaryFunction f_;
  QuadratureSpec q_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<std::size_t, double>, std::vector<cplx>> cache_;
};

cplx omega(const BoundaryFunction& f, Side side, cplx z, const QuadratureSpec& q = {});
cplx boundary_values(const BoundaryFunction& f, Side side, double x, const QuadratureSpec& q = {});
cplx weighted_integral(const BoundaryFunction& f, const QuadratureSpec& q = {});
cplx moment(const BoundaryFunction& f, cplx pole, int r, const QuadratureSpec& q = {});

/// One half of the Plemelj split: the projection of `source` onto one side.
class HalfPlaneFunction {
 public:
  HalfPlaneFunction(Side side, std::shared_ptr<const CauchyTransform> transform);

  Side side() const { return side_; }
  const BoundaryFunction& source() const { return t_->source(); }
  /// Value in the open half-plane (|Im z| >= delta on the correct side).
  cplx operator()(cplx z) const { return t_->omega(side_, z); }
  /// Boundary value on the real axis.
  cplx boundary(double x) const { return t_->boundary_value(side_, x); }

 private:
  Side side_;
  std::shared_ptr<const CauchyTransform> t_;
};

struct PlemeljPair {
  HalfPlaneFunction minus;
  HalfPlaneFunction plus;
};

PlemeljPair plemelj_split(const BoundaryFunction& f, const QuadratureSpec& q = {});

/// Additive split m = m_plus + m_minus in which m_plus vanishes at infinity
/// (apart from its purely oscillating exp(i w x) terms, w > 0):
///   m_plus  = W+ m + K,   m_minus = W- m - K.
/// Hence m_plus(i) = K and m_minus(-i) = W - K, W the weighted integral.
struct DecayingSplit {
  cplx K{0.0};
  cplx W{0.0};
  cplx L{0.0};  // limit of the non-oscillatory part at infinity
  BoundaryFunction plus;   // with continuation into the upper half-plane
  BoundaryFunction minus;  // with continuation into the lower half-plane
};

/// Scalar constants only (cheap; converged against the refined rule).
struct SplitConstants {
  cplx K{0.0};
  cplx W{0.0};
  cplx L{0.0};
};
SplitConstants split_constants(const BoundaryFunction& m, const QuadratureSpec& q = {});

/// Full split with tabulated boundary functions; both parts evaluate cheaply
/// anywhere on the extended real line.
DecayingSplit decaying_split(const BoundaryFunction& m, const QuadratureSpec& q = {});

/// Evaluates g(z) / (z - c)^order near a point c where the quotient has a
/// removable singularity: inside radius `radius` it sums the Taylor series
/// whose coefficients are computed from g on a circle; outside it divides.
class RemovableQuotient {
 public:
  RemovableQuotient(ComplexEvaluator g, cplx center, int order, double radius = 0.1,
                    int samples = 64);
  cplx operator()(cplx z) const;

 private:
  ComplexEvaluator g_;
  cplx c_;
  int order_;
  double radius_;
  int samples_;
  mutable std::once_flag once_;
  mutable std::vector<cplx> coeffs_;
};

}  // namespace whf
