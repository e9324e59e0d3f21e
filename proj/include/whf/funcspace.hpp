// Scalar and matrix functions on the real line.
//
// A BoundaryFunction is a finite sum of harmonic terms exp(i w x) s_w(x) whose
// envelopes s_w are black-box evaluators that vary slowly (no oscillation of
// their own). Non-oscillatory functions are a single term with w = 0. The
// frequency tags are what lets the quadrature layer resolve exp(i w x) factors
// and integrate their tails asymptotically.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace whf {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

using RealEvaluator = std::function<cplx(double)>;
using ComplexEvaluator = std::function<cplx(cplx)>;

/// Where an analytic continuation off the real axis is valid.
enum class Region { none, upper, lower, plane };

Region intersect(Region a, Region b);
bool region_contains(Region r, cplx z);

/// One term exp(i * frequency * x) * envelope(x).
struct Harmonic {
  double frequency = 0.0;
  std::shared_ptr<const RealEvaluator> envelope;

  cplx operator()(double x) const;
  cplx envelope_at(double x) const { return (*envelope)(x); }
};

class BoundaryFunction {
 public:
  /// The zero function.
  BoundaryFunction();

  /// Non-oscillatory function given by `f`.
  BoundaryFunction(RealEvaluator f, double decay_order = 0.0, std::string label = {});

  static BoundaryFunction constant(cplx c, std::string label = {});

  /// exp(i * frequency * x) * envelope(x).
  static BoundaryFunction oscillating(double frequency, RealEvaluator envelope,
                                      double decay_order = 0.0, std::string label = {});

  static BoundaryFunction from_harmonics(std::vector<Harmonic> terms, double decay_order,
                                         std::string label = {});

  cplx operator()(double x) const;

  const std::vector<Harmonic>& harmonics() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  double decay_order() const { return decay_; }
  const std::string& label() const { return label_; }
  double max_frequency() const;

  /// Sum of the harmonic terms whose frequency is zero (the non-oscillatory part).
  cplx smooth_part(double x) const;

  BoundaryFunction with_label(std::string label) const;
  BoundaryFunction with_decay(double decay_order) const;

  /// Attach an evaluator for the analytic continuation into `region`.
  BoundaryFunction with_continuation(ComplexEvaluator f, Region region) const;
  Region continuation_region() const { return region_; }
  bool has_continuation() const { return region_ != Region::none; }
  /// Evaluates the continuation; throws if z lies outside its region.
  cplx continue_to(cplx z) const;

  BoundaryFunction operator-() const;
  friend BoundaryFunction operator+(const BoundaryFunction& a, const BoundaryFunction& b);
  friend BoundaryFunction operator-(const BoundaryFunction& a, const BoundaryFunction& b);
  friend BoundaryFunction operator*(const BoundaryFunction& a, const BoundaryFunction& b);
  friend BoundaryFunction operator*(cplx c, const BoundaryFunction& f);

 private:
  std::vector<Harmonic> terms_;
  double decay_ = std::numeric_limits<double>::infinity();
  std::string label_;
  std::shared_ptr<const ComplexEvaluator> continuation_;
  Region region_ = Region::plane;
};

class MatrixFunction {
 public:
  MatrixFunction() = default;
  /// n x n zero matrix.
  explicit MatrixFunction(std::size_t n);
  /// Row-major entries.
  MatrixFunction(std::size_t n, std::vector<BoundaryFunction> entries);

  static MatrixFunction identity(std::size_t n);
  static MatrixFunction zero(std::size_t n) { return MatrixFunction(n); }
  static MatrixFunction constant(const CMatrix& c);
  static MatrixFunction diagonal(std::vector<BoundaryFunction> diag);

  std::size_t dim() const { return n_; }
  const BoundaryFunction& operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
  BoundaryFunction& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }

  CMatrix eval(double x) const;
  Region continuation_region() const;
  CMatrix continue_to(cplx z) const;

  bool is_zero() const;
  double max_frequency() const;

  MatrixFunction operator-() const;
  friend MatrixFunction operator+(const MatrixFunction& a, const MatrixFunction& b);
  friend MatrixFunction operator-(const MatrixFunction& a, const MatrixFunction& b);
  friend MatrixFunction operator*(const MatrixFunction& a, const MatrixFunction& b);
  friend MatrixFunction operator*(cplx c, const MatrixFunction& f);

 private:
  std::size_t n_ = 0;
  std::vector<BoundaryFunction> e_;
};

enum class Op { add, sub, mul };

cplx eval(const BoundaryFunction& f, double x);
CMatrix eval_matrix(const MatrixFunction& f, double x);

/// Pointwise matrix algebra; throws DimensionMismatch.
MatrixFunction combine(const MatrixFunction& f, const MatrixFunction& g, Op op);

/// Pointwise inverse; throws NearSingular when |det F(x)| < det_floor.
CMatrix invert_at(const MatrixFunction& f, double x, double det_floor = 1e-10);

/// Inverse as a function. Entries must be non-oscillatory.
MatrixFunction pointwise_inverse(const MatrixFunction& f, double det_floor = 1e-10);

BoundaryFunction determinant(const MatrixFunction& f);

/// x = tan(theta), theta uniform on [-pi/2 + delta, pi/2 - delta].
struct GridSpec {
  int num_points = 2001;
  double delta = 1e-4;

  std::vector<double> points() const;
};

double sup_norm(const MatrixFunction& f, const GridSpec& grid);
double sup_norm(const BoundaryFunction& f, const GridSpec& grid);

/// Dyadic tail x = +-2^k, k_min <= k <= k_max.
struct TailSpec {
  int k_min = 20;
  int k_max = 40;
  double tol = 1e-6;
};

struct LimitEstimate {
  CMatrix value;
  double error = 0.0;
};

/// Richardson-extrapolated limit as |x| -> infinity; throws NoLimit when the
/// tail has not settled or the two ends disagree.
LimitEstimate limit_at_infinity(const MatrixFunction& f, const TailSpec& tail = {});
cplx limit_at_infinity(const BoundaryFunction& f, const TailSpec& tail = {});

/// Checks the claimed decay order on the tail {+-2^k : k = 8..16}: |f(x)| |x|^d
/// must stay below 10x its median.
bool decay_claim_holds(const BoundaryFunction& f);

/// Piecewise Chebyshev interpolant of a smooth evaluator in theta = atan(x).
/// Valid for functions that are smooth in theta, including at theta = +-pi/2
/// (rational behaviour at infinity); not for oscillatory inputs.
class ThetaInterpolant {
 public:
  ThetaInterpolant(int panels, int nodes_per_panel);

  /// Abscissae x at which values must be supplied, in panel order.
  const std::vector<double>& nodes() const { return x_; }
  RealEvaluator build(std::vector<cplx> values) const;

 private:
  int panels_;
  int nodes_;
  std::vector<double> theta_;  // Chebyshev points on [-1, 1]
  std::vector<double> bary_;
  std::vector<double> x_;
};

}  // namespace whf
