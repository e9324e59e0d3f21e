#include "whf/cauchy.hpp"

#include <cmath>
#include <numbers>

#include "whf/errors.hpp"

namespace whf {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kTwoPiI{0.0, 2.0 * kPi};

// Off-axis points closer than this get locally graded panels.
constexpr double kGradeBelow = 0.5;

// int_{|t| > X} dt / ((t - i)(t - z))
cplx kernel_tails(double X, cplx z) {
  const cplx d = z - kI;
  if (std::abs(d) < 1e-8) return 1.0 / (X - kI) + 1.0 / (X + kI);
  return (std::log((X + z) / (X + kI)) - std::log((X - z) / (X - kI))) / d;
}

}  // namespace

CauchyTransform::CauchyTransform(BoundaryFunction f, QuadratureSpec q)
    : f_(std::move(f)), q_(q) {
  q_.validate();
}

const std::vector<cplx>& CauchyTransform::smooth_values(const Harmonic& h,
                                                        std::size_t index) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& v = cache_[{index, 0.0}];
  if (v.empty()) {
    const NodeTable& nodes = mapped_nodes(q_.num_panels, q_.nodes_per_panel);
    v.resize(nodes.x.size());
    for (std::size_t k = 0; k < nodes.x.size(); ++k) v[k] = h.envelope_at(nodes.x[k]);
  }
  return v;
}

const std::vector<cplx>& CauchyTransform::oscillatory_values(const Harmonic& h, std::size_t index,
                                                             double X) const {
  const NodeTable& nodes = oscillatory_nodes(h.frequency, X, q_);
  std::lock_guard<std::mutex> lock(mutex_);
  auto& v = cache_[{index, X}];
  if (v.empty()) {
    v.resize(nodes.x.size());
    for (std::size_t k = 0; k < nodes.x.size(); ++k) v[k] = h.envelope_at(nodes.x[k]);
  }
  return v;
}

cplx CauchyTransform::kernel_integral(cplx z, bool from_above) const {
  const double x0 = z.real();
  const double y = z.imag();
  const bool graded = y != 0.0 && std::abs(y) < kGradeBelow;
  auto kernel = [z](double t) { return 1.0 / ((t - kI) * (t - z)); };

  cplx S = 0.0;
  cplx f_x0 = 0.0;
  const auto& terms = f_.harmonics();
  for (std::size_t hi = 0; hi < terms.size(); ++hi) {
    const Harmonic& h = terms[hi];
    const cplx h_x0 = h(x0);
    f_x0 += h_x0;
    if (h.frequency == 0.0) {
      if (graded) {
        std::vector<double> breaks(static_cast<std::size_t>(q_.num_panels) + 1);
        for (int p = 0; p <= q_.num_panels; ++p)
          breaks[static_cast<std::size_t>(p)] = -kPi / 2 + kPi * p / q_.num_panels;
        add_graded_breaks(breaks, std::atan(x0), std::abs(y) / (1.0 + x0 * x0),
                          kPi / q_.num_panels);
        const NodeTable nodes = composite_theta_nodes(breaks, q_.nodes_per_panel);
        for (std::size_t k = 0; k < nodes.x.size(); ++k) {
          const double t = nodes.x[k];
          S += nodes.w[k] * (h.envelope_at(t) - h_x0) * kernel(t);
        }
      } else {
        const NodeTable& nodes = mapped_nodes(q_.num_panels, q_.nodes_per_panel);
        const auto& vals = smooth_values(h, hi);
        for (std::size_t k = 0; k < nodes.x.size(); ++k) {
          const double t = nodes.x[k];
          if (t == x0 && y == 0.0) continue;
          S += nodes.w[k] * (vals[k] - h_x0) * kernel(t);
        }
      }
    } else {
      const double w = h.frequency;
      const double X = oscillatory_halfwidth(w, std::abs(z), q_);
      if (graded) {
        std::vector<double> breaks = oscillatory_breaks(w, X, q_);
        add_graded_breaks(breaks, x0, y, 1.0);
        const NodeTable nodes = composite_nodes(breaks, q_.nodes_per_panel);
        for (std::size_t k = 0; k < nodes.x.size(); ++k) {
          const double t = nodes.x[k];
          S += nodes.w[k] * (h(t) - h_x0) * kernel(t);
        }
      } else {
        const NodeTable& nodes = oscillatory_nodes(w, X, q_);
        const auto& vals = oscillatory_values(h, hi, X);
        for (std::size_t k = 0; k < nodes.x.size(); ++k) {
          const double t = nodes.x[k];
          if (t == x0 && y == 0.0) continue;
          S += nodes.w[k] * (std::polar(1.0, w * t) * vals[k] - h_x0) * kernel(t);
        }
      }
      S += oscillatory_tails(w, X, [&](double t) { return h.envelope_at(t) * kernel(t); });
      S -= h_x0 * kernel_tails(X, z);
    }
  }
  const bool upper = y > 0.0 || (y == 0.0 && from_above);
  if (!upper) S += f_x0 * (-kTwoPiI / (z - kI));
  return S;
}

cplx CauchyTransform::omega(Side side, cplx z) const {
  const double delta = q_.min_imag_distance;
  if (side == Side::plus ? z.imag() < delta : z.imag() > -delta)
    throw TooCloseToAxis("projection evaluated at distance " + std::to_string(std::abs(z.imag())) +
                         " from the axis (or on the wrong side); use boundary values");
  if (side == Side::plus && z == kI) return 0.0;
  const cplx pre = (z - kI) / kTwoPiI;
  const cplx S = kernel_integral(z, side == Side::plus);
  return side == Side::plus ? pre * S : -pre * S;
}

cplx CauchyTransform::boundary_value(Side side, double x) const {
  const cplx plus = (x - kI) / kTwoPiI * kernel_integral(cplx(x, 0.0), true);
  return side == Side::plus ? plus : f_(x) - plus;
}

cplx CauchyTransform::integrate(const std::function<cplx(double)>& kernel) const {
  cplx S = 0.0;
  const auto& terms = f_.harmonics();
  for (std::size_t hi = 0; hi < terms.size(); ++hi) {
    const Harmonic& h = terms[hi];
    if (h.frequency == 0.0) {
      const NodeTable& nodes = mapped_nodes(q_.num_panels, q_.nodes_per_panel);
      const auto& vals = smooth_values(h, hi);
      for (std::size_t k = 0; k < nodes.x.size(); ++k) S += nodes.w[k] * vals[k] * kernel(nodes.x[k]);
    } else {
      const double w = h.frequency;
      const double X = oscillatory_halfwidth(w, 0.0, q_);
      const NodeTable& nodes = oscillatory_nodes(w, X, q_);
      const auto& vals = oscillatory_values(h, hi, X);
      for (std::size_t k = 0; k < nodes.x.size(); ++k) {
        const double t = nodes.x[k];
        S += nodes.w[k] * std::polar(1.0, w * t) * vals[k] * kernel(t);
      }
      S += oscillatory_tails(w, X, [&](double t) { return h.envelope_at(t) * kernel(t); });
    }
  }
  return S;
}

cplx CauchyTransform::weighted_integral() const {
  return integrate([](double t) { return cplx(1.0 / (kPi * (t * t + 1.0))); });
}

cplx CauchyTransform::moment(cplx pole, int r) const {
  if (r < 1) throw ConfigError("moment order must be at least 1");
  if (std::abs(pole.imag()) < q_.min_imag_distance) throw TooCloseToAxis("moment pole on the axis");
  return integrate([pole, r](double t) { return std::pow(t - pole, -(r + 1)); });
}

namespace {

template <class Fn>
cplx converged(const BoundaryFunction& f, const QuadratureSpec& q, const char* what, Fn fn) {
  const CauchyTransform base(f, q);
  const CauchyTransform fine(f, q.refined());
  const cplx a = fn(base);
  const cplx b = fn(fine);
  const double diff = std::abs(a - b);
  if (!(diff <= 10.0 * q.abs_tol * std::max(1.0, std::abs(a))))
    throw QuadratureNotConverged(std::string(what) + ": refinement changed the value by " +
                                 std::to_string(diff));
  return a;
}

}  // namespace

cplx omega(const BoundaryFunction& f, Side side, cplx z, const QuadratureSpec& q) {
  return converged(f, q, "omega", [&](const CauchyTransform& t) { return t.omega(side, z); });
}

cplx boundary_values(const BoundaryFunction& f, Side side, double x, const QuadratureSpec& q) {
  return converged(f, q, "boundary value",
                   [&](const CauchyTransform& t) { return t.boundary_value(side, x); });
}

cplx weighted_integral(const BoundaryFunction& f, const QuadratureSpec& q) {
  if (f.is_zero()) return 0.0;
  return converged(f, q, "weighted integral",
                   [](const CauchyTransform& t) { return t.weighted_integral(); });
}

cplx moment(const BoundaryFunction& f, cplx pole, int r, const QuadratureSpec& q) {
  if (r < 1) throw ConfigError("moment order must be at least 1");
  if (f.is_zero()) return 0.0;
  return converged(f, q, "moment", [&](const CauchyTransform& t) { return t.moment(pole, r); });
}

HalfPlaneFunction::HalfPlaneFunction(Side side, std::shared_ptr<const CauchyTransform> transform)
    : side_(side), t_(std::move(transform)) {}

PlemeljPair plemelj_split(const BoundaryFunction& f, const QuadratureSpec& q) {
  auto t = std::make_shared<const CauchyTransform>(f, q);
  return {HalfPlaneFunction(Side::minus, t), HalfPlaneFunction(Side::plus, t)};
}

SplitConstants split_constants(const BoundaryFunction& m, const QuadratureSpec& q) {
  SplitConstants c;
  if (m.is_zero()) return c;
  bool has_smooth = false;
  for (const auto& h : m.harmonics()) has_smooth = has_smooth || h.frequency == 0.0;
  if (has_smooth) c.L = limit_at_infinity(BoundaryFunction([m](double x) { return m.smooth_part(x); }));
  const BoundaryFunction shifted = m - BoundaryFunction::constant(c.L);
  c.K = converged(shifted, q, "split constant", [](const CauchyTransform& t) {
    return t.integrate([](double s) { return 1.0 / (kTwoPiI * (s - kI)); });
  });
  c.W = weighted_integral(m, q);
  return c;
}

DecayingSplit decaying_split(const BoundaryFunction& m, const QuadratureSpec& q) {
  DecayingSplit out;
  if (m.is_zero()) return out;
  const SplitConstants c = split_constants(m, q);
  out.K = c.K;
  out.W = c.W;
  out.L = c.L;

  auto t = std::make_shared<const CauchyTransform>(m, q);
  const ThetaInterpolant interp(q.interp_panels, q.interp_nodes);
  std::vector<cplx> p0;
  p0.reserve(interp.nodes().size());
  for (double x : interp.nodes()) {
    cplx v = t->boundary_value(Side::plus, x);
    for (const auto& h : m.harmonics())
      if (h.frequency > 0.0) v -= h(x);
    p0.push_back(v);
  }
  auto p0_eval = std::make_shared<const RealEvaluator>(interp.build(std::move(p0)));
  const cplx K = c.K;

  std::vector<Harmonic> plus_terms;
  std::vector<Harmonic> minus_terms;
  std::shared_ptr<const RealEvaluator> smooth_env;
  for (const auto& h : m.harmonics()) {
    if (h.frequency > 0.0) plus_terms.push_back(h);
    if (h.frequency < 0.0) minus_terms.push_back(h);
    if (h.frequency == 0.0) smooth_env = h.envelope;
  }
  plus_terms.push_back(
      {0.0, std::make_shared<const RealEvaluator>([p0_eval, K](double x) { return (*p0_eval)(x) + K; })});
  minus_terms.push_back({0.0, std::make_shared<const RealEvaluator>([p0_eval, smooth_env, K](double x) {
                           const cplx s = smooth_env ? (*smooth_env)(x) : cplx{0.0};
                           return s - (*p0_eval)(x) - K;
                         })});

  const double delta = q.min_imag_distance;
  const double decay = std::min(1.0, m.decay_order());
  out.plus = BoundaryFunction::from_harmonics(std::move(plus_terms), decay, "plus part");
  out.minus = BoundaryFunction::from_harmonics(std::move(minus_terms),
                                               c.L == cplx{0.0} ? decay : 0.0, "minus part");
  const BoundaryFunction plus_bv = out.plus;
  const BoundaryFunction minus_bv = out.minus;
  out.plus = out.plus.with_continuation(
      [t, K, delta, plus_bv](cplx z) {
        if (z.imag() < delta) return plus_bv(z.real());
        return t->omega(Side::plus, z) + K;
      },
      Region::upper);
  out.minus = out.minus.with_continuation(
      [t, K, delta, minus_bv](cplx z) {
        if (z.imag() > -delta) return minus_bv(z.real());
        return t->omega(Side::minus, z) - K;
      },
      Region::lower);
  return out;
}

RemovableQuotient::RemovableQuotient(ComplexEvaluator g, cplx center, int order, double radius,
                                     int samples)
    : g_(std::move(g)), c_(center), order_(order), radius_(radius), samples_(samples) {}

cplx RemovableQuotient::operator()(cplx z) const {
  const cplx d = z - c_;
  if (order_ <= 0) return g_(z) * std::pow(d, -order_);
  if (std::abs(d) >= radius_) return g_(z) / std::pow(d, order_);
  std::call_once(once_, [this] {
    const int N = samples_;
    std::vector<cplx> vals(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j)
      vals[static_cast<std::size_t>(j)] = g_(c_ + std::polar(radius_, 2.0 * kPi * j / N));
    coeffs_.resize(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
      cplx a = 0.0;
      for (int j = 0; j < N; ++j)
        a += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * kPi * k * j / N);
      coeffs_[static_cast<std::size_t>(k)] = a / (static_cast<double>(N) * std::pow(radius_, k));
    }
  });
  // sum_{k >= order} a_k d^(k - order), Horner from the top
  cplx s = 0.0;
  for (int k = samples_ / 2; k >= order_; --k) s = s * d + coeffs_[static_cast<std::size_t>(k)];
  return s;
}

}  // namespace whf
