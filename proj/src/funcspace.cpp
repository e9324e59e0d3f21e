#include "whf/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "whf/errors.hpp"

namespace whf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_frequency(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::shared_ptr<const RealEvaluator> share(RealEvaluator f) {
  return std::make_shared<const RealEvaluator>(std::move(f));
}

// Collapses terms with equal frequency into one envelope.
std::vector<Harmonic> merge(std::vector<Harmonic> terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Harmonic& a, const Harmonic& b) { return a.frequency < b.frequency; });
  std::vector<Harmonic> out;
  std::size_t i = 0;
  while (i < terms.size()) {
    std::size_t j = i + 1;
    while (j < terms.size() && same_frequency(terms[i].frequency, terms[j].frequency)) ++j;
    if (j == i + 1) {
      out.push_back(terms[i]);
    } else {
      std::vector<std::shared_ptr<const RealEvaluator>> parts;
      for (std::size_t k = i; k < j; ++k) parts.push_back(terms[k].envelope);
      out.push_back({terms[i].frequency, share([parts](double x) {
                       cplx s = 0.0;
                       for (const auto& p : parts) s += (*p)(x);
                       return s;
                     })});
    }
    i = j;
  }
  return out;
}

}  // namespace

Region intersect(Region a, Region b) {
  if (a == Region::none || b == Region::none) return Region::none;
  if (a == Region::plane) return b;
  if (b == Region::plane) return a;
  return a == b ? a : Region::none;
}

bool region_contains(Region r, cplx z) {
  switch (r) {
    case Region::plane:
      return true;
    case Region::upper:
      return z.imag() >= 0.0;
    case Region::lower:
      return z.imag() <= 0.0;
    case Region::none:
      return false;
  }
  return false;
}

cplx Harmonic::operator()(double x) const {
  const cplx s = (*envelope)(x);
  if (frequency == 0.0) return s;
  return std::polar(1.0, frequency * x) * s;
}

// ---------------------------------------------------------------------------
// BoundaryFunction

BoundaryFunction::BoundaryFunction()
    : continuation_(std::make_shared<const ComplexEvaluator>([](cplx) { return cplx{0.0}; })) {}

BoundaryFunction::BoundaryFunction(RealEvaluator f, double decay_order, std::string label)
    : terms_{Harmonic{0.0, share(std::move(f))}},
      decay_(decay_order),
      label_(std::move(label)),
      region_(Region::none) {}

BoundaryFunction BoundaryFunction::constant(cplx c, std::string label) {
  if (c == cplx{0.0}) return BoundaryFunction().with_label(std::move(label));
  BoundaryFunction f([c](double) { return c; }, 0.0, std::move(label));
  return f.with_continuation([c](cplx) { return c; }, Region::plane);
}

BoundaryFunction BoundaryFunction::oscillating(double frequency, RealEvaluator envelope,
                                               double decay_order, std::string label) {
  return from_harmonics({Harmonic{frequency, share(std::move(envelope))}}, decay_order,
                        std::move(label));
}

BoundaryFunction BoundaryFunction::from_harmonics(std::vector<Harmonic> terms, double decay_order,
                                                  std::string label) {
  BoundaryFunction f;
  f.terms_ = merge(std::move(terms));
  f.decay_ = f.terms_.empty() ? kInf : decay_order;
  f.label_ = std::move(label);
  if (!f.terms_.empty()) {
    f.continuation_.reset();
    f.region_ = Region::none;
  }
  return f;
}

cplx BoundaryFunction::operator()(double x) const {
  cplx s = 0.0;
  for (const auto& t : terms_) s += t(x);
  return s;
}

double BoundaryFunction::max_frequency() const {
  double w = 0.0;
  for (const auto& t : terms_) w = std::max(w, std::abs(t.frequency));
  return w;
}

cplx BoundaryFunction::smooth_part(double x) const {
  for (const auto& t : terms_)
    if (t.frequency == 0.0) return t.envelope_at(x);
  return 0.0;
}

BoundaryFunction BoundaryFunction::with_label(std::string label) const {
  BoundaryFunction f = *this;
  f.label_ = std::move(label);
  return f;
}

BoundaryFunction BoundaryFunction::with_decay(double decay_order) const {
  BoundaryFunction f = *this;
  if (!f.is_zero()) f.decay_ = decay_order;
  return f;
}

BoundaryFunction BoundaryFunction::with_continuation(ComplexEvaluator g, Region region) const {
  BoundaryFunction f = *this;
  f.continuation_ = std::make_shared<const ComplexEvaluator>(std::move(g));
  f.region_ = region;
  return f;
}

cplx BoundaryFunction::continue_to(cplx z) const {
  if (!continuation_ || !region_contains(region_, z))
    throw Error("no analytic continuation of '" + label_ + "' at the requested point");
  return (*continuation_)(z);
}

namespace {

BoundaryFunction with_combined_continuation(BoundaryFunction out, const BoundaryFunction& a,
                                            const BoundaryFunction& b,
                                            std::function<cplx(cplx, cplx)> op) {
  const Region r = intersect(a.continuation_region(), b.continuation_region());
  if (r == Region::none) return out;
  return out.with_continuation(
      [a, b, op = std::move(op)](cplx z) { return op(a.continue_to(z), b.continue_to(z)); }, r);
}

}  // namespace

BoundaryFunction BoundaryFunction::operator-() const { return cplx{-1.0} * (*this); }

BoundaryFunction operator+(const BoundaryFunction& a, const BoundaryFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::vector<Harmonic> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  auto out = BoundaryFunction::from_harmonics(std::move(terms), std::min(a.decay_, b.decay_));
  return with_combined_continuation(std::move(out), a, b, [](cplx u, cplx v) { return u + v; });
}

BoundaryFunction operator-(const BoundaryFunction& a, const BoundaryFunction& b) { return a + (-b); }

BoundaryFunction operator*(const BoundaryFunction& a, const BoundaryFunction& b) {
  if (a.is_zero() || b.is_zero()) return BoundaryFunction();
  std::vector<Harmonic> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      auto se = s.envelope;
      auto te = t.envelope;
      terms.push_back(
          {s.frequency + t.frequency, share([se, te](double x) { return (*se)(x) * (*te)(x); })});
    }
  }
  auto out = BoundaryFunction::from_harmonics(std::move(terms), a.decay_ + b.decay_);
  return with_combined_continuation(std::move(out), a, b, [](cplx u, cplx v) { return u * v; });
}

BoundaryFunction operator*(cplx c, const BoundaryFunction& f) {
  if (c == cplx{0.0} || f.is_zero()) return BoundaryFunction();
  std::vector<Harmonic> terms;
  for (const auto& t : f.terms_) {
    auto te = t.envelope;
    terms.push_back({t.frequency, share([c, te](double x) { return c * (*te)(x); })});
  }
  auto out = BoundaryFunction::from_harmonics(std::move(terms), f.decay_, f.label_);
  if (f.has_continuation()) {
    out = out.with_continuation([c, f](cplx z) { return c * f.continue_to(z); },
                                f.continuation_region());
  }
  return out;
}

// ---------------------------------------------------------------------------
// MatrixFunction

MatrixFunction::MatrixFunction(std::size_t n) : n_(n), e_(n * n) {}

MatrixFunction::MatrixFunction(std::size_t n, std::vector<BoundaryFunction> entries)
    : n_(n), e_(std::move(entries)) {
  if (e_.size() != n * n) throw DimensionMismatch("matrix function needs n*n entries");
}

MatrixFunction MatrixFunction::identity(std::size_t n) {
  MatrixFunction f(n);
  for (std::size_t i = 0; i < n; ++i) f(i, i) = BoundaryFunction::constant(1.0, "1");
  return f;
}

MatrixFunction MatrixFunction::constant(const CMatrix& c) {
  const auto n = static_cast<std::size_t>(c.rows());
  if (c.cols() != c.rows()) throw DimensionMismatch("constant matrix must be square");
  MatrixFunction f(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f(i, j) = BoundaryFunction::constant(c(i, j));
  return f;
}

MatrixFunction MatrixFunction::diagonal(std::vector<BoundaryFunction> diag) {
  MatrixFunction f(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) f(i, i) = std::move(diag[i]);
  return f;
}

CMatrix MatrixFunction::eval(double x) const {
  CMatrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j)(x);
  return m;
}

Region MatrixFunction::continuation_region() const {
  Region r = Region::plane;
  for (const auto& f : e_) r = intersect(r, f.continuation_region());
  return r;
}

CMatrix MatrixFunction::continue_to(cplx z) const {
  CMatrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).continue_to(z);
  return m;
}

bool MatrixFunction::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const auto& f) { return f.is_zero(); });
}

double MatrixFunction::max_frequency() const {
  double w = 0.0;
  for (const auto& f : e_) w = std::max(w, f.max_frequency());
  return w;
}

MatrixFunction MatrixFunction::operator-() const { return cplx{-1.0} * (*this); }

MatrixFunction operator+(const MatrixFunction& a, const MatrixFunction& b) {
  return combine(a, b, Op::add);
}
MatrixFunction operator-(const MatrixFunction& a, const MatrixFunction& b) {
  return combine(a, b, Op::sub);
}
MatrixFunction operator*(const MatrixFunction& a, const MatrixFunction& b) {
  return combine(a, b, Op::mul);
}

MatrixFunction operator*(cplx c, const MatrixFunction& f) {
  MatrixFunction out(f.n_);
  for (std::size_t k = 0; k < f.e_.size(); ++k) out.e_[k] = c * f.e_[k];
  return out;
}

// ---------------------------------------------------------------------------
// Free operations

cplx eval(const BoundaryFunction& f, double x) { return f(x); }

CMatrix eval_matrix(const MatrixFunction& f, double x) { return f.eval(x); }

MatrixFunction combine(const MatrixFunction& f, const MatrixFunction& g, Op op) {
  if (f.dim() != g.dim())
    throw DimensionMismatch("dimension mismatch: " + std::to_string(f.dim()) + " vs " +
                            std::to_string(g.dim()));
  const std::size_t n = f.dim();
  MatrixFunction out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      switch (op) {
        case Op::add:
          out(i, j) = f(i, j) + g(i, j);
          break;
        case Op::sub:
          out(i, j) = f(i, j) - g(i, j);
          break;
        case Op::mul: {
          BoundaryFunction s;
          for (std::size_t k = 0; k < n; ++k) s = s + f(i, k) * g(k, j);
          out(i, j) = s;
          break;
        }
      }
    }
  }
  return out;
}

CMatrix invert_at(const MatrixFunction& f, double x, double det_floor) {
  const CMatrix m = f.eval(x);
  const double d = std::abs(m.determinant());
  if (!(d >= det_floor)) throw NearSingular(x, d);
  return m.inverse();
}

MatrixFunction pointwise_inverse(const MatrixFunction& f, double det_floor) {
  if (f.max_frequency() != 0.0)
    throw ConfigError("pointwise_inverse needs non-oscillatory entries");
  const std::size_t n = f.dim();
  // Each entry recomputes the full inverse; base factors are small and cheap.
  MatrixFunction out(n);
  const Region r = f.continuation_region();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      BoundaryFunction e([f, i, j, det_floor](double x) { return invert_at(f, x, det_floor)(i, j); },
                         0.0, "inv");
      if (r != Region::none) {
        e = e.with_continuation(
            [f, i, j](cplx z) {
              const CMatrix m = f.continue_to(z);
              return cplx(m.inverse()(i, j));
            },
            r);
      }
      out(i, j) = e;
    }
  }
  return out;
}

namespace {

BoundaryFunction det_expand(const MatrixFunction& f, std::vector<std::size_t> rows,
                            std::vector<std::size_t> cols) {
  if (rows.size() == 1) return f(rows[0], cols[0]);
  BoundaryFunction acc;
  const std::size_t r = rows[0];
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (f(r, cols[k]).is_zero()) continue;
    std::vector<std::size_t> sub_cols = cols;
    sub_cols.erase(sub_cols.begin() + static_cast<std::ptrdiff_t>(k));
    BoundaryFunction term = f(r, cols[k]) * det_expand(f, sub_rows, sub_cols);
    acc = (k % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

BoundaryFunction determinant(const MatrixFunction& f) {
  if (f.dim() == 0) return BoundaryFunction::constant(1.0);
  std::vector<std::size_t> idx(f.dim());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return det_expand(f, idx, idx).with_label("det");
}

std::vector<double> GridSpec::points() const {
  if (num_points < 3) throw ConfigError("grid needs at least 3 points");
  std::vector<double> x(static_cast<std::size_t>(num_points));
  const double a = -std::numbers::pi / 2 + delta;
  const double h = (std::numbers::pi - 2 * delta) / (num_points - 1);
  for (int k = 0; k < num_points; ++k) x[static_cast<std::size_t>(k)] = std::tan(a + k * h);
  // exact symmetry about zero
  for (int k = 0; k < num_points / 2; ++k)
    x[static_cast<std::size_t>(num_points - 1 - k)] = -x[static_cast<std::size_t>(k)];
  if (num_points % 2 == 1) x[static_cast<std::size_t>(num_points / 2)] = 0.0;
  return x;
}

double sup_norm(const MatrixFunction& f, const GridSpec& grid) {
  double s = 0.0;
  for (double x : grid.points()) {
    const CMatrix m = f.eval(x);
    s = std::max(s, m.cwiseAbs().maxCoeff());
  }
  return s;
}

double sup_norm(const BoundaryFunction& f, const GridSpec& grid) {
  double s = 0.0;
  for (double x : grid.points()) s = std::max(s, std::abs(f(x)));
  return s;
}

LimitEstimate limit_at_infinity(const MatrixFunction& f, const TailSpec& tail) {
  if (tail.k_max - tail.k_min < 2) throw ConfigError("tail needs at least three dyadic levels");
  const auto n = static_cast<Eigen::Index>(f.dim());
  LimitEstimate out{CMatrix::Zero(n, n), 0.0};
  CMatrix ends[2];
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    CMatrix prev_extrap;
    CMatrix prev = f.eval(sign * std::ldexp(1.0, tail.k_min));
    double err = 0.0;
    for (int k = tail.k_min + 1; k <= tail.k_max; ++k) {
      const CMatrix cur = f.eval(sign * std::ldexp(1.0, k));
      const CMatrix extrap = 2.0 * cur - prev;  // removes the 1/x term
      if (prev_extrap.size() != 0) err = (extrap - prev_extrap).cwiseAbs().maxCoeff();
      prev_extrap = extrap;
      prev = cur;
    }
    ends[side] = prev_extrap;
    out.error = std::max(out.error, err);
  }
  out.value = 0.5 * (ends[0] + ends[1]);
  out.error = std::max(out.error, 0.5 * (ends[0] - ends[1]).cwiseAbs().maxCoeff());
  const double scale = std::max(1.0, out.value.cwiseAbs().maxCoeff());
  if (!(out.error <= tail.tol * scale))
    throw NoLimit("no limit at infinity: tail spread " + std::to_string(out.error));
  return out;
}

cplx limit_at_infinity(const BoundaryFunction& f, const TailSpec& tail) {
  MatrixFunction m(1, {f});
  return limit_at_infinity(m, tail).value(0, 0);
}

bool decay_claim_holds(const BoundaryFunction& f) {
  const double d = f.decay_order();
  if (f.is_zero() || d <= 0.0) return true;
  std::vector<double> r;
  for (int k = 8; k <= 16; ++k) {
    const double x = std::ldexp(1.0, k);
    r.push_back(std::abs(f(x)) * std::pow(x, d));
    r.push_back(std::abs(f(-x)) * std::pow(x, d));
  }
  std::vector<double> sorted = r;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  if (median == 0.0) return *std::max_element(r.begin(), r.end()) < 1e-12;
  return std::all_of(r.begin(), r.end(), [median](double v) { return v <= 10.0 * median; });
}

// ---------------------------------------------------------------------------
// ThetaInterpolant

ThetaInterpolant::ThetaInterpolant(int panels, int nodes_per_panel)
    : panels_(panels), nodes_(nodes_per_panel) {
  if (panels < 1 || nodes_per_panel < 2) throw ConfigError("bad interpolant layout");
  const auto m = static_cast<std::size_t>(nodes_per_panel);
  theta_.resize(m);
  bary_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double a = (2.0 * static_cast<double>(j) + 1.0) * std::numbers::pi / (2.0 * static_cast<double>(m));
    theta_[j] = -std::cos(a);
    bary_[j] = ((j % 2 == 0) ? 1.0 : -1.0) * std::sin(a);
  }
  const double h = std::numbers::pi / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = -std::numbers::pi / 2 + (p + 0.5) * h;
    for (std::size_t j = 0; j < m; ++j) x_.push_back(std::tan(mid + 0.5 * h * theta_[j]));
  }
}

RealEvaluator ThetaInterpolant::build(std::vector<cplx> values) const {
  if (values.size() != x_.size()) throw DimensionMismatch("interpolant value count mismatch");
  struct Data {
    int panels;
    int nodes;
    std::vector<double> t;
    std::vector<double> w;
    std::vector<cplx> v;
  };
  auto d = std::make_shared<const Data>(Data{panels_, nodes_, theta_, bary_, std::move(values)});
  return [d](double x) -> cplx {
    const double h = std::numbers::pi / d->panels;
    const double th = std::atan(x);
    int p = static_cast<int>(std::floor((th + std::numbers::pi / 2) / h));
    p = std::clamp(p, 0, d->panels - 1);
    const double mid = -std::numbers::pi / 2 + (p + 0.5) * h;
    const double t = (th - mid) / (0.5 * h);
    const std::size_t base = static_cast<std::size_t>(p) * static_cast<std::size_t>(d->nodes);
    cplx num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < d->t.size(); ++j) {
      const double diff = t - d->t[j];
      if (diff == 0.0) return d->v[base + j];
      const double c = d->w[j] / diff;
      num += c * d->v[base + j];
      den += c;
    }
    return num / den;
  };
}

}  // namespace whf
