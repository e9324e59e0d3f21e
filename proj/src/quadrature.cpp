#include "whf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "whf/errors.hpp"

namespace whf {

using cplx = std::complex<double>;

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec r = *this;
  r.num_panels *= 2;
  r.osc_reach *= 2.0;
  r.osc_panel_periods /= 2.0;
  return r;
}

void QuadratureSpec::validate() const {
  if (nodes_per_panel < 2 || nodes_per_panel > 256) throw ConfigError("nodes per panel must be in [2, 256]");
  if (num_panels < 2) throw ConfigError("need at least 2 quadrature panels");
  if (!(abs_tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
  if (!(min_imag_distance > 0.0)) throw ConfigError("minimum distance to the axis must be positive");
  if (!(osc_reach > 0.0) || !(osc_panel_periods > 0.0)) throw ConfigError("bad oscillatory settings");
  if (interp_panels < 1 || interp_nodes < 2) throw ConfigError("bad interpolant layout");
}

namespace {

NodeTable compute_gauss_legendre(int n) {
  NodeTable t;
  t.x.resize(static_cast<std::size_t>(n));
  t.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    t.x[lo] = -x;
    t.x[hi] = x;
    t.w[lo] = w;
    t.w[hi] = w;
  }
  if (n % 2 == 1) t.x[static_cast<std::size_t>(n / 2)] = 0.0;
  return t;
}

std::mutex g_cache_mutex;

}  // namespace

const NodeTable& gauss_legendre(int n) {
  static std::map<int, std::unique_ptr<NodeTable>> cache;
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<NodeTable>(compute_gauss_legendre(n));
  return *slot;
}

NodeTable composite_nodes(const std::vector<double>& breaks, int nodes_per_panel) {
  const NodeTable& g = gauss_legendre(nodes_per_panel);
  NodeTable t;
  t.x.reserve(breaks.size() * g.x.size());
  t.w.reserve(breaks.size() * g.x.size());
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t j = 0; j < g.x.size(); ++j) {
      t.x.push_back(mid + half * g.x[j]);
      t.w.push_back(half * g.w[j]);
    }
  }
  return t;
}

NodeTable composite_theta_nodes(const std::vector<double>& theta_breaks, int nodes_per_panel) {
  NodeTable t = composite_nodes(theta_breaks, nodes_per_panel);
  for (std::size_t k = 0; k < t.x.size(); ++k) {
    const double tau = std::tan(t.x[k]);
    t.x[k] = tau;
    t.w[k] *= 1.0 + tau * tau;
  }
  return t;
}

const NodeTable& mapped_nodes(int panels, int nodes_per_panel) {
  static std::map<std::pair<int, int>, std::unique_ptr<NodeTable>> cache;
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = cache.find({panels, nodes_per_panel});
    if (it != cache.end()) return *it->second;
  }
  std::vector<double> breaks(static_cast<std::size_t>(panels) + 1);
  for (int p = 0; p <= panels; ++p)
    breaks[static_cast<std::size_t>(p)] = -std::numbers::pi / 2 + std::numbers::pi * p / panels;
  auto table = std::make_unique<NodeTable>(composite_theta_nodes(breaks, nodes_per_panel));
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto& slot = cache[{panels, nodes_per_panel}];
  if (!slot) slot = std::move(table);
  return *slot;
}

double oscillatory_halfwidth(double w, double x0, const QuadratureSpec& q) {
  double X = std::max(q.osc_reach / std::abs(w), 64.0);
  const double need = 2.0 * std::abs(x0) + 10.0;
  double pow2 = 64.0;
  while (pow2 < need) pow2 *= 2.0;
  X = std::max(X, pow2);
  // round up to a power of two so that nearby x0 share one core
  double r = 64.0;
  while (r < X) r *= 2.0;
  return r;
}

std::vector<double> oscillatory_breaks(double w, double X, const QuadratureSpec& q) {
  const double max_width = q.osc_panel_periods * 2.0 * std::numbers::pi / std::abs(w);
  std::vector<double> right{0.0};
  double t = 0.0;
  while (t < X) {
    const double width = std::min(std::max(0.5, 0.5 * t), max_width);
    t = std::min(X, t + width);
    right.push_back(t);
  }
  std::vector<double> breaks;
  breaks.reserve(2 * right.size());
  for (auto it = right.rbegin(); it != right.rend(); ++it) breaks.push_back(-*it);
  breaks.insert(breaks.end(), right.begin() + 1, right.end());
  return breaks;
}

const NodeTable& oscillatory_nodes(double w, double X, const QuadratureSpec& q) {
  using Key = std::tuple<double, double, double, int>;
  static std::map<Key, std::unique_ptr<NodeTable>> cache;
  const Key key{std::abs(w), X, q.osc_panel_periods, q.nodes_per_panel};
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto table = std::make_unique<NodeTable>(
      composite_nodes(oscillatory_breaks(w, X, q), q.nodes_per_panel));
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto& slot = cache[key];
  if (!slot) slot = std::move(table);
  return *slot;
}

cplx oscillatory_tails(double w, double X, const std::function<cplx(double)>& g) {
  const double h = 1e-3 * X;
  const cplx gr = g(X);
  const cplx gl = g(-X);
  const cplx dgr = (g(X + h) - g(X - h)) / (2.0 * h);
  const cplx dgl = (g(-X + h) - g(-X - h)) / (2.0 * h);
  const cplx I{0.0, 1.0};
  const cplx right = std::polar(1.0, w * X) * (I * gr / w - dgr / (w * w));
  const cplx left = std::polar(1.0, -w * X) * (-I * gl / w + dgl / (w * w));
  return right + left;
}

void add_graded_breaks(std::vector<double>& breaks, double x0, double y, double reach) {
  const double lo = breaks.front();
  const double hi = breaks.back();
  for (double d = std::abs(y); d < reach; d *= 2.0) {
    if (x0 - d > lo) breaks.push_back(x0 - d);
    if (x0 + d < hi) breaks.push_back(x0 + d);
  }
  if (x0 > lo && x0 < hi) breaks.push_back(x0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
}

}  // namespace whf
