// Composite Gauss-Legendre rules on the real line.
//
// Non-oscillatory integrands are integrated with the substitution tau = tan(theta)
// and uniform theta panels. Terms carrying a factor exp(i w tau) are integrated on
// a finite core [-X, X] with graded panels (at most a few periods wide) and the
// two tails are closed with a two-term integration-by-parts expansion.
#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace whf {

struct QuadratureSpec {
  int nodes_per_panel = 32;
  int num_panels = 64;
  double abs_tol = 1e-9;
  /// Off-axis evaluation closer than this to the real line is refused.
  double min_imag_distance = 1e-6;
  /// Oscillatory core half-width is at least osc_reach / |w|.
  double osc_reach = 2000.0;
  /// Oscillatory panels are at most this many periods wide.
  double osc_panel_periods = 4.0;
  /// Layout of the theta-interpolant used to tabulate projections.
  int interp_panels = 32;
  int interp_nodes = 16;

  int total_nodes() const { return nodes_per_panel * num_panels; }
  /// Twice the panels, twice the oscillatory reach, half the oscillatory panel width.
  QuadratureSpec refined() const;
  /// Throws ConfigError on a nonsensical spec.
  void validate() const;
};

struct NodeTable {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre rule with n points on [-1, 1]; computed once and shared.
const NodeTable& gauss_legendre(int n);

/// Composite rule for integrals over R in the variable tau = tan(theta) with
/// `panels` uniform theta panels; weights include d tau / d theta. Cached.
const NodeTable& mapped_nodes(int panels, int nodes_per_panel);

/// Composite rule over consecutive breakpoints in tau.
NodeTable composite_nodes(const std::vector<double>& breaks, int nodes_per_panel);

/// Composite rule in theta over consecutive theta breakpoints (mapped to tau).
NodeTable composite_theta_nodes(const std::vector<double>& theta_breaks, int nodes_per_panel);

/// Core half-width used for frequency w when the integrand has a feature at x0.
double oscillatory_halfwidth(double w, double x0, const QuadratureSpec& q);

/// Breakpoints of the graded oscillatory core [-X, X].
std::vector<double> oscillatory_breaks(double w, double X, const QuadratureSpec& q);

/// Cached composite rule for the oscillatory core.
const NodeTable& oscillatory_nodes(double w, double X, const QuadratureSpec& q);

/// Asymptotic tails: int_X^inf + int_-inf^-X of exp(i w t) g(t) dt for |w| > 0
/// and smooth, slowly varying g, by two steps of integration by parts.
std::complex<double> oscillatory_tails(double w, double X,
                                       const std::function<std::complex<double>(double)>& g);

/// Adds breakpoints x0 +- y 2^k (k >= 0, while y 2^k < reach) to resolve a
/// near-singular kernel 1/(tau - x0 - i y).
void add_graded_breaks(std::vector<double>& breaks, double x0, double y, double reach);

}  // namespace whf
