// Shared fixtures for the unit tests.
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "whf/funcspace.hpp"

namespace whf::testing {

/// Rational-type function given by a complex formula, used both on the real
/// line and as its continuation into `region`.
inline BoundaryFunction analytic(std::function<cplx(cplx)> f, double decay, Region region,
                                 std::string label = {}) {
  return BoundaryFunction([f](double x) { return f(cplx(x, 0.0)); }, decay, std::move(label))
      .with_continuation(f, region);
}

/// 1/(tau^2 + 1), 1/(tau + i), tau/(tau^2 + 1)^2, 1/(tau - i), 1/(tau + 2i)^2,
/// x exp(i x)/(x^2 + 1).
inline std::vector<BoundaryFunction> cauchy_family() {
  return {
      BoundaryFunction([](double t) { return cplx(1.0 / (t * t + 1.0)); }, 2.0, "1/(t^2+1)"),
      analytic([](cplx t) { return 1.0 / (t + kI); }, 1.0, Region::upper, "1/(t+i)"),
      BoundaryFunction([](double t) { return cplx(t / ((t * t + 1.0) * (t * t + 1.0))); }, 3.0,
                       "t/(t^2+1)^2"),
      analytic([](cplx t) { return 1.0 / (t - kI); }, 1.0, Region::lower, "1/(t-i)"),
      analytic([](cplx t) { return 1.0 / ((t + 2.0 * kI) * (t + 2.0 * kI)); }, 2.0, Region::upper,
               "1/(t+2i)^2"),
      BoundaryFunction::oscillating(1.0, [](double t) { return cplx(t / (t * t + 1.0)); }, 1.0,
                                    "t e^{it}/(t^2+1)"),
  };
}

/// Sparse probe grid used by the entrywise comparisons.
inline std::vector<double> probe_points() {
  return {-1000.0, -37.5, -10.0, -3.0, -1.0, -0.4, 0.0, 0.25, 0.7, 1.0, 2.5, 8.0, 31.0, 400.0};
}

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace whf::testing
