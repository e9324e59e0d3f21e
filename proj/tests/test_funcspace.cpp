#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "whf/errors.hpp"
#include "whf/gallery.hpp"

using namespace whf;
using whf::testing::max_abs;
using whf::testing::probe_points;

namespace {

BoundaryFunction blaschke() {
  return BoundaryFunction([](double x) { return (x - kI) / (x + kI); }, 0.0, "b");
}

MatrixFunction gk0() { return gk_diagonal().builder(0.0); }

}  // namespace

TEST_CASE("eval: constants, direct substitution and a gallery entry") {
  CHECK(eval(BoundaryFunction::constant(1.0), 5.0) == cplx(1.0));
  CHECK(std::abs(eval(blaschke(), 0.0) - cplx(-1.0)) < 1e-15);
  const MatrixFunction g = example_solvable().builder(0.1);
  CHECK(std::abs(eval(g(0, 0), 0.0) - cplx(-1.0)) < 1e-14);
}

TEST_CASE("eval_matrix: gk0, identity and gk-singular") {
  const CMatrix at0 = eval_matrix(gk0(), 0.0);
  CHECK(max_abs(at0 + CMatrix::Identity(2, 2)) < 1e-14);
  for (double x : probe_points())
    CHECK(max_abs(eval_matrix(MatrixFunction::identity(3), x) - CMatrix::Identity(3, 3)) == 0.0);
  CMatrix expect(2, 2);
  expect << -1.0, 0.5, 0.0, -1.0;
  const CMatrix gk1 = eval_matrix(gk_singular(0.5).entry.builder(0.5), 0.0);
  CHECK(max_abs(gk1 - expect) < 1e-14);
}

TEST_CASE("combine: identities, perturbation recovery and dimension checks") {
  const MatrixFunction g = example_solvable().builder(0.1);
  const MatrixFunction plus_zero = combine(g, MatrixFunction::zero(2), Op::add);
  const MatrixFunction times_id = combine(MatrixFunction::identity(2), g, Op::mul);
  for (double x : probe_points()) {
    CHECK(max_abs(plus_zero.eval(x) - g.eval(x)) == 0.0);
    CHECK(max_abs(times_id.eval(x) - g.eval(x)) < 1e-15);
  }
  const MatrixFunction diff = combine(g, gk0(), Op::sub);
  CHECK(max_abs(diff.eval(1.0) - example_solvable().perturbation(0.1).eval(1.0)) < 1e-14);

  // (F + G) - G recovers F
  const MatrixFunction round = combine(combine(g, gk0(), Op::add), gk0(), Op::sub);
  for (double x : probe_points()) CHECK(max_abs(round.eval(x) - g.eval(x)) < 1e-14);

  CHECK_THROWS_AS(combine(g, MatrixFunction::identity(3), Op::add), DimensionMismatch);
  CHECK_THROWS_AS(combine(g, MatrixFunction::identity(3), Op::mul), DimensionMismatch);
}

TEST_CASE("combine: decay metadata") {
  const BoundaryFunction a([](double x) { return cplx(1.0 / (x * x + 1.0)); }, 2.0);
  const BoundaryFunction b([](double x) { return cplx(x / (x * x + 1.0)); }, 1.0);
  CHECK((a + b).decay_order() == doctest::Approx(1.0));
  CHECK((a - b).decay_order() == doctest::Approx(1.0));
  CHECK((a * b).decay_order() == doctest::Approx(3.0));
  CHECK((a * BoundaryFunction::constant(2.0)).decay_order() == doctest::Approx(2.0));
}

TEST_CASE("invert_at: diagonal, identity and singular input") {
  CHECK(max_abs(invert_at(gk0(), 0.0) + CMatrix::Identity(2, 2)) < 1e-14);
  CHECK(max_abs(invert_at(MatrixFunction::identity(2), 3.0) - CMatrix::Identity(2, 2)) == 0.0);
  const BoundaryFunction one = BoundaryFunction::constant(1.0);
  const MatrixFunction singular(2, {one, one, one, one});
  CHECK_THROWS_AS(invert_at(singular, 0.5), NearSingular);
  try {
    invert_at(singular, 0.5);
  } catch (const NearSingular& e) {
    CHECK(e.x() == 0.5);
    CHECK(e.abs_det() < 1e-10);
  }

  const MatrixFunction g = example_solvable().builder(0.1);
  for (double x : probe_points())
    CHECK(max_abs(invert_at(g, x) * g.eval(x) - CMatrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("sup_norm: zero, unimodular and a single constant entry") {
  const GridSpec grid;
  CHECK(sup_norm(MatrixFunction::zero(2), grid) == 0.0);
  CHECK(sup_norm(gk0(), grid) == doctest::Approx(1.0).epsilon(1e-14));
  for (double eps : {0.5, 0.1, 0.01}) {
    const MatrixFunction d = gk_singular(eps).entry.builder(eps) - gk0();
    CHECK(sup_norm(d, grid) == doctest::Approx(eps).epsilon(1e-12));
  }
}

TEST_CASE("sup_norm is monotone under entrywise domination") {
  const BoundaryFunction small([](double x) { return cplx(0.5 / (x * x + 1.0)); }, 2.0);
  const BoundaryFunction big([](double x) { return cplx(0.0, 1.0 / (x * x + 1.0)); }, 2.0);
  const MatrixFunction f(2, {small, small, BoundaryFunction(), small});
  const MatrixFunction g(2, {big, big, big, big});
  CHECK(sup_norm(f, GridSpec{}) <= sup_norm(g, GridSpec{}));
}

TEST_CASE("GridSpec: symmetric, strictly increasing, finite") {
  for (int n : {3, 4, 101, 2001}) {
    const auto pts = GridSpec{n}.points();
    REQUIRE(pts.size() == static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < pts.size(); ++k) {
      CHECK(std::isfinite(pts[k]));
      CHECK(pts[k] == doctest::Approx(-pts[pts.size() - 1 - k]));
      if (k) CHECK(pts[k] > pts[k - 1]);
    }
  }
}

TEST_CASE("limit_at_infinity: constant, Lambda, and the first-step remainder") {
  CMatrix c(2, 2);
  c << 1.0, cplx(0.0, 2.0), -3.0, 0.25;
  CHECK(max_abs(limit_at_infinity(MatrixFunction::constant(c)).value - c) < 1e-12);
  CHECK(max_abs(limit_at_infinity(gk0()).value - CMatrix::Identity(2, 2)) < 1e-9);

  const double eps = 0.1;
  const GalleryEntry g = example_solvable();
  const AsymptoticFactorization fact = factorize(g.base, g.perturbation(eps), 1);
  const MatrixFunction dk = g.builder(eps) - assembled_minus(fact, 1) *
                                                 build_lambda(fact.base.indices, LambdaVariant::full) *
                                                 assembled_plus(fact, 1);
  const double a = 1.0 - std::exp(-eps) + eps * std::exp(-eps);
  const CMatrix lim = limit_at_infinity(dk).value;
  CHECK(max_abs(lim - 16.0 * a * a * CMatrix::Identity(2, 2)) < 1e-3);
  CHECK(max_abs(lim - 0.55143 * CMatrix::Identity(2, 2)) < 1e-3);
}

TEST_CASE("limit_at_infinity: oscillating tail has no limit") {
  const BoundaryFunction osc = BoundaryFunction::oscillating(1.0, [](double) { return cplx(1.0); });
  CHECK_THROWS_AS(limit_at_infinity(osc), NoLimit);
}

TEST_CASE("decay_claim_holds") {
  const BoundaryFunction r2([](double x) { return cplx(1.0 / (x * x + 1.0)); }, 2.0);
  CHECK(decay_claim_holds(r2));
  CHECK_FALSE(decay_claim_holds(r2.with_decay(3.0)));
  CHECK(decay_claim_holds(example_solvable().perturbation(0.1)(0, 1)));
}

TEST_CASE("harmonic terms merge and cancel") {
  const RealEvaluator env = [](double x) { return cplx(x / (x * x + 1.0)); };
  const BoundaryFunction a = BoundaryFunction::oscillating(0.3, env, 1.0);
  const BoundaryFunction b = BoundaryFunction::oscillating(-0.3, env, 1.0);
  CHECK((a + a).harmonics().size() == 1);
  CHECK((a * b).max_frequency() == 0.0);
  // envelopes are opaque: a - a is zero in value, not symbolically
  CHECK(std::abs((a - a)(1.7)) == 0.0);
  CHECK((a - a).harmonics().size() == 1);
  CHECK(std::abs((a * b)(2.0) - env(2.0) * env(2.0)) < 1e-15);
}

TEST_CASE("continuations: region bookkeeping") {
  const BoundaryFunction up = whf::testing::analytic([](cplx z) { return 1.0 / (z + kI); }, 1.0,
                                                     Region::upper);
  CHECK(std::abs(up.continue_to(kI) - cplx(0.0, -0.5)) < 1e-15);
  CHECK_THROWS_AS(up.continue_to(-2.0 * kI), Error);
  const BoundaryFunction down = whf::testing::analytic([](cplx z) { return 1.0 / (z - kI); }, 1.0,
                                                       Region::lower);
  CHECK((up * down).continuation_region() == Region::none);
  CHECK((up + BoundaryFunction::constant(1.0)).continuation_region() == Region::upper);
}

TEST_CASE("ThetaInterpolant reproduces rational functions") {
  const ThetaInterpolant interp(32, 16);
  const auto f = [](double x) { return cplx(1.0 / (x * x + 1.0), x / (x * x + 4.0)); };
  std::vector<cplx> values;
  for (double x : interp.nodes()) values.push_back(f(x));
  const RealEvaluator g = interp.build(values);
  for (double x : probe_points()) CHECK(std::abs(g(x) - f(x)) < 1e-10);
}

TEST_CASE("determinant of the gk-singular matrix is identically one") {
  const BoundaryFunction det = determinant(gk_singular(0.3).entry.builder(0.3));
  for (double x : probe_points()) CHECK(std::abs(det(x) - cplx(1.0)) < 1e-13);
}
