#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "whf/errors.hpp"
#include "whf/gallery.hpp"
#include "whf/indices.hpp"

using namespace whf;
using whf::testing::max_abs;
using whf::testing::probe_points;

namespace {

CMatrix diag2(cplx a, cplx b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

const std::vector<std::vector<int>>& index_family() {
  static const std::vector<std::vector<int>> f = {
      {1, -1}, {2, -2}, {0, 0}, {3, 1, -1}, {2, 0, 0, -1}, {1, 1, 0}, {0, -1, -3}, {4}};
  return f;
}

}  // namespace

TEST_CASE("PartialIndices: block bounds and validation") {
  const PartialIndices a({1, -1});
  CHECK(a.p() == 1);
  CHECK(a.q() == 1);
  const PartialIndices b({3, 1, 0, 0, -2});
  CHECK(b.p() == 2);
  CHECK(b.q() == 4);
  CHECK(b.sum() == 2);
  CHECK(b.is_free(2, 0));
  CHECK_FALSE(b.is_free(1, 0));
  CHECK_FALSE(b.is_free(2, 4));
  CHECK_THROWS_AS(PartialIndices(std::vector<int>{}), InvalidIndices);
  CHECK_THROWS_AS(PartialIndices({-1, 1}), InvalidIndices);
}

TEST_CASE("build_lambda: examples") {
  const PartialIndices k({1, -1});
  CHECK(max_abs(build_lambda(k, LambdaVariant::full).eval(0.0) - diag2(-1.0, -1.0)) < 1e-15);
  CHECK(max_abs(build_lambda(k, LambdaVariant::plus).eval(0.0) - diag2(-1.0, 1.0)) < 1e-15);
  CHECK(max_abs(build_lambda(k, LambdaVariant::minus).eval(0.0) - diag2(1.0, -1.0)) < 1e-15);
  const PartialIndices zero({0, 0, 0});
  for (auto v : {LambdaVariant::full, LambdaVariant::plus, LambdaVariant::minus})
    for (double x : probe_points())
      CHECK(max_abs(build_lambda(zero, v).eval(x) - CMatrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("build_lambda: plus * minus = full, unimodular entries") {
  for (const auto& kv : index_family()) {
    const PartialIndices k(kv);
    const MatrixFunction full = build_lambda(k, LambdaVariant::full);
    const MatrixFunction plus = build_lambda(k, LambdaVariant::plus);
    const MatrixFunction minus = build_lambda(k, LambdaVariant::minus);
    for (double x : probe_points()) {
      CHECK(max_abs(plus.eval(x) * minus.eval(x) - full.eval(x)) < 1e-12);
      for (const MatrixFunction* l : {&full, &plus, &minus})
        for (std::size_t j = 0; j < k.n(); ++j)
          CHECK(std::abs(std::abs((*l)(j, j)(x)) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("build_lambda: continuations of the plus and minus variants") {
  const PartialIndices k({2, 0, -1});
  const MatrixFunction plus = build_lambda(k, LambdaVariant::plus);
  const MatrixFunction minus = build_lambda(k, LambdaVariant::minus);
  const cplx zu(0.5, 2.0), zl(0.5, -2.0);
  const cplx b_up = (zu - kI) / (zu + kI);
  const cplx b_lo = (zl - kI) / (zl + kI);
  CHECK(std::abs(plus.continue_to(zu)(0, 0) - b_up * b_up) < 1e-14);
  CHECK(std::abs(minus.continue_to(zl)(2, 2) - 1.0 / b_lo) < 1e-14);
  // bounded in their own half-planes
  CHECK(std::abs(plus.continue_to(kI * 1e-3)(0, 0)) <= 1.0);
  CHECK(std::abs(minus.continue_to(-kI * 1e-3)(2, 2)) <= 1.0);
}

TEST_CASE("winding_number: examples") {
  CHECK(winding_number(BoundaryFunction::constant(1.0)) == 0);
  CHECK(winding_number(blaschke_power(1)) == 1);
  CHECK(winding_number(blaschke_power(-3)) == -3);
  for (double eps : {1.0, 0.1, 0.01})
    CHECK(winding_number(determinant(gk_singular(eps).entry.builder(eps))) == 0);
}

TEST_CASE("winding_number: det Lambda winds by the index sum") {
  for (const auto& kv : index_family()) {
    const PartialIndices k(kv);
    const WindingResult w = winding_detail(determinant(build_lambda(k, LambdaVariant::full)));
    CHECK(w.winding == k.sum());
    CHECK(w.residual < 0.1);
  }
}

TEST_CASE("winding_number: refinement resolves fast phase and zeros are refused") {
  // b^8 turns 8 times; phase steps of about 0.67 pi on 25 points are bisected
  CHECK(winding_number(blaschke_power(8), GridSpec{25}) == 8);
  const BoundaryFunction vanishing([](double x) { return cplx(x, 0.0); });
  CHECK_THROWS_AS(winding_number(vanishing, GridSpec{101}), NearZero);
}

TEST_CASE("is_stable") {
  CHECK_FALSE(is_stable(PartialIndices({1, -1})));
  CHECK(is_stable(PartialIndices({0, 0})));
  CHECK(is_stable(PartialIndices({2, 1})));
  CHECK(is_stable(PartialIndices({5})));
  CHECK_FALSE(is_stable(PartialIndices({2, 2, 0})));
  // depends only on kappa_1 - kappa_n
  CHECK(is_stable(PartialIndices({7, 7, 6})) == is_stable(PartialIndices({1, 1, 0})));
}

TEST_CASE("count_conditions") {
  const ConditionCounts a = count_conditions(PartialIndices({1, -1}));
  CHECK(a.solvability == 1);
  CHECK(a.free == 4);
  CHECK(a.pinned == 3);
  CHECK(count_conditions(PartialIndices({2, -2})).solvability == 5);
  const ConditionCounts c = count_conditions(PartialIndices({0, 0}));
  CHECK(c.solvability == 0);
  CHECK(c.pinned == 0);
  CHECK(c.free == 8);
  // n = 3, (3, 1, -1): p = 2, q = 2
  const ConditionCounts d = count_conditions(PartialIndices({3, 1, -1}));
  CHECK(d.solvability == 0 * 3 + (2 + 0) * 3 + 1 * 2);
  CHECK(d.pinned == 1 * 3 + 3 * 2 - 1 * 2);
  CHECK(d.free == 3 * (3 - 2 + 2));
}
