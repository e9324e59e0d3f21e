#include "whf/gallery.hpp"

#include <array>
#include <cmath>

#include "whf/errors.hpp"

namespace whf {

namespace {

// i x (a0 + ap e^{i eps x} + am e^{-i eps x}) / (x^2 + 1)
BoundaryFunction trig_rational(double a0, double ap, double am, double eps) {
  auto env = [](double c) {
    return [c](double x) { return cplx(0.0, c * x / (x * x + 1.0)); };
  };
  if (eps == 0.0) {
    const double s = a0 + ap + am;
    if (s == 0.0) return BoundaryFunction();
    return BoundaryFunction(env(s), 1.0);
  }
  BoundaryFunction f = BoundaryFunction(env(a0), 1.0) +
                       BoundaryFunction::oscillating(eps, env(ap), 1.0) +
                       BoundaryFunction::oscillating(-eps, env(am), 1.0);
  return f.with_decay(1.0);
}

void require_eps(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be a finite number >= 0");
}

PartialIndices gk_indices() { return PartialIndices({1, -1}); }

struct Coeffs {
  double a0, ap, am;
};

GalleryEntry trig_example(std::string name, std::array<Coeffs, 4> c) {
  GalleryEntry e;
  e.name = std::move(name);
  e.base = BaseFactorization::trivial(gk_indices());
  e.perturbation = [c](double eps) {
    require_eps(eps);
    std::vector<BoundaryFunction> entries;
    for (const auto& k : c) entries.push_back(trig_rational(k.a0, k.ap, k.am, eps));
    return MatrixFunction(2, std::move(entries));
  };
  const MatrixFunction lambda = e.base.product();
  auto pert = e.perturbation;
  e.builder = [lambda, pert](double eps) { return lambda + pert(eps); };
  return e;
}

}  // namespace

GalleryEntry gk_diagonal() {
  GalleryEntry e;
  e.name = "gk0";
  e.base = BaseFactorization::trivial(gk_indices());
  const MatrixFunction lambda = e.base.product();
  e.builder = [lambda](double eps) {
    require_eps(eps);
    return lambda;
  };
  e.perturbation = [](double eps) {
    require_eps(eps);
    return MatrixFunction::zero(2);
  };
  return e;
}

SingularWitness gk_singular(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ConfigError("gk-singular needs eps > 0 (its canonical factors contain 1/eps)");
  SingularWitness w;
  w.entry.name = "gk-singular";
  w.entry.base = BaseFactorization::trivial(gk_indices());
  w.entry.perturbation = [](double e) {
    require_eps(e);
    MatrixFunction n(2);
    if (e != 0.0) n(0, 1) = BoundaryFunction::constant(e);
    return n;
  };
  const MatrixFunction lambda = w.entry.base.product();
  auto pert = w.entry.perturbation;
  w.entry.builder = [lambda, pert](double e) { return lambda + pert(e); };

  const BoundaryFunction one = BoundaryFunction::constant(1.0);
  const BoundaryFunction b = blaschke_power(1);
  const BoundaryFunction b_inv = blaschke_power(-1);
  const cplx inv_eps = 1.0 / eps;
  MatrixFunction gm(2, {one, BoundaryFunction(), inv_eps * b_inv, one});
  MatrixFunction gp(2, {b, BoundaryFunction::constant(eps), BoundaryFunction::constant(-inv_eps),
                        BoundaryFunction()});
  MatrixFunction gm_inv(2, {one, BoundaryFunction(), -inv_eps * b_inv, one});
  MatrixFunction gp_inv(2, {BoundaryFunction(), BoundaryFunction::constant(-eps),
                            BoundaryFunction::constant(inv_eps), b});
  w.canonical = BaseFactorization::make(gm, PartialIndices({0, 0}), gp, gm_inv, gp_inv);
  return w;
}

GalleryEntry example_solvable() {
  GalleryEntry e = trig_example("solvable", {{{-16, 8, 8}, {24, -12, -12}, {-12, 4, 8}, {16, -8, -8}}});
  e.has_oracle = true;
  return e;
}

GalleryEntry example_unsolvable() {
  return trig_example("unsolvable", {{{-16, 8, 8}, {24, -16, -8}, {-12, 4, 8}, {16, -8, -8}}});
}

std::vector<std::string> gallery_names() { return {"gk0", "gk-singular", "solvable", "unsolvable"}; }

GalleryEntry gallery_entry(const std::string& name) {
  if (name == "gk0") return gk_diagonal();
  if (name == "gk-singular") return gk_singular(1.0).entry;
  if (name == "solvable") return example_solvable();
  if (name == "unsolvable") return example_unsolvable();
  throw ConfigError("unknown example '" + name + "' (known: gk0, gk-singular, solvable, unsolvable)");
}

CMatrix oracle_constants(double eps, cplx c21) {
  require_eps(eps);
  const double a = 1.0 - std::exp(-eps) + eps * std::exp(-eps);
  CMatrix c(2, 2);
  c << -4.0 * a, 6.0 * a, c21, 4.0 * a;
  return c;
}

OracleStep oracle_first_step(double eps, cplx c21) {
  require_eps(eps);
  const double A = 1.0 - std::exp(-eps);
  const double em = std::exp(-eps);
  const CMatrix c = oracle_constants(eps, c21);
  const cplx c11 = c(0, 0), c12 = c(0, 1), c22 = c(1, 1);
  const cplx I = kI;
  // E(x) = e^{i eps x} - e^{-eps}, Ebar(x) = e^{-i eps x} - e^{-eps}
  auto E = [eps, em](double x) { return std::polar(1.0, eps * x) - em; };
  auto Eb = [eps, em](double x) { return std::polar(1.0, -eps * x) - em; };
  auto r = [](double x) { return x / (x * x + 1.0); };

  auto bf = [](RealEvaluator f) { return BoundaryFunction(std::move(f), 1.0); };
  MatrixFunction np(2, {
      bf([=](double x) { return (x + I) / (x - I) * (-8.0 * I * A / (x + I) + 8.0 * I * r(x) * E(x) - c11); }),
      bf([=](double x) { return (x + I) / (x - I) * (12.0 * I * A / (x + I) - 12.0 * I * r(x) * E(x) - c12); }),
      bf([=](double x) { return -6.0 * I * A / (x + I) + 4.0 * I * r(x) * E(x) - c21; }),
      bf([=](double x) { return 8.0 * I * A / (x + I) - 8.0 * I * r(x) * E(x) - c22; }),
  });
  MatrixFunction nm(2, {
      bf([=](double x) { return -8.0 * I * A / (x - I) + 8.0 * I * r(x) * Eb(x) + c11; }),
      bf([=](double x) { return (x - I) / (x + I) * (12.0 * I * A / (x - I) - 12.0 * I * r(x) * Eb(x) + c12); }),
      bf([=](double x) { return -6.0 * I * A / (x - I) + 8.0 * I * r(x) * Eb(x) + c21; }),
      bf([=](double x) { return (x - I) / (x + I) * (8.0 * I * A / (x - I) - 8.0 * I * r(x) * Eb(x) + c22); }),
  });
  return {nm, np, c};
}

MatrixFunction singular_perturbation(const BaseFactorization& base, double eps, int k) {
  const auto& kappa = base.indices.kappa();
  if (kappa.front() - kappa.back() < 2)
    throw NoUnstablePair("no pair of partial indices differs by 2 or more");
  if (k < 1) throw ConfigError("perturbation power must be at least 1");
  require_eps(eps);
  const std::size_t i = 0;
  const std::size_t j = kappa.size() - 1;
  MatrixFunction lambda = build_lambda(base.indices, LambdaVariant::full);
  lambda(i, j) = lambda(i, j) + BoundaryFunction::constant(std::pow(eps, k));
  if (base.identity_factors) return lambda;
  return base.g_minus * lambda * base.g_plus;
}

}  // namespace whf
