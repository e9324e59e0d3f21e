#include "whf/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "whf/errors.hpp"
#include "whf/expression.hpp"
#include "whf/gallery.hpp"

namespace whf {

using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string entry_name(const std::string& prefix, std::size_t i, std::size_t j) {
  return prefix + "_" + std::to_string(i + 1) + std::to_string(j + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::validate() const {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("--eps must be a finite number >= 0");
  for (double e : eps_list)
    if (!(e >= 0.0) || !std::isfinite(e)) throw ConfigError("--eps-list values must be >= 0");
  if (order < 1) throw ConfigError("--order must be at least 1");
  if (grid_points < 3) throw ConfigError("--grid-points must be at least 3");
  if (!(tol > 0.0)) throw ConfigError("--tol must be positive");
  if (!format.empty() && format != "csv" && format != "json")
    throw ConfigError("--format must be csv or json");
  quadrature().validate();
  (void)policy();
}

QuadratureSpec RunConfig::quadrature() const {
  QuadratureSpec q;
  q.num_panels = panels;
  q.nodes_per_panel = nodes;
  return q;
}

ConstantPolicy RunConfig::policy() const {
  if (c21 == "zero") return ConstantPolicy::zero();
  if (c21 == "match-infinity") return ConstantPolicy::match_infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(c21, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != c21.size() || c21.empty())
    throw ConfigError("--c21 must be zero, match-infinity or a number, got '" + c21 + "'");
  return ConstantPolicy::explicit_values({{{1, 0}, cplx(v)}});
}

// ---------------------------------------------------------------------------
// Problems

namespace {

MatrixFunction parse_matrix(const json& rows, std::size_t n, double eps, const char* what) {
  if (!rows.is_array() || rows.size() != n)
    throw ConfigError(std::string(what) + " must be an array of " + std::to_string(n) + " rows");
  std::vector<BoundaryFunction> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n)
      throw ConfigError(std::string(what) + " rows must have " + std::to_string(n) + " entries");
    for (const auto& e : row) {
      if (e.is_number()) {
        entries.push_back(BoundaryFunction::constant(e.get<double>()));
      } else if (e.is_string()) {
        entries.push_back(parse_expression(e.get<std::string>(), eps));
      } else {
        throw ConfigError(std::string(what) + " entries must be strings or numbers");
      }
    }
  }
  MatrixFunction m(n, std::move(entries));
  for (double x : GridSpec{}.points()) {
    const CMatrix v = m.eval(x);
    if (!v.allFinite())
      throw ConfigError(std::string(what) + " is not finite at x = " + std::to_string(x));
  }
  return m;
}

Problem load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("unknown example '" + path + "' (not a gallery name or readable file)");
  json spec;
  try {
    spec = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse spec '" + path + "': " + e.what());
  }
  try {
    const auto n = spec.at("dim").get<std::size_t>();
    if (n < 1) throw ConfigError("dim must be positive");
    const PartialIndices idx(spec.at("indices").get<std::vector<int>>());
    if (idx.n() != n) throw ConfigError("indices must have dim entries");
    const json rows = spec.at("matrix");
    parse_matrix(rows, n, 0.0, "matrix");  // validate eagerly
    BaseFactorization base = BaseFactorization::trivial(idx);
    if (spec.contains("g_minus") || spec.contains("g_plus")) {
      MatrixFunction gm = spec.contains("g_minus") ? parse_matrix(spec["g_minus"], n, 0.0, "g_minus")
                                                   : MatrixFunction::identity(n);
      MatrixFunction gp = spec.contains("g_plus") ? parse_matrix(spec["g_plus"], n, 0.0, "g_plus")
                                                  : MatrixFunction::identity(n);
      if (gm.max_frequency() != 0.0 || gp.max_frequency() != 0.0)
        throw ConfigError("base factors must not oscillate");
      base = BaseFactorization::make(gm, idx, gp);
    }
    const MatrixFunction g0 = base.product();
    const MatrixFunction at_zero = parse_matrix(rows, n, 0.0, "matrix");
    double mismatch = 0.0;
    for (double x : GridSpec{201}.points())
      mismatch = std::max(mismatch, (at_zero.eval(x) - g0.eval(x)).cwiseAbs().maxCoeff());
    if (mismatch > 1e-8)
      throw ConfigError("matrix at eps = 0 differs from g_minus * Lambda * g_plus by " +
                        std::to_string(mismatch));
    Problem p;
    p.name = path;
    p.base = base;
    p.matrix = [rows, n](double eps) { return parse_matrix(rows, n, eps, "matrix"); };
    p.perturbation = [rows, n, at_zero](double eps) {
      return parse_matrix(rows, n, eps, "matrix") - at_zero;
    };
    return p;
  } catch (const json::exception& e) {
    throw ConfigError("spec '" + path + "': " + e.what());
  }
}

}  // namespace

Problem load_problem(const std::string& example) {
  for (const auto& name : gallery_names()) {
    if (name == example) {
      const GalleryEntry g = gallery_entry(name);
      return {g.name, g.base, g.builder, g.perturbation};
    }
  }
  return load_spec_file(example);
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct Output {
  std::string text;
  void write(const RunConfig& cfg, std::ostream& out) const {
    if (cfg.out.empty()) {
      out << text;
      return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + cfg.out + "'");
    f << text;
  }
};

json residuals_json(const SolvabilityReport& r) {
  json rho = json::array();
  for (const auto& c : r.residuals)
    rho.push_back({{"kind", to_string(c.kind)},
                   {"row", c.row + 1},
                   {"col", c.col + 1},
                   {"order", c.order},
                   {"value", c.value.real()},
                   {"imag", c.value.imag()}});
  return rho;
}

json pinned_json(const SolvabilityReport& r) {
  json pinned = json::array();
  for (const auto& [key, v] : r.pinned_constants)
    pinned.push_back({{"row", key.first + 1}, {"col", key.second + 1}, {"value", v.real()}, {"imag", v.imag()}});
  return pinned;
}

std::string residuals_csv(const SolvabilityReport& r, const std::string& prefix) {
  std::ostringstream s;
  for (const auto& c : r.residuals)
    s << prefix << to_string(c.kind) << ',' << c.row + 1 << ',' << c.col + 1 << ',' << c.order << ','
      << num(c.value.real()) << ',' << num(c.value.imag()) << '\n';
  return s.str();
}

Output cmd_indices(const RunConfig& cfg, const Problem& p) {
  const PartialIndices& idx = p.base.indices;
  const BoundaryFunction det = determinant(p.base.product());
  const WindingResult w = winding_detail(det, GridSpec{cfg.grid_points});
  const ConditionCounts counts = count_conditions(idx);
  const bool stable = is_stable(idx);
  Output o;
  if (cfg.format == "csv") {
    std::ostringstream s;
    s << "key,value\n";
    s << "example," << p.name << '\n';
    s << "indices,";
    for (std::size_t j = 0; j < idx.n(); ++j) s << (j ? " " : "") << idx[j];
    s << '\n';
    s << "winding," << w.winding << '\n';
    s << "winding_residual," << num(w.residual) << '\n';
    s << "index_sum," << idx.sum() << '\n';
    s << "stable," << (stable ? "true" : "false") << '\n';
    s << "p," << idx.p() << '\n';
    s << "q," << idx.q() << '\n';
    s << "solvability_count," << counts.solvability << '\n';
    s << "pinned_constants," << counts.pinned << '\n';
    s << "free_constants," << counts.free << '\n';
    o.text = s.str();
  } else {
    json j = {{"example", p.name},
              {"indices", idx.kappa()},
              {"winding", w.winding},
              {"winding_residual", w.residual},
              {"index_sum", idx.sum()},
              {"stable", stable},
              {"p", idx.p()},
              {"q", idx.q()},
              {"solvability_count", counts.solvability},
              {"pinned_constants", counts.pinned},
              {"free_constants", counts.free}};
    o.text = j.dump(2) + "\n";
  }
  return o;
}

Output cmd_check(const RunConfig& cfg, const Problem& p) {
  const MatrixFunction m = reduce_rhs(p.base, p.perturbation(cfg.eps));
  const SolvabilityReport r = check_solvability(m, p.base.indices, cfg.quadrature(), cfg.tol);
  Output o;
  if (cfg.format == "csv") {
    std::ostringstream s;
    s << "# example=" << p.name << "\n# eps=" << num(cfg.eps) << "\n# passed="
      << (r.passed ? "true" : "false") << "\n# tolerance=" << num(r.tolerance)
      << "\n# scale=" << num(r.scale) << '\n';
    s << "kind,row,col,order,re,im\n";
    s << residuals_csv(r, "");
    for (const auto& [key, v] : r.pinned_constants)
      s << "pinned," << key.first + 1 << ',' << key.second + 1 << ",0," << num(v.real()) << ','
        << num(v.imag()) << '\n';
    o.text = s.str();
  } else {
    json j = {{"example", p.name},       {"eps", cfg.eps},
              {"passed", r.passed},      {"tolerance", r.tolerance},
              {"scale", r.scale},        {"rho", residuals_json(r)},
              {"pinned", pinned_json(r)}};
    o.text = j.dump(2) + "\n";
  }
  return o;
}

json failure_json(const AsymptoticFactorization& f) {
  if (!f.failure) return nullptr;
  return {{"step", f.achieved_order + 1},
          {"rho", residuals_json(*f.failure)},
          {"tolerance", f.failure->tolerance},
          {"scale", f.failure->scale}};
}

Output cmd_factorize(const RunConfig& cfg, const Problem& p) {
  const MatrixFunction g = p.matrix(cfg.eps);
  const AsymptoticFactorization fact = factorize(p.base, p.perturbation(cfg.eps), cfg.order,
                                                 cfg.policy(), cfg.quadrature(), cfg.tol);
  const int m = fact.achieved_order;
  const std::size_t n = p.base.indices.n();
  std::vector<std::string> columns{"x"};
  for (const char* block : {"minus", "plus", "product", "dK"})
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        columns.push_back(entry_name(block, i, j) + "_re");
        columns.push_back(entry_name(block, i, j) + "_im");
      }
  std::vector<std::vector<double>> rows;
  double sup_dk = 0.0;
  for (double x : GridSpec{cfg.grid_points}.points()) {
    const AssembledFactors a = assemble(fact, m, x);
    const CMatrix dk = g.eval(x) - a.product;
    sup_dk = std::max(sup_dk, dk.cwiseAbs().maxCoeff());
    std::vector<double> row{x};
    for (const CMatrix* mat : {&a.minus_factor, &a.plus_factor, &a.product, &dk})
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const cplx v = (*mat)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          row.push_back(v.real());
          row.push_back(v.imag());
        }
    rows.push_back(std::move(row));
  }
  Output o;
  if (cfg.format == "json") {
    json j = {{"meta",
               {{"example", p.name},
                {"eps", cfg.eps},
                {"order", cfg.order},
                {"c21", cfg.c21},
                {"achieved_order", m},
                {"sup_dK", sup_dk}}},
              {"columns", columns},
              {"rows", rows},
              {"failure", failure_json(fact)}};
    o.text = j.dump() + "\n";
  } else {
    std::ostringstream s;
    s << "# example=" << p.name << "\n# eps=" << num(cfg.eps) << "\n# order=" << cfg.order
      << "\n# c21=" << cfg.c21 << "\n# achieved_order=" << m << "\n# sup_dK=" << num(sup_dk) << '\n';
    if (fact.failure) {
      s << "# failure: step=" << m + 1 << " tolerance=" << num(fact.failure->tolerance)
        << " scale=" << num(fact.failure->scale) << '\n';
      s << residuals_csv(*fact.failure, "# failure: ");
    } else {
      s << "# failure: none\n";
    }
    for (std::size_t c = 0; c < columns.size(); ++c) s << (c ? "," : "") << columns[c];
    s << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) s << (c ? "," : "") << num(row[c]);
      s << '\n';
    }
    o.text = s.str();
  }
  return o;
}

Output cmd_sweep(const RunConfig& cfg, const Problem& p) {
  std::vector<double> eps_values = cfg.eps_list.empty() ? std::vector<double>{cfg.eps} : cfg.eps_list;
  const std::size_t n = p.base.indices.n();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> columns{"eps", "status", "achieved_order", "sup_dK", "sup_dK_over_eps2", "rho"};
  for (const char* block : {"dKinf", "c"})
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        columns.push_back(entry_name(block, i, j) + "_re");
        columns.push_back(entry_name(block, i, j) + "_im");
      }
  json records = json::array();
  std::ostringstream csv;
  csv << "# example=" << p.name << "\n# order=" << cfg.order << "\n# c21=" << cfg.c21 << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) csv << (c ? "," : "") << columns[c];
  csv << '\n';
  const GridSpec grid{cfg.grid_points};
  for (double eps : eps_values) {
    const AsymptoticFactorization fact = factorize(p.base, p.perturbation(eps), cfg.order,
                                                   cfg.policy(), cfg.quadrature(), cfg.tol);
    const int m = fact.achieved_order;
    const std::string status = fact.failure ? (m == 0 ? "failed" : "partial") : "ok";
    double sup = nan;
    CMatrix dkinf = CMatrix::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), cplx(nan, nan));
    CMatrix consts = dkinf;
    if (m >= 1) {
      sup = remainder(p.matrix(eps), fact, m, grid).sup;
      try {
        dkinf = remainder_at_infinity(fact, m);
      } catch (const NoLimit&) {
      }
      consts = fact.steps.front().constants;
    }
    const SolvabilityReport& first = m >= 1 ? fact.steps.front().report : *fact.failure;
    double rho = 0.0;
    for (const auto& r : first.residuals)
      if (r.kind == ConditionKind::cond5_cross) {
        rho = r.value.real();
        break;
      }
    const double normalized = eps > 0.0 ? sup / (eps * eps) : nan;
    std::vector<double> values;
    for (const CMatrix* mat : {&dkinf, &consts})
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const cplx v = (*mat)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          values.push_back(v.real());
          values.push_back(v.imag());
        }
    csv << num(eps) << ',' << status << ',' << m << ',' << num(sup) << ',' << num(normalized) << ','
        << num(rho);
    for (double v : values) csv << ',' << num(v);
    csv << '\n';
    json rec = {{"eps", eps},
                {"status", status},
                {"achieved_order", m},
                {"sup_dK", num_json(sup)},
                {"sup_dK_over_eps2", num_json(normalized)},
                {"rho", rho}};
    for (std::size_t k = 0; k < values.size(); ++k) rec[columns[6 + k]] = num_json(values[k]);
    records.push_back(rec);
  }
  Output o;
  if (cfg.format == "json") {
    json j = {{"example", p.name}, {"order", cfg.order}, {"c21", cfg.c21}, {"rows", records}};
    o.text = j.dump(2) + "\n";
  } else {
    o.text = csv.str();
  }
  return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("WHFACTOR_QUAD_PANELS")) {
    try {
      std::size_t used = 0;
      cfg.panels = std::stoi(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      err << "error: WHFACTOR_QUAD_PANELS must be an integer\n";
      return 2;
    }
  }

  CLI::App app{"Asymptotic Wiener-Hopf factorization of perturbed matrix functions", "whfactor"};
  app.require_subcommand(1);
  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--example", cfg.example, "gallery name (gk0, gk-singular, solvable, unsolvable) or JSON spec path")
        ->capture_default_str();
    sub->add_option("--eps", cfg.eps, "perturbation parameter")->capture_default_str();
    sub->add_option("--eps-list", cfg.eps_list, "comma-separated eps values (sweep)")->delimiter(',');
    sub->add_option("--order", cfg.order, "number of correction steps")->capture_default_str();
    sub->add_option("--c21", cfg.c21, "free constant: zero, match-infinity or a number")->capture_default_str();
    sub->add_option("--grid-points", cfg.grid_points, "points of the tan-mapped output grid")->capture_default_str();
    sub->add_option("--panels", cfg.panels, "quadrature panels")->capture_default_str();
    sub->add_option("--nodes", cfg.nodes, "Gauss-Legendre nodes per panel")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "relative solvability tolerance")->capture_default_str();
    sub->add_option("--out", cfg.out, "output file (default: standard output)");
    sub->add_option("--format", cfg.format, "csv or json");
  };
  CLI::App* indices = app.add_subcommand("indices", "partial indices, winding and condition counts");
  CLI::App* check = app.add_subcommand("check", "first-step solvability report");
  CLI::App* fact = app.add_subcommand("factorize", "factor and remainder samples on the grid");
  CLI::App* sweep = app.add_subcommand("sweep", "remainder metrics over a list of eps values");
  for (CLI::App* sub : {indices, check, fact, sweep}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cfg.format.empty()) cfg.format = (indices->parsed() || check->parsed()) ? "json" : "csv";
    cfg.validate();
    const Problem problem = load_problem(cfg.example);
    Output o;
    if (indices->parsed()) o = cmd_indices(cfg, problem);
    if (check->parsed()) o = cmd_check(cfg, problem);
    if (fact->parsed()) o = cmd_factorize(cfg, problem);
    if (sweep->parsed()) o = cmd_sweep(cfg, problem);
    o.write(cfg, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidIndices& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PolicyConflict& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace whf
