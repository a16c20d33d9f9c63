#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <string>

#include "elastica/curve.hpp"
#include "elastica/el_conditions.hpp"
#include "elastica/errors.hpp"
#include "elastica/extremal.hpp"
#include "elastica/variation.hpp"
#include "output.hpp"
#include "scene.hpp"

namespace elastica::cli {

namespace {

using out::Csv;
using out::Json;

struct Settings {
  std::string scene, curve, variation, experiment;
  std::optional<int> grid;
  std::optional<double> tol_residual, tol_bc;
  double fd_step = 1e-3;
  int panels = 64;
  std::string out_path, log_path;
  std::string format;
};

class Output {
 public:
  Output(const Settings& s, std::ostream& console) : path_(s.out_path), console_(console) {}
  void write(const std::string& text) const {
    if (path_.empty()) {
      console_ << text;
      return;
    }
    write_file(path_, text);
  }
  static void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SchemaError("cannot write '" + path + "'");
    f << text;
  }

 private:
  std::string path_;
  std::ostream& console_;
};

Json pair(double a, double b) { return Json::array({a, b}); }

Json array4(const std::array<double, 4>& a) { return Json::array({a[0], a[1], a[2], a[3]}); }

double or_nan(const std::function<double()>& f) {
  try {
    return f();
  } catch (const DegenerateOsculating&) {
    return std::nan("");
  } catch (const IndefiniteDenominator&) {
    return std::nan("");
  }
}

// ---------------------------------------------------------------------------

std::string invariants(const Settings& st) {
  const scene::Scene sc = scene::Scene::load(st.scene);
  const auto c = sc.curve(st.curve);
  const std::vector<double> grid = uniform_grid(c->length(), st.grid.value_or(257));
  struct Row {
    double s, kg, kn, tg, kappa, tau, f;
  };
  std::vector<Row> rows;
  CaseSignature sig{1, 1, -1};
  for (double s : grid) {
    const DarbouxData d = darboux_frame(*c, s, 1);
    sig = d.sig;
    const double f = or_nan([&] { return torsion_from_darboux(d); });
    double kappa = std::nan(""), tau = std::nan("");
    try {
      const CurvatureTorsion ct = curvature_torsion(*c, s);
      kappa = ct.kappa;
      tau = ct.tau;
    } catch (const DegenerateOsculating&) {
    }
    rows.push_back({s, d.kappa_g(0), d.kappa_n(0), d.tau_g(0), kappa, tau, f});
  }
  if (st.format == "json") {
    Json j;
    j["curve"] = st.curve;
    j["surface"] = c->patch().name();
    j["case"] = sig.to_string();
    j["case_label"] = sig.label();
    j["branch"] = c->cross_branch();
    Json samples = Json::array();
    for (const Row& r : rows)
      samples.push_back({{"s", r.s}, {"kappa_g", r.kg}, {"kappa_n", r.kn}, {"tau_g", r.tg},
                         {"kappa", r.kappa}, {"tau", r.tau}, {"f", r.f}});
    j["samples"] = std::move(samples);
    return out::dump(j);
  }
  Csv csv({"s", "kappa_g", "kappa_n", "tau_g", "kappa", "tau", "f"});
  for (const Row& r : rows) csv.row({r.s, r.kg, r.kn, r.tg, r.kappa, r.tau, r.f});
  return csv.str();
}

std::string functional(const Settings& st) {
  const scene::Scene sc = scene::Scene::load(st.scene);
  const auto c = sc.curve(st.curve);
  const double H = functional_H(*c);
  if (st.format == "csv") return Csv({"curve", "length", "H"}).row({st.curve}, {c->length(), H}).str();
  Json j;
  j["curve"] = st.curve;
  j["length"] = c->length();
  j["H"] = H;
  return out::dump(j);
}

Json boundary_json(const BoundaryTerms& b) {
  Json j;
  j["mu"] = array4(b.mu);
  j["coeff"] = array4(b.coeff);
  return j;
}

std::string vary(const Settings& st) {
  const scene::Scene sc = scene::Scene::load(st.scene);
  const auto c = sc.curve(st.curve);
  const VariationSpec v = sc.variation(st.variation, c->length());
  VaryOptions o;
  o.fd_step = st.fd_step;
  o.panels = st.panels;
  if (st.grid) o.samples = *st.grid;
  const VariationReport r = dH_dt_closed(c, v, o);
  if (st.format == "csv") {
    Csv csv({"s", "mu", "integrand", "euler_lagrange"});
    for (const IntegrandSample& x : r.samples) csv.row({x.s, x.mu, x.integrand, x.euler_lagrange});
    return csv.str();
  }
  Json j;
  j["curve"] = st.curve;
  j["variation"] = st.variation;
  j["mu"] = v.mu.to_string();
  j["case_label"] = r.case_label;
  j["branch"] = r.branch;
  j["dH_dt_closed"] = r.dH_dt_closed;
  j["dH_dt_fd"] = r.dH_dt_fd;
  j["relative_gap"] = r.relative_gap;
  j["dH_dt_closed_ibp"] = r.dH_dt_closed_ibp;
  j["dH_dt_printed"] = r.dH_dt_printed;
  j["dH_dt_printed_ibp"] = r.dH_dt_printed_ibp;
  j["dH_dt_closed_arc_length"] = r.dH_dt_closed_true;
  j["dH_dt_fd_arc_length"] = r.dH_dt_fd_true;
  j["dlambda_dt_closed"] = r.dlambda_dt_closed;
  j["dlambda_dt_fd"] = r.dlambda_dt_fd;
  j["lambda_term"] = r.lambda_term;
  j["grouped"] = array4(r.grouped);
  j["boundary"] = boundary_json(r.boundary);
  j["boundary_printed"] = boundary_json(r.boundary_printed);
  j["fd_step"] = r.fd_step;
  j["window"] = r.window;
  j["panels"] = r.panels;
  Csv block({"s", "mu", "integrand", "euler_lagrange"});
  for (const IntegrandSample& x : r.samples) block.row({x.s, x.mu, x.integrand, x.euler_lagrange});
  j["integrand_csv"] = block.str();
  return out::dump(j);
}

ELOptions el_options(const Settings& st, ELOptions o = {}) {
  if (st.grid) o.grid = *st.grid;
  if (st.tol_residual) o.tol_residual = *st.tol_residual;
  if (st.tol_bc) o.tol_bc = *st.tol_bc;
  if (o.grid < 2) throw SchemaError("--grid must be at least 2");
  return o;
}

Json el_json(const ELReport& r, bool samples) {
  Json j;
  j["case"] = r.sig.to_string();
  j["case_label"] = r.sig.label();
  j["branch"] = r.branch;
  j["verdict"] = to_string(r.verdict);
  j["residual_norm"] = r.residual_norm;
  j["residual_sup"] = r.residual_sup;
  j["normalization"] = r.normalization;
  j["bc"] = array4(r.bc);
  j["second_derivative_coeff"] = pair(r.second_derivative_coeff[0], r.second_derivative_coeff[1]);
  j["tolerances"] = {{"grid", r.options.grid},
                     {"residual", r.options.tol_residual},
                     {"bc", r.options.tol_bc}};
  j["note"] = r.note;
  if (samples) {
    Json a = Json::array();
    for (const ResidualSample& x : r.samples)
      a.push_back({{"s", x.s}, {"residual", x.residual}, {"f", x.f}, {"kappa_g", x.kappa_g},
                   {"kappa_n", x.kappa_n}, {"tau_g", x.tau_g}});
    j["samples"] = std::move(a);
  }
  return j;
}

std::string residual_csv(const ELReport& r) {
  Csv csv({"s", "residual", "f", "kappa_g", "kappa_n", "tau_g"});
  for (const ResidualSample& x : r.samples)
    csv.row({x.s, x.residual, x.f, x.kappa_g, x.kappa_n, x.tau_g});
  return csv.str();
}

std::string check_el(const Settings& st) {
  const scene::Scene sc = scene::Scene::load(st.scene);
  const auto c = sc.curve(st.curve);
  const ELReport r = classify(*c, el_options(st));
  if (st.format == "csv") return residual_csv(r);
  Json j;
  j["curve"] = st.curve;
  j.update(el_json(r, true));
  return out::dump(j);
}

std::string minimize(const Settings& st) {
  const scene::Scene sc = scene::Scene::load(st.scene);
  const scene::ExperimentSpec& e = sc.experiment(st.experiment);
  const DiscreteCurve init = discretize(e.patch, Expr::parse(e.u, {"s"}), Expr::parse(e.v, {"s"}),
                                        e.length, e.discretization);
  const MinimizeResult r = minimize_H(init, e.options);
  const ELReport el = classify(*r.curve.surface_curve(), el_options(st, e.check));

  Csv log({"iteration", "outer", "stage", "H", "weight", "objective", "violation"});
  for (const MinimizeLogRow& x : r.log)
    log.row({std::to_string(x.iteration), std::to_string(x.outer), std::to_string(x.stage)},
            {x.H, x.weight, x.objective, x.violation});
  if (!st.log_path.empty()) Output::write_file(st.log_path, log.str());
  if (st.format == "csv") return log.str();

  Json j;
  j["experiment"] = e.name;
  j["status"] = r.status;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["rejected_steps"] = r.rejected_steps;
  j["H_initial"] = r.H_initial;
  j["H"] = r.H_value;
  j["length"] = e.length;
  j["violation"] = r.violation;
  j["degree"] = r.curve.degree;
  j["N"] = r.curve.N();
  j["start"] = pair(r.curve.start()[0], r.curve.start()[1]);
  j["direction"] = pair(r.curve.direction()[0], r.curve.direction()[1]);
  Json nodes = Json::array();
  for (const Point2& p : r.curve.nodes) nodes.push_back(pair(p[0], p[1]));
  j["nodes"] = std::move(nodes);
  Json levels = Json::array();
  for (const BSplinePath& b : r.curve.levels) {
    Json ctrl = Json::array();
    for (const Point2& p : b.control()) ctrl.push_back(pair(p[0], p[1]));
    levels.push_back({{"spans", b.spans()}, {"breakpoints", b.breakpoints()}, {"control", ctrl}});
  }
  j["levels"] = std::move(levels);
  j["check"] = el_json(el, false);
  return out::dump(j);
}

std::string jets_selftest(const Settings& st) {
  const scene::Scene sc = scene::Scene::load(st.scene);
  const auto c = sc.curve(st.curve);
  const VariationSpec v = [&] {
    if (!st.variation.empty()) return sc.variation(st.variation, c->length());
    BumpParams p;
    p.length = c->length();
    return make_bump(p, "default");
  }();
  const int n = st.grid.value_or(9);
  if (n < 1) throw SchemaError("--grid must be positive");
  struct Row {
    double sigma;
    std::string quantity, component;
    double jet, corrected, printed;
  };
  std::vector<Row> rows;
  double worst_c = 0.0, worst_p = 0.0;
  auto rel = [](double a, double ref) { return std::fabs(a - ref) / std::max(1.0, std::fabs(ref)); };
  for (int i = 0; i < n; ++i) {
    const double s = n == 1 ? 0.5 * c->length() : c->length() * i / (n - 1);
    const DarbouxData d = darboux_frame(*c, s, 4);
    const auto mu = mu_derivatives(v, s);
    const ClosedFormJets J = jet_partials(*c, v, s, d);
    const ClosedFormJets C = closed_form_jets(d, mu, FormulaVariant::Corrected);
    const ClosedFormJets P = closed_form_jets(d, mu, FormulaVariant::Printed);
    const std::pair<const char*, FrameComponents ClosedFormJets::*> q[] = {
        {"b_ss", &ClosedFormJets::b_ss},   {"b_ts", &ClosedFormJets::b_ts},
        {"b_sss", &ClosedFormJets::b_sss}, {"b_tss", &ClosedFormJets::b_tss},
        {"b_tsss", &ClosedFormJets::b_tsss}};
    for (const auto& [name, m] : q) {
      const FrameComponents &a = J.*m, &b = C.*m, &p = P.*m;
      const double FrameComponents::*comp[] = {&FrameComponents::T, &FrameComponents::Q,
                                               &FrameComponents::n};
      const char* label[] = {"T", "Q", "n"};
      for (int k = 0; k < 3; ++k) {
        rows.push_back({s, name, label[k], a.*comp[k], b.*comp[k], p.*comp[k]});
        worst_c = std::max(worst_c, rel(b.*comp[k], a.*comp[k]));
        worst_p = std::max(worst_p, rel(p.*comp[k], a.*comp[k]));
      }
    }
  }
  if (st.format == "json") {
    Json j;
    j["curve"] = st.curve;
    j["variation"] = v.name;
    j["max_error_corrected"] = worst_c;
    j["max_error_printed"] = worst_p;
    Json a = Json::array();
    for (const Row& r : rows)
      a.push_back({{"sigma", r.sigma}, {"quantity", r.quantity}, {"component", r.component},
                   {"jet", r.jet}, {"corrected", r.corrected}, {"printed", r.printed},
                   {"error_corrected", rel(r.corrected, r.jet)},
                   {"error_printed", rel(r.printed, r.jet)}});
    j["rows"] = std::move(a);
    return out::dump(j);
  }
  Csv csv({"sigma", "quantity", "component", "jet", "corrected", "printed", "error_corrected",
           "error_printed"});
  for (const Row& r : rows)
    csv.row({out::num(r.sigma), r.quantity, r.component},
            {r.jet, r.corrected, r.printed, rel(r.corrected, r.jet), rel(r.printed, r.jet)});
  return csv.str();
}

std::string catalog_list(const Settings& st) {
  std::vector<SurfacePatch> all;
  for (const std::string& n : catalog::names()) all.push_back(catalog::by_name(n));
  if (st.format == "json") {
    Json a = Json::array();
    for (const SurfacePatch& p : all) {
      const Domain& d = p.domain();
      a.push_back({{"name", p.name()},
                   {"type", to_string(p.type())},
                   {"x0", p.component(0).to_string()},
                   {"x1", p.component(1).to_string()},
                   {"x2", p.component(2).to_string()},
                   {"domain", {d.u_min, d.u_max, d.v_min, d.v_max}}});
    }
    return out::dump(a);
  }
  Csv csv({"name", "type", "x0", "x1", "x2", "u_min", "u_max", "v_min", "v_max"});
  for (const SurfacePatch& p : all) {
    const Domain& d = p.domain();
    csv.row({p.name(), to_string(p.type()), p.component(0).to_string(), p.component(1).to_string(),
             p.component(2).to_string()},
            {d.u_min, d.u_max, d.v_min, d.v_max});
  }
  return csv.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Total squared torsion of surface curves in Minkowski 3-space"};
  app.name("elastica");
  app.require_subcommand(1);
  Settings st;
  std::function<std::string(const Settings&)> command;

  // Registers --out and --format and selects the command once parsed.
  auto common = [&](CLI::App* sub, const char* default_format,
                    std::string (*fn)(const Settings&)) {
    sub->add_option("--out", st.out_path, "Write the report to a file instead of stdout");
    sub->add_option("--format", st.format, "Report format (default " + std::string(default_format) + ")")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->final_callback([sub, &st, &command, default_format, fn] {
      if (sub->count("--format") == 0) st.format = default_format;
      command = fn;
    });
  };
  auto grid = [&](CLI::App* sub, const char* what) {
    sub->add_option_function<int>("--grid", [&](int g) { st.grid = g; }, what);
  };
  auto tolerances = [&](CLI::App* sub) {
    sub->add_option_function<double>("--tol-residual", [&](double x) { st.tol_residual = x; },
                                     "Tolerance on the normalized residual");
    sub->add_option_function<double>("--tol-bc", [&](double x) { st.tol_bc = x; },
                                     "Tolerance on the boundary conditions");
  };

  CLI::App* inv = app.add_subcommand("invariants", "CSV of s, kappa_g, kappa_n, tau_g, kappa, tau, f");
  inv->add_option("scene", st.scene)->required();
  inv->add_option("curve", st.curve)->required();
  grid(inv, "Number of uniform s samples (default 257)");
  common(inv, "csv", invariants);

  CLI::App* fun = app.add_subcommand("functional", "Total squared torsion H");
  fun->add_option("scene", st.scene)->required();
  fun->add_option("curve", st.curve)->required();
  common(fun, "json", functional);

  CLI::App* var = app.add_subcommand("vary", "Closed-form against finite-difference first variation");
  var->add_option("scene", st.scene)->required();
  var->add_option("curve", st.curve)->required();
  var->add_option("variation", st.variation)->required();
  var->add_option("--fd-step", st.fd_step, "Finite-difference step in t")->check(CLI::PositiveNumber);
  var->add_option("--panels", st.panels, "Initial Gauss-Legendre panel count")
      ->check(CLI::PositiveNumber);
  grid(var, "Number of integrand samples (default 33)");
  common(var, "json", vary);

  CLI::App* chk = app.add_subcommand("check-el", "Euler-Lagrange residual, boundary conditions, verdict");
  chk->add_option("scene", st.scene)->required();
  chk->add_option("curve", st.curve)->required();
  grid(chk, "Number of uniform s samples (default 257)");
  tolerances(chk);
  common(chk, "json", check_el);

  CLI::App* min = app.add_subcommand("minimize", "Direct minimization of H at fixed length");
  min->add_option("scene", st.scene)->required();
  min->add_option("experiment", st.experiment)->required();
  min->add_option("--log", st.log_path, "Also write the run log CSV to this file");
  grid(min, "Grid of the final Euler-Lagrange check");
  tolerances(min);
  common(min, "json", minimize);

  CLI::App* jet = app.add_subcommand("jets-selftest", "Frame expansions of the variation against jets");
  jet->add_option("scene", st.scene)->required();
  jet->add_option("curve", st.curve)->required();
  jet->add_option("variation", st.variation);
  grid(jet, "Number of sigma samples (default 9)");
  common(jet, "csv", jets_selftest);

  CLI::App* cat = app.add_subcommand("catalog", "Built-in surfaces");
  common(cat, "csv", catalog_list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string text = command(st);
    Output(st, out).write(text);
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace elastica::cli
