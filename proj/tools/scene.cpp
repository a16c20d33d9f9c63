#include "scene.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "elastica/errors.hpp"

namespace elastica::scene {

using nlohmann::json;

struct Parser {
  Scene& scene;

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw SchemaError(where + ": " + what);
  }

  static void only(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) fail(where, "unknown field '" + it.key() + "'");
    }
  }

  static const json& need(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) fail(where, "missing field '" + std::string(key) + "'");
    return j.at(key);
  }

  static std::string text(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
  }

  static double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(where, "expected a finite number");
    return x;
  }

  static int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<int>();
  }

  static double positive(const json& j, const std::string& where) {
    const double x = number(j, where);
    if (!(x > 0.0)) fail(where, "must be positive");
    return x;
  }

  template <class T, class F>
  static void opt(const json& j, const char* key, const std::string& where, T& out, F&& read) {
    if (j.contains(key)) out = read(j.at(key), where + "." + key);
  }

  static std::string name_of(const json& j, const std::string& where) {
    const std::string n = text(need(j, where, "name"), where + ".name");
    if (n.empty()) fail(where + ".name", "must be nonempty");
    return n;
  }

  // Checks the DSL early so that errors carry the scene location.
  static std::string expression(const json& j, const std::string& where,
                                std::vector<std::string> vars) {
    const std::string src = text(j, where);
    try {
      Expr::parse(src, std::move(vars));
    } catch (const InputError& e) {
      fail(where, e.what());
    }
    return src;
  }

  std::shared_ptr<const SurfacePatch> inline_patch(const json& j, const std::string& where) {
    if (j.contains("catalog")) {
      only(j, where, {"name", "catalog"});
      const std::string c = text(j.at("catalog"), where + ".catalog");
      try {
        return std::make_shared<const SurfacePatch>(catalog::by_name(c));
      } catch (const InputError& e) {
        fail(where + ".catalog", e.what());
      }
    }
    only(j, where, {"name", "x0", "x1", "x2", "domain"});
    const std::string name = j.contains("name") ? text(j.at("name"), where + ".name") : "inline";
    std::string x[3];
    for (int i = 0; i < 3; ++i) {
      const std::string key = "x" + std::to_string(i);
      x[i] = expression(need(j, where, key.c_str()), where + "." + key, {"u", "v"});
    }
    const json& d = need(j, where, "domain");
    if (!d.is_array() || d.size() != 4) fail(where + ".domain", "expected [u_min, u_max, v_min, v_max]");
    double b[4];
    for (int i = 0; i < 4; ++i) b[i] = number(d[i], where + ".domain[" + std::to_string(i) + "]");
    if (!(b[0] < b[1]) || !(b[2] < b[3])) fail(where + ".domain", "bounds must increase");
    return std::make_shared<const SurfacePatch>(SurfacePatch::from_strings(
        name, x[0], x[1], x[2], Domain{b[0], b[1], b[2], b[3]}));
  }

  std::shared_ptr<const SurfacePatch> patch_ref(const json& j, const std::string& where) {
    if (j.is_object()) return inline_patch(j, where);
    const std::string n = text(j, where);
    if (auto it = scene.surfaces_.find(n); it != scene.surfaces_.end()) return it->second;
    for (const std::string& c : catalog::names())
      if (c == n) return std::make_shared<const SurfacePatch>(catalog::by_name(c));
    fail(where, "unknown surface '" + n + "'");
  }

  static const json& section(const json& root, const char* key) {
    static const json empty = json::array();
    if (!root.contains(key)) return empty;
    const json& s = root.at(key);
    if (!s.is_array()) fail(key, "expected an array");
    return s;
  }

  void surfaces(const json& root) {
    const json& s = section(root, "surfaces");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string where = "surfaces[" + std::to_string(i) + "]";
      const std::string n = name_of(s[i], where);
      if (scene.surfaces_.count(n)) fail(where + ".name", "duplicate surface '" + n + "'");
      scene.surfaces_[n] = inline_patch(s[i], where);
    }
  }

  void curves(const json& root) {
    const json& s = section(root, "curves");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string where = "curves[" + std::to_string(i) + "]";
      only(s[i], where, {"name", "patch", "u", "v", "length"});
      CurveSpec c;
      c.name = name_of(s[i], where);
      if (!seen.insert(c.name).second) fail(where + ".name", "duplicate curve '" + c.name + "'");
      c.patch = patch_ref(need(s[i], where, "patch"), where + ".patch");
      c.u = expression(need(s[i], where, "u"), where + ".u", {"s"});
      c.v = expression(need(s[i], where, "v"), where + ".v", {"s"});
      c.length = positive(need(s[i], where, "length"), where + ".length");
      scene.curves_.push_back(std::move(c));
    }
  }

  void variations(const json& root) {
    const json& s = section(root, "variations");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string where = "variations[" + std::to_string(i) + "]";
      const json& j = s[i];
      only(j, where, {"name", "kind", "power", "mu", "scale", "margin", "length"});
      VariationEntry e;
      e.name = name_of(j, where);
      if (!seen.insert(e.name).second) fail(where + ".name", "duplicate variation '" + e.name + "'");
      const std::string kind = text(need(j, where, "kind"), where + ".kind");
      if (kind == "polynomial") {
        e.params.kind = BumpKind::Polynomial;
        opt(j, "power", where, e.params.power, integer);
      } else if (kind == "sine_squared") {
        e.params.kind = BumpKind::SineSquared;
      } else if (kind == "custom") {
        e.params.kind = BumpKind::Custom;
        e.params.expression = expression(need(j, where, "mu"), where + ".mu", {"s"});
      } else {
        fail(where + ".kind", "expected polynomial, sine_squared or custom");
      }
      if (kind != "polynomial" && j.contains("power")) fail(where + ".power", "only for polynomial bumps");
      if (kind != "custom" && j.contains("mu")) fail(where + ".mu", "only for custom bumps");
      opt(j, "scale", where, e.params.scale, number);
      opt(j, "margin", where, e.params.margin, positive);
      if (j.contains("length")) {
        e.params.length = positive(j.at("length"), where + ".length");
        e.has_length = true;
      }
      scene.variations_.push_back(std::move(e));
    }
  }

  void experiments(const json& root) {
    const json& s = section(root, "experiments");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string where = "experiments[" + std::to_string(i) + "]";
      const json& j = s[i];
      only(j, where,
           {"name", "command", "initial", "length", "N", "degree", "levels", "samples_per_node",
            "penalty", "max_iterations", "max_iterations_per_stage", "rel_tol", "violation_tol",
            "quadrature", "method", "speed_regularization", "check"});
      ExperimentSpec e;
      e.name = name_of(j, where);
      if (!seen.insert(e.name).second) fail(where + ".name", "duplicate experiment '" + e.name + "'");
      e.command = text(need(j, where, "command"), where + ".command");
      if (e.command != "minimize") fail(where + ".command", "expected minimize");

      const std::string iw = where + ".initial";
      const json& init = need(j, where, "initial");
      if (init.is_string()) {
        const CurveSpec& c = find_curve(text(init, iw), iw);
        e.patch = c.patch;
        e.u = c.u;
        e.v = c.v;
        e.length = c.length;
      } else {
        only(init, iw, {"patch", "u", "v"});
        e.patch = patch_ref(need(init, iw, "patch"), iw + ".patch");
        e.u = expression(need(init, iw, "u"), iw + ".u", {"s"});
        e.v = expression(need(init, iw, "v"), iw + ".v", {"s"});
      }
      opt(j, "length", where, e.length, positive);
      if (!(e.length > 0.0)) fail(where + ".length", "required unless initial names a curve");

      DiscretizeOptions& d = e.discretization;
      opt(j, "N", where, d.N, integer);
      opt(j, "degree", where, d.degree, integer);
      opt(j, "samples_per_node", where, d.samples_per_node, integer);
      if (j.contains("levels")) {
        const json& l = j.at("levels");
        if (!l.is_array()) fail(where + ".levels", "expected an array of node counts");
        d.schedule.clear();
        for (std::size_t k = 0; k < l.size(); ++k)
          d.schedule.push_back(integer(l[k], where + ".levels[" + std::to_string(k) + "]"));
      }
      if (d.degree < 5 || d.degree > 7) fail(where + ".degree", "must lie in 5..7");
      if (d.N < d.degree) fail(where + ".N", "must be at least the spline degree");
      if (d.samples_per_node < 1) fail(where + ".samples_per_node", "must be positive");

      MinimizeOptions& o = e.options;
      if (j.contains("penalty")) {
        const std::string pw = where + ".penalty";
        const json& p = j.at("penalty");
        only(p, pw, {"initial", "growth", "outer_loops"});
        opt(p, "initial", pw, o.penalty, positive);
        opt(p, "growth", pw, o.penalty_growth, positive);
        opt(p, "outer_loops", pw, o.outer_loops, integer);
        if (o.outer_loops < 1) fail(pw + ".outer_loops", "must be positive");
      }
      opt(j, "max_iterations", where, o.max_sweeps, integer);
      opt(j, "max_iterations_per_stage", where, o.max_sweeps_per_stage, integer);
      opt(j, "rel_tol", where, o.rel_tol, positive);
      opt(j, "violation_tol", where, o.violation_tol, positive);
      opt(j, "quadrature", where, o.quadrature, integer);
      opt(j, "speed_regularization", where, o.speed_regularization, number);
      if (o.max_sweeps < 1 || o.max_sweeps_per_stage < 1)
        fail(where, "iteration caps must be positive");
      if (o.quadrature < 2 || o.quadrature > 32) fail(where + ".quadrature", "must lie in 2..32");
      if (o.speed_regularization < 0.0) fail(where + ".speed_regularization", "must be nonnegative");
      if (j.contains("method")) {
        const std::string m = text(j.at("method"), where + ".method");
        if (m == "levenberg_marquardt") o.method = MinimizeMethod::LevenbergMarquardt;
        else if (m == "coordinate") o.method = MinimizeMethod::Coordinate;
        else fail(where + ".method", "expected levenberg_marquardt or coordinate");
      }

      e.check.tol_residual = 1e-3;
      e.check.tol_bc = 1e-3;
      if (j.contains("check")) {
        const std::string cw = where + ".check";
        const json& c = j.at("check");
        only(c, cw, {"grid", "tol_residual", "tol_bc"});
        opt(c, "grid", cw, e.check.grid, integer);
        opt(c, "tol_residual", cw, e.check.tol_residual, positive);
        opt(c, "tol_bc", cw, e.check.tol_bc, positive);
        if (e.check.grid < 2) fail(cw + ".grid", "must be at least 2");
      }
      scene.experiments_.push_back(std::move(e));
    }
  }

  const CurveSpec& find_curve(const std::string& n, const std::string& where) const {
    for (const CurveSpec& c : scene.curves_)
      if (c.name == n) return c;
    fail(where, "unknown curve '" + n + "'");
  }

  void run(const json& root) {
    only(root, "scene", {"version", "surfaces", "curves", "variations", "experiments"});
    const std::string v = text(need(root, "scene", "version"), "version");
    if (v != kVersion) fail("version", "unsupported scene version '" + v + "'");
    surfaces(root);
    curves(root);
    variations(root);
    experiments(root);
  }
};

Scene Scene::parse(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scene is not valid JSON: ") + e.what());
  }
  Scene s;
  Parser{s}.run(root);
  return s;
}

Scene Scene::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read scene file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const CurveSpec& Scene::curve_spec(const std::string& name) const {
  for (const CurveSpec& c : curves_)
    if (c.name == name) return c;
  throw SchemaError("unknown curve '" + name + "'");
}

std::shared_ptr<const SurfaceCurve> Scene::curve(const std::string& name) const {
  const CurveSpec& c = curve_spec(name);
  return std::make_shared<const SurfaceCurve>(c.patch, Expr::parse(c.u, {"s"}),
                                              Expr::parse(c.v, {"s"}), c.length);
}

VariationSpec Scene::variation(const std::string& name, double curve_length) const {
  for (const VariationEntry& e : variations_) {
    if (e.name != name) continue;
    BumpParams p = e.params;
    if (!e.has_length) p.length = curve_length;
    return make_bump(p, e.name);
  }
  throw SchemaError("unknown variation '" + name + "'");
}

const ExperimentSpec& Scene::experiment(const std::string& name) const {
  for (const ExperimentSpec& e : experiments_)
    if (e.name == name) return e;
  throw SchemaError("unknown experiment '" + name + "'");
}

}  // namespace elastica::scene
