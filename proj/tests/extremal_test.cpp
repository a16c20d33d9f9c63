#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "elastica/el_conditions.hpp"
#include "elastica/extremal.hpp"
#include "elastica/variation.hpp"

using namespace elastica;

namespace {

std::shared_ptr<const SurfacePatch> patch(const std::string& name) {
  return std::make_shared<const SurfacePatch>(catalog::by_name(name));
}

DiscreteCurve small(const std::string& surface, const std::string& u, const std::string& v,
                    double l, int N = 40) {
  DiscretizeOptions d;
  d.N = N;
  d.schedule = {10, 20};
  return discretize(patch(surface), Expr::parse(u, {"s"}), Expr::parse(v, {"s"}), l, d);
}

void check_log(const MinimizeResult& r) {
  REQUIRE_FALSE(r.log.empty());
  for (std::size_t i = 1; i < r.log.size(); ++i) {
    const MinimizeLogRow &a = r.log[i - 1], &b = r.log[i];
    if (a.weight != b.weight || a.stage != b.stage) continue;
    CHECK(b.objective <= a.objective);
  }
}

}  // namespace

TEST_CASE("nested breakpoints") {
  const std::vector<double> fine = nested_breakpoints(40, 40);
  CHECK(fine.size() == 41);
  for (int spans : {10, 20, 25}) {
    const std::vector<double> b = nested_breakpoints(40, spans);
    CHECK(b.front() == 0.0);
    CHECK(b.back() == 1.0);
    for (double x : b) CHECK(std::binary_search(fine.begin(), fine.end(), x));
  }
}

TEST_CASE("discretization reproduces the analytic arc") {
  const DiscreteCurve c = small("lorentzian_cylinder", "sqrt(2)*s", "s", 1.0);
  CHECK(c.N() == 40);
  CHECK(std::fabs(c.start()[0]) < 1e-14);
  CHECK(std::fabs(c.start()[1]) < 1e-14);
  CHECK(std::fabs(c.direction()[0] - std::sqrt(2.0 / 3.0)) < 1e-12);
  CHECK(std::fabs(c.direction()[1] - std::sqrt(1.0 / 3.0)) < 1e-12);
  const DiscreteFunctional F = discrete_functional(c);
  CHECK(std::fabs(F.L - 1.0) < 1e-8);
  // tau^2 = 2 along the helix
  CHECK(std::fabs(F.H - 2.0) < 1e-6);
  CHECK(std::fabs(functional_H(*c.surface_curve()) - F.H) < 1e-6);
}

TEST_CASE("a perturbed line relaxes to a planar extremal") {
  const DiscreteCurve init = small("timelike_plane", "s", "0.05*s^2 + 0.02*s^3", 1.0);
  MinimizeOptions o;
  o.penalty = 10.0;
  o.outer_loops = 6;
  o.max_sweeps = 400;
  const MinimizeResult r = minimize_H(init, o);
  CHECK(r.converged);
  CHECK(r.status == "converged");
  CHECK(r.H_value <= r.H_initial + 1e-15);
  CHECK(r.H_value < 1e-12);
  CHECK(r.violation < 1e-6);
  const DiscreteFunctional F = discrete_functional(r.curve);
  CHECK(std::fabs(F.L - 1.0) < 1e-6);
  CHECK(std::fabs(r.curve.start()[0] - init.start()[0]) < 1e-10);
  CHECK(std::fabs(r.curve.start()[1] - init.start()[1]) < 1e-10);
  CHECK(std::fabs(r.curve.direction()[0] - init.direction()[0]) < 1e-10);
  CHECK(std::fabs(r.curve.direction()[1] - init.direction()[1]) < 1e-10);
  check_log(r);

  ELOptions eo;
  eo.tol_residual = 1e-3;
  eo.tol_bc = 1e-3;
  CHECK(classify(*r.curve.surface_curve(), eo).verdict == Verdict::Extremal);
}

TEST_CASE("minimization lowers H on the Lorentzian cylinder") {
  const DiscreteCurve init = small("lorentzian_cylinder", "2*s", "s", 1.0, 20);
  MinimizeOptions o;
  o.penalty = 10.0;
  o.outer_loops = 3;
  o.max_sweeps = 150;
  const MinimizeResult r = minimize_H(init, o);
  CHECK(r.H_value < r.H_initial);
  CHECK(std::fabs(r.curve.start()[0] - init.start()[0]) < 1e-10);
  CHECK(std::fabs(r.curve.direction()[1] - init.direction()[1]) < 1e-10);
  check_log(r);
}

TEST_CASE("coordinate descent keeps the objective monotone") {
  const DiscreteCurve init = small("timelike_plane", "s", "0.05*s^2 + 0.02*s^3", 1.0, 12);
  MinimizeOptions o;
  o.method = MinimizeMethod::Coordinate;
  o.penalty = 10.0;
  o.outer_loops = 2;
  o.max_sweeps = 30;
  const MinimizeResult r = minimize_H(init, o);
  CHECK(r.H_value <= r.H_initial + 1e-15);
  CHECK(std::fabs(r.curve.start()[1] - init.start()[1]) < 1e-10);
  CHECK(std::fabs(r.curve.direction()[0] - init.direction()[0]) < 1e-10);
  check_log(r);
}
