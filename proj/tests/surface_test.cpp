#include <doctest.h>

#include <cmath>
#include <random>

#include "elastica/errors.hpp"
#include "elastica/surface.hpp"

using namespace elastica;

namespace {

double dist(const MVec3& a, const MVec3& b) { return euclidean_norm(a - b); }

}  // namespace

TEST_CASE("position jets on catalog patches") {
  const Jet2 du = Jet2::seed(0.3, 1.0, 0.0, 4, 0), dv = Jet2::seed(0.7, 0.0, 0.0, 4, 0);
  const JetVec3 p = catalog::spacelike_plane().position_jet(du, dv);
  CHECK(dist(partial(p, 0), {0, 0.3, 0.7}) == 0.0);
  CHECK(dist(partial(p, 1), {0, 1, 0}) == 0.0);

  const SurfacePatch cyl = catalog::lorentzian_cylinder();
  CHECK(dist(cyl.position(0, 0), {0, 1, 0}) == 0.0);
  const JetVec3 cv = cyl.position_jet(Jet2::seed(0, 0, 0, 4, 0), Jet2::seed(0, 1, 0, 4, 0));
  CHECK(dist(partial(cv, 1), {0, 0, 1}) < 1e-15);

  const JetVec3 ds =
      catalog::de_sitter().position_jet(Jet2::seed(0, 1, 0, 4, 0), Jet2::seed(0, 0, 0, 4, 0));
  CHECK(dist(partial(ds, 0), {0, 1, 0}) < 1e-15);
  CHECK(dist(partial(ds, 1), {1, 0, 0}) < 1e-15);
  // d2/du2 of (sinh u, cosh u, 0) at 0
  CHECK(dist(partial(ds, 2), {0, 1, 0}) < 1e-15);
}

TEST_CASE("unit normals and causal types") {
  const UnitNormal pn = catalog::spacelike_plane().unit_normal(0.2, -0.4);
  CHECK(pn.eps3 == -1);
  CHECK(dist(pn.n, {1, 0, 0}) < 1e-15);

  const UnitNormal cn = catalog::lorentzian_cylinder().unit_normal(0.5, 0.0);
  CHECK(cn.eps3 == 1);
  CHECK(dist(cn.n, {0, 1, 0}) < 1e-15);

  const SurfacePatch ds = catalog::de_sitter();
  const UnitNormal dn = ds.unit_normal(0, 0);
  CHECK(dn.eps3 == 1);
  CHECK(std::fabs(std::fabs(dn.n.x1) - 1.0) < 1e-15);
  // <x, x> = 1 makes the position itself a unit normal
  const UnitNormal dn2 = ds.unit_normal(0.4, 1.1);
  const MVec3 x = ds.position(0.4, 1.1);
  CHECK(std::min(dist(dn2.n, x), dist(dn2.n, -x)) < 1e-14);

  CHECK(catalog::spacelike_plane().type() == SurfaceType::Spacelike);
  CHECK(catalog::hyperbolic_sheet().type() == SurfaceType::Spacelike);
  CHECK(catalog::hyperbolic_cylinder().type() == SurfaceType::Spacelike);
  CHECK(catalog::lorentzian_cylinder().type() == SurfaceType::Timelike);
  CHECK(catalog::timelike_plane().type() == SurfaceType::Timelike);
  CHECK(catalog::de_sitter().type() == SurfaceType::Timelike);
}

TEST_CASE("normals are orthogonal to the tangent plane") {
  std::mt19937_64 rng(29);
  for (const std::string& name : catalog::names()) {
    const SurfacePatch p = catalog::by_name(name);
    const Domain& d = p.domain();
    std::uniform_real_distribution<double> U(d.u_min, d.u_max), V(d.v_min, d.v_max);
    for (int i = 0; i < 200; ++i) {
      const double u = U(rng), v = V(rng);
      const auto [xu, xv] = p.tangents(u, v);
      const UnitNormal n = p.unit_normal(u, v);
      CAPTURE(name);
      CHECK(std::fabs(inner(n.n, xu)) < 1e-10 * (1 + euclidean_norm(xu)));
      CHECK(std::fabs(inner(n.n, xv)) < 1e-10 * (1 + euclidean_norm(xv)));
      // components grow like cosh u on the hyperbolic patches
      const double size = std::max(1.0, euclidean_norm(n.n) * euclidean_norm(n.n));
      CHECK(std::fabs(inner(n.n, n.n) - n.eps3) < 1e-12 * size);
      CHECK(n.eps3 * n.eps3 == 1);
    }
  }
}

TEST_CASE("swapping parameters flips the normal but keeps the type") {
  for (const std::string& name : catalog::names()) {
    const SurfacePatch p = catalog::by_name(name);
    const Domain& d = p.domain();
    auto swap = [](const std::string& s) {
      std::string r;
      for (char c : s) r += c == 'u' ? 'v' : (c == 'v' ? 'u' : c);
      return r;
    };
    const SurfacePatch q = SurfacePatch::from_strings(
        name + "_swapped", swap(p.component(0).to_string()), swap(p.component(1).to_string()),
        swap(p.component(2).to_string()), {d.v_min, d.v_max, d.u_min, d.u_max});
    CAPTURE(name);
    CHECK(q.type() == p.type());
    const double u = 0.5 * (d.u_min + d.u_max) + 0.1, v = 0.5 * (d.v_min + d.v_max) - 0.2;
    CHECK(dist(q.unit_normal(v, u).n, -p.unit_normal(u, v).n) < 1e-14);
  }
}

TEST_CASE("patch validation errors") {
  // graph (u, v, u^2): the normal changes causal type at u = 1/2
  CHECK_THROWS_AS(SurfacePatch::from_strings("mixed", "u", "v", "u^2", {0, 1, 0, 1}),
                  MixedCausalType);
  // tangent plane spanned by a null vector and a spacelike one
  CHECK_THROWS_AS(SurfacePatch::from_strings("null", "u", "u", "v", {0, 1, 0, 1}),
                  DegenerateNormal);
  CHECK_THROWS_AS(SurfacePatch::from_strings("bad", "u", "w", "v", {0, 1, 0, 1}), UnknownVariable);
  CHECK_THROWS_AS(catalog::by_name("torus"), InputError);
  CHECK_THROWS_AS(catalog::lorentzian_cylinder().position(0.0, 1e6), OutOfDomain);
}
