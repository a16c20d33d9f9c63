#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "elastica/el_conditions.hpp"
#include "elastica/errors.hpp"
#include "elastica/quadrature.hpp"
#include "elastica/variation.hpp"
#include "support/fixtures.hpp"

using namespace elastica;

namespace {

std::shared_ptr<const SurfaceCurve> make(const std::string& surface, const std::string& u,
                                         const std::string& v, double l = 1.0) {
  auto p = std::make_shared<const SurfacePatch>(catalog::by_name(surface));
  return std::make_shared<const SurfaceCurve>(p, Expr::parse(u, {"s"}), Expr::parse(v, {"s"}), l);
}

// int_0^l mu E ds on Gauss-Legendre nodes
double integrate_residual(const SurfaceCurve& c, const VariationSpec& mu, int panels = 16) {
  const GaussRule& g = gauss_legendre(16);
  const double h = c.length() / panels;
  std::vector<double> s, w;
  for (int p = 0; p < panels; ++p)
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      s.push_back(h * (p + 0.5 * (g.nodes[k] + 1.0)));
      w.push_back(0.5 * h * g.weights[k]);
    }
  const std::vector<ResidualSample> r = el_residual(c, s);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += w[i] * mu_derivatives(mu, s[i])[0] * r[i].residual;
  return acc;
}

}  // namespace

TEST_CASE("trivial extremals") {
  for (const fixtures::Fixture& fx : fixtures::all()) {
    if (!fx.torsion_free) continue;
    CAPTURE(fx.name);
    const ELReport r = classify(*fx.curve());
    CHECK(r.verdict == Verdict::Extremal);
    CHECK(r.residual_norm < 1e-10);
    for (double b : r.bc) CHECK(std::fabs(b) < 1e-12);
    CHECK(r.sig == fx.sig);
    CHECK(r.samples.size() == 257);
  }
}

TEST_CASE("timelike helix violates the free-end condition") {
  auto c = make("lorentzian_cylinder", "sqrt(2)*s", "s");
  const ELReport r = classify(*c);
  CHECK(r.verdict == Verdict::NotExtremal);
  CHECK(r.residual_norm < 1e-10);
  CHECK(std::fabs(r.bc[2]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::fabs(r.bc[3]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.branch == "Q x n = +T");

  const auto bc = boundary_conditions(*c);
  CHECK(std::fabs(bc[2] - torsion_from_darboux(darboux_frame(*c, 1.0))) < 1e-14);
  CHECK(std::fabs(bc[3] - torsion_from_darboux(darboux_frame(*c, 0.0))) < 1e-14);
}

TEST_CASE("a curve crossing the singular locus is inconclusive") {
  const ELReport r = classify(*fixtures::indefinite().curve());
  CHECK(r.verdict == Verdict::Inconclusive);
  CHECK(r.note.find("changes sign") != std::string::npos);
  CHECK_THROWS_AS(torsion_from_darboux(darboux_frame(*make("spacelike_plane", "s", "0"), 0.5)),
                  IndefiniteDenominator);
}

TEST_CASE("integration by parts reassembles the first variation") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), freq(0.5, 3.0);
  for (const fixtures::Fixture& fx : fixtures::all()) {
    if (!fx.f_defined) continue;
    auto c = fx.curve();
    FirstVariationTable table(c);
    const ELReport rep = classify(*c);
    CAPTURE(fx.name);
    for (int i = 0; i < 10; ++i) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "s^2*(%.6f + %.6f*s + %.6f*sin(%.6f*s))", coef(rng), coef(rng),
                    coef(rng), freq(rng));
      BumpParams bp;
      bp.kind = BumpKind::Custom;
      bp.expression = buf;
      bp.length = c->length();
      const VariationSpec mu = make_bump(bp);
      const auto ml = mu_derivatives(mu, c->length()), m0 = mu_derivatives(mu, 0.0);
      const double raw = table.integrals(mu).total;
      const double parts = integrate_residual(*c, mu) + rep.bc[0] * ml[0] + rep.bc[1] * ml[1] +
                           rep.second_derivative_coeff[0] * ml[2] +
                           rep.second_derivative_coeff[1] * m0[2];
      CHECK(std::fabs(parts - raw) <= 1e-6 * std::max(1.0, std::fabs(raw)));
    }
  }
}

TEST_CASE("printed ODEs against the general form") {
  double r0_as_printed = 0.0, general_vs_derived = 0.0;
  for (const fixtures::Fixture& fx : fixtures::all()) {
    if (!fx.f_defined) continue;
    auto c = fx.curve();
    const double fl = boundary_conditions(*c)[2];
    CAPTURE(fx.name);
    for (double s : {0.15, 0.5, 0.85}) {
      const double g = printed_general_residual(*c, s, fl);
      const double e = el_residual(*c, {s})[0].residual;
      general_vs_derived = std::max(general_vs_derived, std::fabs(g - e) / std::max(1.0, std::fabs(e)));
      if (fx.sig == CaseSignature::spacelike_surface()) {
        CHECK(std::fabs(printed_spacelike_surface_residual(*c, s, fl, -2.0) - g) < 1e-10);
        r0_as_printed = std::max(
            r0_as_printed, std::fabs(printed_spacelike_surface_residual(*c, s, fl, -1.0) - g));
      } else if (fx.sig == CaseSignature::timelike_arc()) {
        CHECK(std::fabs(printed_timelike_arc_residual(*c, s, fl) - g) < 1e-10);
      }
    }
  }
  // a single kn tg' in the R0 bracket misses half of the term
  CHECK(r0_as_printed > 1.0);
  // the printed blocks are not the derivative of H, so neither is their ODE
  CHECK(general_vs_derived > 1.0);
}

TEST_CASE("verdict does not depend on the frame orientation") {
  // swapping the patch parameters reverses n, hence the sign choice in Q
  auto p = std::make_shared<const SurfacePatch>(catalog::lorentzian_cylinder());
  auto q = std::make_shared<const SurfacePatch>(
      SurfacePatch::from_strings("swapped", "v", "cos(u)", "sin(u)", {-10, 10, -5, 5}));
  const std::vector<std::pair<std::string, std::string>> curves = {
      {"sqrt(2)*s", "s"}, {"sinh(1.5*s)/1.5", "(cosh(1.5*s)-1)/1.5"}, {"s", "sqrt(2)*s"}};
  for (const auto& [u, v] : curves) {
    CAPTURE(u);
    const SurfaceCurve a(p, Expr::parse(u, {"s"}), Expr::parse(v, {"s"}), 1.0);
    const SurfaceCurve b(q, Expr::parse(v, {"s"}), Expr::parse(u, {"s"}), 1.0);
    const ELReport ra = classify(a), rb = classify(b);
    CHECK(ra.verdict == rb.verdict);
    CHECK(ra.sig == rb.sig);
    CHECK(rb.residual_sup == doctest::Approx(ra.residual_sup).epsilon(1e-10).scale(1.0));
    for (int k = 0; k < 4; ++k)
      CHECK(std::fabs(rb.bc[k]) == doctest::Approx(std::fabs(ra.bc[k])).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("grids and tolerances") {
  CHECK(uniform_grid(2.0, 5) == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  auto c = make("lorentzian_cylinder", "sinh(1.5*s)/1.5", "(cosh(1.5*s)-1)/1.5");
  ELOptions loose;
  loose.grid = 33;
  loose.tol_residual = 1e9;
  loose.tol_bc = 1e9;
  const ELReport r = classify(*c, loose);
  CHECK(r.samples.size() == 33);
  CHECK(r.verdict == Verdict::Extremal);
  CHECK(classify(*c).verdict == Verdict::NotExtremal);
}
