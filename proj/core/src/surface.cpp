#include "elastica/surface.hpp"

#include <cmath>
#include <cstdio>

#include "elastica/errors.hpp"

namespace elastica {

std::string to_string(SurfaceType t) {
  return t == SurfaceType::Spacelike ? "spacelike" : "timelike";
}

SurfacePatch::SurfacePatch(std::string name, Expr x0, Expr x1, Expr x2, Domain domain, int grid)
    : name_(std::move(name)), comps_{std::move(x0), std::move(x1), std::move(x2)},
      domain_(domain), type_(SurfaceType::Spacelike) {
  for (const auto& c : comps_) {
    const auto& vars = c.variables();
    if (vars.size() != 2 || vars[0] != "u" || vars[1] != "v")
      throw InputError("surface '" + name_ + "': components must be expressions in (u, v)");
  }
  if (!(domain_.u_min < domain_.u_max) || !(domain_.v_min < domain_.v_max))
    throw InputError("surface '" + name_ + "': empty domain");
  type_ = surface_causal_type(*this, grid);
}

SurfacePatch SurfacePatch::from_strings(std::string name, const std::string& x0,
                                        const std::string& x1, const std::string& x2,
                                        Domain domain) {
  const std::vector<std::string> uv{"u", "v"};
  return SurfacePatch(std::move(name), Expr::parse(x0, uv), Expr::parse(x1, uv),
                      Expr::parse(x2, uv), domain);
}

void SurfacePatch::check_domain(double u, double v) const {
  if (!domain_.contains(u, v)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "(u,v)=(%.12e,%.12e) outside domain of '%s'", u, v,
                  name_.c_str());
    throw OutOfDomain("surface evaluation", buf);
  }
}

JetVec3 SurfacePatch::position_jet(const Jet2& u, const Jet2& v) const {
  check_domain(u.value(), v.value());
  const Jet2 seeds[2] = {u, v};
  return {comps_[0].evaluate(std::span<const Jet2>(seeds)),
          comps_[1].evaluate(std::span<const Jet2>(seeds)),
          comps_[2].evaluate(std::span<const Jet2>(seeds))};
}

MVec3 SurfacePatch::position(double u, double v) const {
  check_domain(u, v);
  const double p[2] = {u, v};
  return {comps_[0].evaluate(std::span<const double>(p)),
          comps_[1].evaluate(std::span<const double>(p)),
          comps_[2].evaluate(std::span<const double>(p))};
}

std::pair<MVec3, MVec3> SurfacePatch::tangents(double u, double v) const {
  const JetVec3 du = position_jet(Jet2::seed(u, 1, 0, 1, 0), Jet2::constant(v, 1, 0));
  const JetVec3 dv = position_jet(Jet2::constant(u, 1, 0), Jet2::seed(v, 1, 0, 1, 0));
  return {partial(du, 1), partial(dv, 1)};
}

UnitNormal SurfacePatch::unit_normal(double u, double v) const {
  auto [xu, xv] = tangents(u, v);
  const MVec3 N = cross(xu, xv);
  const double q = inner(N, N);
  if (std::fabs(q) < kCausalTolerance) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "|<x_u x x_v, x_u x x_v>| = %.3e at (u,v)=(%.12e,%.12e)",
                  std::fabs(q), u, v);
    throw DegenerateNormal("unit_normal", buf);
  }
  return {N / std::sqrt(std::fabs(q)), sign_of(q)};
}

PatchJets SurfacePatch::along(const Jet2& u, const Jet2& v) const {
  // Seed u + t and v + t separately; the t-linear column is the partial.
  const JetVec3 a = position_jet(u.with_t(1.0), v.with_t(0.0));
  const JetVec3 b = position_jet(u.with_t(0.0), v.with_t(1.0));
  return {t_slice(a, 0), t_slice(a, 1), t_slice(b, 1)};
}

SurfaceType surface_causal_type(const SurfacePatch& p, int grid) {
  const Domain& d = p.domain();
  int sign = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double u = d.u_min + (d.u_max - d.u_min) * (grid == 1 ? 0.5 : double(i) / (grid - 1));
      const double v = d.v_min + (d.v_max - d.v_min) * (grid == 1 ? 0.5 : double(j) / (grid - 1));
      const int e = p.unit_normal(u, v).eps3;
      if (sign == 0) {
        sign = e;
      } else if (e != sign) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "normal changes causal character near (u,v)=(%.12e,%.12e)",
                      u, v);
        throw MixedCausalType("surface_causal_type on '" + p.name() + "'", buf);
      }
    }
  }
  return sign < 0 ? SurfaceType::Spacelike : SurfaceType::Timelike;
}

JetVec3 unit_normal_jet(const JetVec3& xu, const JetVec3& xv, int* eps3) {
  const JetVec3 N = cross(xu, xv);
  const Jet2 q = inner(N, N);
  if (std::fabs(q.value()) < kCausalTolerance)
    throw DegenerateNormal("unit normal along curve", "x_u x x_v is null or vanishing");
  const int e = sign_of(q.value());
  if (eps3) *eps3 = e;
  const Jet2 norm = sqrt(q * double(e));
  return N / norm;
}

namespace catalog {

namespace {
constexpr Domain kWide{-10, 10, -10, 10};
}

SurfacePatch spacelike_plane() {
  return SurfacePatch::from_strings("spacelike_plane", "0", "u", "v", kWide);
}
SurfacePatch timelike_plane() {
  return SurfacePatch::from_strings("timelike_plane", "u", "v", "0", kWide);
}
SurfacePatch lorentzian_cylinder() {
  return SurfacePatch::from_strings("lorentzian_cylinder", "u", "cos(v)", "sin(v)", kWide);
}
SurfacePatch de_sitter() {
  return SurfacePatch::from_strings("de_sitter", "sinh(u)", "cosh(u)*cos(v)", "cosh(u)*sin(v)",
                                    {-3, 3, -10, 10});
}
SurfacePatch hyperbolic_sheet() {
  return SurfacePatch::from_strings("hyperbolic_sheet", "cosh(u)", "sinh(u)*cos(v)",
                                    "sinh(u)*sin(v)", {0.05, 3, -10, 10});
}
SurfacePatch hyperbolic_cylinder() {
  return SurfacePatch::from_strings("hyperbolic_cylinder", "cosh(u)", "sinh(u)", "v",
                                    {-5, 5, -10, 10});
}

std::vector<std::string> names() {
  return {"spacelike_plane", "timelike_plane", "lorentzian_cylinder",
          "de_sitter",       "hyperbolic_sheet", "hyperbolic_cylinder"};
}

SurfacePatch by_name(const std::string& name) {
  if (name == "spacelike_plane") return spacelike_plane();
  if (name == "timelike_plane") return timelike_plane();
  if (name == "lorentzian_cylinder") return lorentzian_cylinder();
  if (name == "de_sitter") return de_sitter();
  if (name == "hyperbolic_sheet") return hyperbolic_sheet();
  if (name == "hyperbolic_cylinder") return hyperbolic_cylinder();
  throw InputError("unknown catalog surface '" + name + "'");
}

}  // namespace catalog

}  // namespace elastica
