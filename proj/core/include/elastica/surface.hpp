#pragma once

#include <string>
#include <vector>

#include "elastica/expr.hpp"
#include "elastica/jet.hpp"
#include "elastica/minkowski.hpp"

namespace elastica {

struct Domain {
  double u_min, u_max, v_min, v_max;
  bool contains(double u, double v) const {
    return u >= u_min && u <= u_max && v >= v_min && v <= v_max;
  }
};

enum class SurfaceType { Spacelike, Timelike };
std::string to_string(SurfaceType t);

struct UnitNormal {
  MVec3 n;
  int eps3;
};

// Position and first partials along a curve, as sigma-jets.
struct PatchJets {
  JetVec3 x, xu, xv;
};

class SurfacePatch {
 public:
  // Validates regularity and constant causal type on a grid x grid sample.
  SurfacePatch(std::string name, Expr x0, Expr x1, Expr x2, Domain domain, int grid = 32);
  static SurfacePatch from_strings(std::string name, const std::string& x0, const std::string& x1,
                                   const std::string& x2, Domain domain);

  const std::string& name() const { return name_; }
  const Domain& domain() const { return domain_; }
  const Expr& component(int i) const { return comps_[i]; }
  SurfaceType type() const { return type_; }

  JetVec3 position_jet(const Jet2& u, const Jet2& v) const;
  MVec3 position(double u, double v) const;
  // x_u, x_v at a point
  std::pair<MVec3, MVec3> tangents(double u, double v) const;
  UnitNormal unit_normal(double u, double v) const;
  // x, x_u, x_v along sigma-jets u(sigma), v(sigma) (t-order 0).
  PatchJets along(const Jet2& u, const Jet2& v) const;

 private:
  void check_domain(double u, double v) const;
  std::string name_;
  std::vector<Expr> comps_;
  Domain domain_;
  SurfaceType type_;
};

// eps3 on a uniform grid; throws MixedCausalType or DegenerateNormal.
SurfaceType surface_causal_type(const SurfacePatch& p, int grid = 32);

// Unit normal along sigma-jets; sign of <n,n> returned in eps3.
JetVec3 unit_normal_jet(const JetVec3& xu, const JetVec3& xv, int* eps3 = nullptr);

namespace catalog {
SurfacePatch spacelike_plane();      // (0, u, v)
SurfacePatch timelike_plane();       // (u, v, 0)
SurfacePatch lorentzian_cylinder();  // (u, cos v, sin v)
SurfacePatch de_sitter();            // (sinh u, cosh u cos v, cosh u sin v)
SurfacePatch hyperbolic_sheet();     // (cosh u, sinh u cos v, sinh u sin v)
SurfacePatch hyperbolic_cylinder();  // (cosh u, sinh u, v)
std::vector<std::string> names();
SurfacePatch by_name(const std::string& name);
}  // namespace catalog

}  // namespace elastica
