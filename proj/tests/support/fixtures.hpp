#pragma once

#include <memory>
#include <string>
#include <vector>

#include "elastica/curve.hpp"

namespace fixtures {

struct Fixture {
  std::string name;
  std::string surface;
  std::string u, v;
  double length;
  elastica::CaseSignature sig;
  bool torsion_free;  // tau identically zero
  bool f_defined;     // eps2 kg^2 + eps3 kn^2 bounded away from zero

  std::shared_ptr<const elastica::SurfaceCurve> curve() const {
    auto patch = std::make_shared<const elastica::SurfacePatch>(elastica::catalog::by_name(surface));
    return std::make_shared<const elastica::SurfaceCurve>(
        patch, elastica::Expr::parse(u, {"s"}), elastica::Expr::parse(v, {"s"}), length);
  }
};

inline std::vector<Fixture> all() {
  using elastica::CaseSignature;
  const CaseSignature s1 = CaseSignature::spacelike_surface();
  const CaseSignature s2 = CaseSignature::timelike_arc();
  const CaseSignature s3 = CaseSignature::spacelike_arc_on_timelike();
  return {
      {"plane_circle", "spacelike_plane", "cos(s)", "sin(s)", 1.0, s1, true, true},
      {"plane_line", "spacelike_plane", "s", "0.5", 1.0, s1, true, false},
      {"sheet_circle", "hyperbolic_sheet", "0.8", "s/sinh(0.8)", 1.0, s1, true, true},
      {"hypcyl_helix", "hyperbolic_cylinder", "s*cos(0.7)", "s*sin(0.7)", 1.0, s1, false, true},
      {"hypcyl_sweep", "hyperbolic_cylinder", "sin(1.5*s)/1.5", "(1-cos(1.5*s))/1.5", 1.0, s1,
       false, true},
      {"cyl_helix", "lorentzian_cylinder", "sqrt(2)*s", "s", 1.0, s2, false, true},
      {"cyl_sweep", "lorentzian_cylinder", "sinh(1.5*s)/1.5", "(cosh(1.5*s)-1)/1.5", 1.0, s2,
       false, true},
      {"tplane_line", "timelike_plane", "s", "0", 1.0, s2, true, false},
      {"tplane_hyperbola", "timelike_plane", "sinh(s)", "cosh(s)", 1.0, s2, true, true},
      {"desitter_meridian", "de_sitter", "s", "0", 1.0, s2, true, true},
      {"desitter_equator", "de_sitter", "0", "s", 1.0, s3, true, true},
      {"cyl_spacelike_helix", "lorentzian_cylinder", "s", "sqrt(2)*s", 1.0, s3, false, true},
      {"cyl_spacelike_sweep", "lorentzian_cylinder", "(cosh(0.5*s)-1)/0.5", "sinh(0.5*s)/0.5",
       1.0, s3, false, true},
  };
}

// Spacelike arc on a timelike surface crossing kappa_g^2 = kappa_n^2.
inline Fixture indefinite() {
  return {"cyl_spacelike_crossing", "lorentzian_cylinder", "(cosh(1.5*s)-1)/1.5",
          "sinh(1.5*s)/1.5", 1.0, elastica::CaseSignature::spacelike_arc_on_timelike(), false,
          false};
}

}  // namespace fixtures
