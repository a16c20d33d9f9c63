#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "elastica/expr.hpp"
#include "elastica/jet.hpp"
#include "elastica/surface.hpp"

namespace elastica {

// (u, v) as Taylor jets in the path's own parameter.
class CurvePath {
 public:
  virtual ~CurvePath() = default;
  // sigma-only jets of u and v at parameter p, of the given order.
  virtual std::array<Jet2, 2> uv(double p, int order) const = 0;
};

class ExprPath : public CurvePath {
 public:
  ExprPath(Expr u, Expr v);
  std::array<Jet2, 2> uv(double p, int order) const override;
  const Expr& u() const { return u_; }
  const Expr& v() const { return v_; }

 private:
  Expr u_, v_;
};

struct ArcLengthCertificate {
  bool certified;
  double max_deviation;
};

class SurfaceCurve {
 public:
  // u(s), v(s) given in arc length; certification runs on construction.
  SurfaceCurve(std::shared_ptr<const SurfacePatch> patch, Expr u_of_s, Expr v_of_s,
               double length);
  // Path in an arbitrary regular parameter p in [0, p_end]; arc length is
  // recovered numerically and jets are reparametrized by series reversion.
  SurfaceCurve(std::shared_ptr<const SurfacePatch> patch, std::shared_ptr<const CurvePath> path,
               double p_end);

  const SurfacePatch& patch() const { return *patch_; }
  std::shared_ptr<const SurfacePatch> patch_ptr() const { return patch_; }
  double length() const { return length_; }
  bool arc_length_certified() const { return certified_; }
  double certification_deviation() const { return deviation_; }
  // Expressions when built from the DSL, else null.
  const ExprPath* expr_path() const { return expr_path_; }

  // (u, v) as jets in arc length at s.
  std::array<Jet2, 2> uv_jet(double s, int order) const;
  JetVec3 alpha_jet(double s, int order) const;
  // Sign in Q = eps (n x T), fixed at s = 0.
  int frame_epsilon() const { return frame_eps_; }
  // Definition branch on timelike surfaces: "Q x n = +T" or "Q x n = -T";
  // "spacelike" for spacelike surfaces.
  const std::string& cross_branch() const { return branch_; }
  // Parameter p at arc length s (identity for arc-length curves).
  double param_at(double s) const;

 private:
  void init_frame_orientation();
  double speed(double p) const;
  std::shared_ptr<const SurfacePatch> patch_;
  std::shared_ptr<const CurvePath> path_;
  const ExprPath* expr_path_ = nullptr;
  double length_ = 0.0;
  double p_end_ = 0.0;
  bool native_arc_length_ = true;
  bool certified_ = false;
  double deviation_ = 0.0;
  int frame_eps_ = 1;
  std::string branch_;
  std::vector<double> cum_p_, cum_s_;  // arc-length table for non-native curves
};

ArcLengthCertificate certify_arc_length(const SurfaceCurve& c, int samples);

// sigma-jets in arc length at one point. Vectors have order K-1 where
// K = invariant order + 2; invariants have the requested order.
struct FrameJets {
  JetVec3 alpha, T, Q, n;
  Jet2 kappa_g, kappa_n, tau_g;
  CaseSignature sig{1, 1, -1};
  double omega = -1.0;  // <T x Q, n>
};

FrameJets frame_jets(const SurfaceCurve& c, double s, int invariant_order = 4);

struct DarbouxData {
  double s = 0.0;
  MVec3 T, Q, n;
  CaseSignature sig{1, 1, -1};
  // s-jets of the invariants; k-th derivative via partial(k).
  Jet2 kg, kn, tg;
  double omega = -1.0;

  double kappa_g(int k = 0) const { return kg.partial(k); }
  double kappa_n(int k = 0) const { return kn.partial(k); }
  double tau_g(int k = 0) const { return tg.partial(k); }
};

DarbouxData darboux_frame(const SurfaceCurve& c, double s, int invariant_order = 4);

struct FrameResiduals {
  double orthonormality;  // max deviation of the Gram matrix from diag(eps)
  double structure;       // max Euclidean norm of the three derivative-row residuals
  double t_dot_tprime;    // |<T, T'>|
};
FrameResiduals frame_residuals(const SurfaceCurve& c, double s);

struct CurvatureTorsion {
  double kappa;
  double tau;
  int eps1, eps2;  // metric signs of tangent and principal normal
};

// Frenet curvature and torsion from the first three derivatives in any regular parameter.
CurvatureTorsion curvature_torsion(const MVec3& a1, const MVec3& a2, const MVec3& a3);
CurvatureTorsion curvature_torsion(const SurfaceCurve& c, double s);

// Denominator epsilon2 kappa_g^2 + epsilon3 kappa_n^2 below this is rejected.
inline constexpr double kDenominatorTolerance = 1e-10;

double torsion_from_darboux(const DarbouxData& d);
// f as an s-jet from invariant jets (order drops by one).
Jet2 torsion_jet(const Jet2& kg, const Jet2& kn, const Jet2& tg, const CaseSignature& sig);

}  // namespace elastica
