#include "elastica/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "elastica/errors.hpp"
#include "elastica/quadrature.hpp"

namespace elastica {

namespace {

constexpr int kCertifySamples = 257;
constexpr int kTablePanels = 128;

template <class F>
auto located(const char* name, double value, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (NumericalError& e) {
    e.locate(name, value);
    throw;
  }
}

// Coefficients of a sigma-only jet as a Taylor array.
std::array<double, Jet2::kMaxSigmaOrder + 2> coeffs(const Jet2& a) {
  std::array<double, Jet2::kMaxSigmaOrder + 2> c{};
  for (int i = 0; i <= a.sigma_order(); ++i) c[i] = a.coeff(i);
  return c;
}

}  // namespace

ExprPath::ExprPath(Expr u, Expr v) : u_(std::move(u)), v_(std::move(v)) {
  for (const Expr* e : {&u_, &v_}) {
    const auto& vars = e->variables();
    if (vars.size() != 1 || vars[0] != "s")
      throw InputError("curve expressions must be in the single variable s");
  }
}

std::array<Jet2, 2> ExprPath::uv(double p, int order) const {
  const Jet2 seed[1] = {Jet2::seed(p, 1.0, 0.0, order, 0)};
  return {u_.evaluate(std::span<const Jet2>(seed)), v_.evaluate(std::span<const Jet2>(seed))};
}

SurfaceCurve::SurfaceCurve(std::shared_ptr<const SurfacePatch> patch, Expr u_of_s, Expr v_of_s,
                           double length)
    : patch_(std::move(patch)), length_(length), p_end_(length) {
  if (!(length > 0.0) || !std::isfinite(length)) throw InputError("curve length must be positive");
  auto ep = std::make_shared<ExprPath>(std::move(u_of_s), std::move(v_of_s));
  expr_path_ = ep.get();
  path_ = std::move(ep);
  const ArcLengthCertificate cert = certify_arc_length(*this, kCertifySamples);
  certified_ = cert.certified;
  deviation_ = cert.max_deviation;
  if (certified_) init_frame_orientation();
}

SurfaceCurve::SurfaceCurve(std::shared_ptr<const SurfacePatch> patch,
                           std::shared_ptr<const CurvePath> path, double p_end)
    : patch_(std::move(patch)), path_(std::move(path)), p_end_(p_end),
      native_arc_length_(false) {
  if (!(p_end > 0.0)) throw InputError("path parameter range must be positive");
  const GaussRule& rule = gauss_legendre(16);
  cum_p_.resize(kTablePanels + 1);
  cum_s_.resize(kTablePanels + 1);
  const double h = p_end / kTablePanels;
  for (int k = 0; k <= kTablePanels; ++k) cum_p_[k] = k * h;
  cum_s_[0] = 0.0;
  for (int k = 0; k < kTablePanels; ++k) {
    double acc = 0.0;
    const double mid = cum_p_[k] + 0.5 * h;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      acc += rule.weights[q] * speed(mid + 0.5 * h * rule.nodes[q]);
    cum_s_[k + 1] = cum_s_[k] + 0.5 * h * acc;
  }
  length_ = cum_s_.back();
  const ArcLengthCertificate cert = certify_arc_length(*this, kCertifySamples);
  certified_ = cert.certified;
  deviation_ = cert.max_deviation;
  if (certified_) init_frame_orientation();
}

double SurfaceCurve::speed(double p) const {
  const auto uv = path_->uv(p, 1);
  const MVec3 a1 = partial(patch_->position_jet(uv[0], uv[1]), 1);
  const double q = inner(a1, a1);
  if (std::fabs(q) < kCausalTolerance) {
    NullTangent e("curve speed", "tangent is null");
    e.locate("p", p);
    throw e;
  }
  return std::sqrt(std::fabs(q));
}

double SurfaceCurve::param_at(double s) const {
  if (native_arc_length_) return s;
  std::size_t k = std::upper_bound(cum_s_.begin(), cum_s_.end(), s) - cum_s_.begin();
  k = std::clamp<std::size_t>(k, 1, cum_s_.size() - 1) - 1;
  const GaussRule& rule = gauss_legendre(16);
  const double p0 = cum_p_[k], s0 = cum_s_[k];
  double p = p0 + (s - s0) / speed(p0);
  for (int it = 0; it < 30; ++it) {
    double acc = 0.0;
    const double mid = 0.5 * (p0 + p), half = 0.5 * (p - p0);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      acc += rule.weights[q] * speed(mid + half * rule.nodes[q]);
    const double F = s0 + half * acc - s;
    const double dp = F / speed(p);
    p -= dp;
    if (std::fabs(dp) < 1e-15 * std::max(1.0, p_end_)) break;
  }
  return p;
}

std::array<Jet2, 2> SurfaceCurve::uv_jet(double s, int order) const {
  if (native_arc_length_) return path_->uv(s, order);
  const double p0 = param_at(s);
  const auto uvp = path_->uv(p0, order);
  const JetVec3 ap = d_sigma(patch_->position_jet(uvp[0], uvp[1]));
  const Jet2 q = inner(ap, ap);
  if (std::fabs(q.value()) < kCausalTolerance) {
    NullTangent e("arc-length reparametrization", "tangent is null");
    e.locate("s", s);
    throw e;
  }
  const Jet2 sp = sqrt(q * double(sign_of(q.value())));
  // s - s0 as a series in p - p0
  Jet2 S(order, 0);
  for (int k = 1; k <= order; ++k) S.coeff(k) = sp.coeff(k - 1) / k;
  const auto sc = coeffs(S);
  const double a1 = S.coeff(1);
  const Jet2 X = Jet2::seed(0.0, 1.0, 0.0, order, 0);
  Jet2 P = X / a1;
  for (int it = 0; it < order; ++it) P += (X - compose(P, sc.data())) / a1;
  return {compose(P, coeffs(uvp[0]).data()), compose(P, coeffs(uvp[1]).data())};
}

JetVec3 SurfaceCurve::alpha_jet(double s, int order) const {
  const auto uv = uv_jet(s, order);
  return patch_->position_jet(uv[0], uv[1]);
}

void SurfaceCurve::init_frame_orientation() {
  located("s", 0.0, [&] {
    const auto uv = uv_jet(0.0, 1);
    const PatchJets pj = patch_->along(uv[0], uv[1]);
    const MVec3 T = partial(pj.x, 1);
    if (std::fabs(inner(T, T)) < kCausalTolerance)
      throw NullTangent("frame orientation", "tangent is null");
    const MVec3 n = patch_->unit_normal(uv[0].value(), uv[1].value()).n;
    const MVec3 Q = cross(n, T);
    const double w = triple(T, Q, n);
    frame_eps_ = w > 0 ? -1 : 1;
    if (patch_->type() == SurfaceType::Spacelike) {
      branch_ = "spacelike";
    } else {
      const MVec3 Qe = double(frame_eps_) * Q;
      branch_ = inner(cross(Qe, n), T) * inner(T, T) > 0 ? "Q x n = +T" : "Q x n = -T";
    }
    return 0;
  });
}

ArcLengthCertificate certify_arc_length(const SurfaceCurve& c, int samples) {
  if (samples < 2) throw std::invalid_argument("certify_arc_length: samples < 2");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = c.length() * i / (samples - 1);
    located("s", s, [&] {
      const MVec3 a1 = partial(c.alpha_jet(s, 1), 1);
      const double q = inner(a1, a1);
      if (std::fabs(q) < kCausalTolerance) throw NullTangent("certify_arc_length", "tangent is null");
      worst = std::max(worst, std::fabs(std::fabs(q) - 1.0));
      return 0;
    });
  }
  return {worst < 1e-8, worst};
}

FrameJets frame_jets(const SurfaceCurve& c, double s, int invariant_order) {
  return located("s", s, [&] {
    if (!c.arc_length_certified())
      throw ConstraintViolation("darboux_frame", "curve is not certified as arc-length");
    const int K = invariant_order + 2;
    const auto uv = c.uv_jet(s, K);
    const PatchJets pj = c.patch().along(uv[0], uv[1]);
    FrameJets f;
    f.alpha = pj.x;
    f.T = d_sigma(pj.x);
    const double tt = inner(f.T, f.T).value();
    if (std::fabs(tt) < kCausalTolerance) throw NullTangent("darboux_frame", "tangent is null");
    int e3 = 1;
    f.n = truncated(unit_normal_jet(pj.xu, pj.xv, &e3), K - 1, 0);
    JetVec3 Q = double(c.frame_epsilon()) * cross(f.n, f.T);
    const Jet2 qq = inner(Q, Q);
    if (std::fabs(qq.value()) < kCausalTolerance)
      throw DegenerateNormal("darboux_frame", "tangential normal Q is null");
    const int e2 = sign_of(qq.value());
    f.Q = Q / sqrt(qq * double(e2));
    f.sig = CaseSignature(sign_of(tt), e2, e3);
    const JetVec3 dT = d_sigma(f.T), dQ = d_sigma(f.Q);
    f.kappa_g = inner(dT, f.Q);
    f.kappa_n = inner(dT, f.n);
    f.tau_g = inner(dQ, f.n);
    f.omega = triple(f.T, f.Q, f.n).value();
    return f;
  });
}

DarbouxData darboux_frame(const SurfaceCurve& c, double s, int invariant_order) {
  const FrameJets f = frame_jets(c, s, invariant_order);
  DarbouxData d;
  d.s = s;
  d.T = partial(f.T, 0);
  d.Q = partial(f.Q, 0);
  d.n = partial(f.n, 0);
  d.sig = f.sig;
  d.kg = f.kappa_g;
  d.kn = f.kappa_n;
  d.tg = f.tau_g;
  d.omega = f.omega;
  return d;
}

FrameResiduals frame_residuals(const SurfaceCurve& c, double s) {
  const FrameJets f = frame_jets(c, s, 1);
  const int e1 = f.sig.eps1(), e2 = f.sig.eps2(), e3 = f.sig.eps3();
  const MVec3 T = partial(f.T, 0), Q = partial(f.Q, 0), n = partial(f.n, 0);
  const MVec3 dT = partial(f.T, 1), dQ = partial(f.Q, 1), dn = partial(f.n, 1);
  const double kg = f.kappa_g.value(), kn = f.kappa_n.value(), tg = f.tau_g.value();
  FrameResiduals r{};
  r.orthonormality = std::max({std::fabs(inner(T, T) - e1), std::fabs(inner(Q, Q) - e2),
                               std::fabs(inner(n, n) - e3), std::fabs(inner(T, Q)),
                               std::fabs(inner(T, n)), std::fabs(inner(Q, n))});
  const MVec3 rT = dT - (e2 * kg * Q + e3 * kn * n);
  const MVec3 rQ = dQ - (-e1 * kg * T + e3 * tg * n);
  const MVec3 rn = dn - (-e1 * kn * T - e2 * tg * Q);
  r.structure = std::max({euclidean_norm(rT), euclidean_norm(rQ), euclidean_norm(rn)});
  r.t_dot_tprime = std::fabs(inner(T, dT));
  return r;
}

CurvatureTorsion curvature_torsion(const MVec3& a1, const MVec3& a2, const MVec3& a3) {
  const MVec3 C = cross(a1, a2);
  const double qc = inner(C, C);
  const double scale = euclidean_norm(a1) * euclidean_norm(a2);
  if (!(std::fabs(qc) > kCausalTolerance * scale * scale))
    throw DegenerateOsculating("curvature_torsion", "a' x a'' is null or vanishing");
  const double q1 = inner(a1, a1);
  if (std::fabs(q1) < kCausalTolerance) throw NullTangent("curvature_torsion", "tangent is null");
  CurvatureTorsion r;
  r.eps1 = sign_of(q1);
  // <a x b, a x b> = -(<a,a><b,b> - <a,b>^2), so the principal normal sign is -sign(qc) eps1
  r.eps2 = -sign_of(qc) * r.eps1;
  r.kappa = std::sqrt(std::fabs(qc)) / std::pow(std::fabs(q1), 1.5);
  r.tau = r.eps1 * r.eps2 * inner(C, a3) / std::fabs(qc);
  return r;
}

CurvatureTorsion curvature_torsion(const SurfaceCurve& c, double s) {
  return located("s", s, [&] {
    const JetVec3 a = c.alpha_jet(s, 3);
    return curvature_torsion(partial(a, 1), partial(a, 2), partial(a, 3));
  });
}

Jet2 torsion_jet(const Jet2& kg, const Jet2& kn, const Jet2& tg, const CaseSignature& sig) {
  const double e1 = sig.eps1(), e2 = sig.eps2(), e3 = sig.eps3();
  const Jet2 delta = e2 * kg * kg + e3 * kn * kn;
  if (std::fabs(delta.value()) < kDenominatorTolerance)
    throw IndefiniteDenominator("torsion_from_darboux",
                                "eps2 kappa_g^2 + eps3 kappa_n^2 vanishes");
  const Jet2 dkg = kg.d_sigma(), dkn = kn.d_sigma();
  const Jet2 num = -e2 * kg * (e3 * dkn + e2 * e3 * kg * tg) + e3 * kn * (e2 * dkg - e2 * e3 * kn * tg);
  return num / (e1 * delta);
}

double torsion_from_darboux(const DarbouxData& d) {
  return located("s", d.s, [&] { return torsion_jet(d.kg, d.kn, d.tg, d.sig).value(); });
}

}  // namespace elastica
