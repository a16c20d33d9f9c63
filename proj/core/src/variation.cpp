#include "elastica/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "elastica/errors.hpp"
#include "elastica/parallel.hpp"
#include "elastica/quadrature.hpp"

namespace elastica {

namespace {

template <class F>
auto located(const char* name, double value, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (NumericalError& e) {
    e.locate(name, value);
    throw;
  }
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

double value_of(double x) { return x; }
double value_of(const Jet2& x) { return x.value(); }

Jet2 edot(const JetVec3& a, const JetVec3& b) { return a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2; }

// Coordinates (p, q) with Q = p x_u + q x_v, from the Euclidean normal equations.
std::pair<Jet2, Jet2> tangent_coordinates(const JetVec3& xu, const JetVec3& xv, const JetVec3& Q) {
  const Jet2 g11 = edot(xu, xu), g12 = edot(xu, xv), g22 = edot(xv, xv);
  const Jet2 r1 = edot(Q, xu), r2 = edot(Q, xv);
  const Jet2 det = g11 * g22 - g12 * g12;
  if (!(det.value() > 1e-12 * g11.value() * g22.value()))
    throw SingularTangentBasis("beta_jet", "x_u and x_v are linearly dependent");
  return {(g22 * r1 - g12 * r2) / det, (g11 * r2 - g12 * r1) / det};
}

// Vectors written on the Darboux frame, with the structure equations as
// the derivative rule.
struct FC {
  Jet2 a, b, c;
};

class FrameAlgebra {
 public:
  FrameAlgebra(const Jet2& kg, const Jet2& kn, const Jet2& tg, const CaseSignature& sig,
               double omega)
      : kg_(kg), kn_(kn), tg_(tg), e1_(sig.eps1()), e2_(sig.eps2()), e3_(sig.eps3()),
        omega_(omega) {}

  FC d(const FC& x) const {
    return {x.a.d_sigma() - e1_ * kg_ * x.b - e1_ * kn_ * x.c,
            x.b.d_sigma() + e2_ * kg_ * x.a - e2_ * tg_ * x.c,
            x.c.d_sigma() + e3_ * kn_ * x.a + e3_ * tg_ * x.b};
  }
  Jet2 dot(const FC& x, const FC& y) const {
    return e1_ * x.a * y.a + e2_ * x.b * y.b + e3_ * x.c * y.c;
  }
  Jet2 triple(const FC& x, const FC& y, const FC& z) const {
    const Jet2 det = x.a * (y.b * z.c - y.c * z.b) - x.b * (y.a * z.c - y.c * z.a) +
                     x.c * (y.a * z.b - y.b * z.a);
    return omega_ * det;
  }

 private:
  Jet2 kg_, kn_, tg_;
  double e1_, e2_, e3_, omega_;
};

// Sum_k mu^(k) V_k
using MuPoly = std::array<FC, 4>;

MuPoly d_poly(const FrameAlgebra& alg, const MuPoly& p) {
  MuPoly r;
  for (int k = 0; k < 4; ++k) {
    r[k] = alg.d(p[k]);
    if (k > 0) {
      r[k].a += p[k - 1].a;
      r[k].b += p[k - 1].b;
      r[k].c += p[k - 1].c;
    }
  }
  return r;
}

constexpr int kPrintedTerms = 36;

template <class S>
PrintedBlocks<S> printed_impl(const InvariantSeries<S>& v, const CaseSignature& sig,
                              const PrintedOptions& o) {
  const double e1 = sig.eps1(), e2 = sig.eps2(), e3 = sig.eps3();
  auto sg = [&](int i) { return o.flip == i ? -1.0 : 1.0; };
  const S& kg = v.kg[0];
  const S& kg1 = v.kg[1];
  const S& kn = v.kn[0];
  const S& kn1 = v.kn[1];
  const S& tg = v.tg[0];
  const S& tg1 = v.tg[1];
  const S& tg2 = v.tg[2];

  const S delta = e2 * kg * kg + e3 * kn * kn;
  if (std::fabs(value_of(delta)) < kDenominatorTolerance)
    throw IndefiniteDenominator("printed first variation",
                                "eps2 kappa_g^2 + eps3 kappa_n^2 vanishes");
  const S np = -e2 * e3 * kg * kn1 - e3 * kg * kg * tg + e2 * e3 * kn * kg1 - e2 * kn * kn * tg;
  const S npc = sg(28) * (-e2 * e3 * kg * kn1) + sg(29) * (-e3 * kg * kg * tg) +
                sg(30) * (e2 * e3 * kn * kg1) + sg(31) * (-e2 * kn * kn * tg);
  const S f = np / (e1 * delta);

  const S P0 = sg(1) * (-3.0 * kg * kg * kn1) + sg(2) * (-3.0 * e2 * kg * kg * kg * tg) +
               sg(3) * (3.0 * kg * kg1 * kn) + sg(4) * (-2.0 * e3 * kg * kn * kn * tg) +
               sg(5) * (e2 * kg * kg * kg * kg) + sg(6) * (e3 * kg * kg * kn * kn) +
               sg(7) * (-e2 * kn1 * tg * tg) + sg(8) * (e2 * e3 * kg1 * tg1) +
               sg(9) * (4.0 * kn * tg * tg1) + sg(10) * (-e2 * e3 * kg * tg2) +
               sg(11) * (e1 * e2 * kg * kn * kn * tg);
  const S R0 = sg(12) * (-4.0 * e2 * kg * kg * kg) + sg(13) * (-4.0 * e3 * kg * kn * kn) +
               sg(14) * (2.0 * kg * tg * tg) + sg(15) * (2.0 * e1 * e3 * kn * tg1);
  const S P1 = sg(16) * (-4.0 * kg * kg * kn) + sg(17) * (-e1 * kn * kn * kn) +
               sg(18) * (2.0 * e2 * e3 * kg1 * tg) + sg(19) * (2.0 * e2 * kn * tg * tg) +
               sg(20) * (-3.0 * e2 * e3 * kg * tg1) + sg(21) * (3.0 * kg * kg * kn) +
               sg(22) * (3.0 * e2 * kn * tg * tg);
  const double ea = o.restated_a1 ? e2 : e3;
  const S c1 = sg(23) * (4.0 * e1 * ea * kn * tg * npc);
  const S P2 = sg(24) * (-e3 * kn1) + sg(25) * (-4.0 * e2 * e3 * kg * tg);
  const S c2 = sg(26) * (2.0 * e1 * kg * npc);
  const S c0 = sg(32) * (npc * R0);

  const S pre = 2.0 * f / (delta * delta);
  PrintedBlocks<S> r;
  r.f = f;
  r.A[0] = pre * (sg(33) * e1 * delta * P0 - c0);
  r.A[1] = pre * (sg(34) * e1 * delta * P1 - c1);
  r.A[2] = pre * (sg(35) * e1 * delta * P2 - c2);
  r.A[3] = sg(27) * 2.0 * e3 * kn * f / (delta * delta);
  r.first_term_sign = sg(0);
  return r;
}

}  // namespace

VariationSpec make_bump(const BumpParams& p, std::string name) {
  if (!(p.length > 0.0) || !std::isfinite(p.length)) throw InputError("bump length must be positive");
  if (!(p.margin > 0.0) || !std::isfinite(p.margin))
    throw InputError("extension margin must be positive");
  char buf[160];
  std::string src;
  switch (p.kind) {
    case BumpKind::Polynomial:
      if (p.power < 0 || p.power > 32) throw InputError("bump power must lie in [0, 32]");
      std::snprintf(buf, sizeof buf, "s^2*(%.17g - s)^%d", p.length, p.power);
      src = buf;
      break;
    case BumpKind::SineSquared:
      std::snprintf(buf, sizeof buf, "sin(pi*s/(2*%.17g))^2", p.length);
      src = buf;
      break;
    case BumpKind::Custom:
      src = p.expression;
      break;
  }
  if (p.scale != 1.0) {
    std::snprintf(buf, sizeof buf, "%.17g*", p.scale);
    src = buf + ("(" + src + ")");
  }
  VariationSpec v{std::move(name), Expr::parse(src, {"s"}), p.margin};
  const Jet2 j0 = mu_jet(v, 0.0, 1);
  if (std::fabs(j0.value()) > 1e-12)
    throw ConstraintViolation("make_bump", "mu(0) = " + fmt(j0.value()) + " must vanish");
  if (std::fabs(j0.partial(1)) > 1e-12)
    throw ConstraintViolation("make_bump", "mu'(0) = " + fmt(j0.partial(1)) + " must vanish");
  double peak = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double s = p.length * i / 64.0;
    const double x[1] = {s};
    peak = std::max(peak, std::fabs(v.mu.evaluate(std::span<const double>(x))));
  }
  if (peak < 1e-14) throw ConstraintViolation("make_bump", "mu vanishes identically on [0, l]");
  return v;
}

Jet2 mu_jet(const VariationSpec& v, double s, int order) {
  const Jet2 seed[1] = {Jet2::seed(s, 1.0, 0.0, order, 0)};
  return v.mu.evaluate(std::span<const Jet2>(seed));
}

std::array<double, 4> mu_derivatives(const VariationSpec& v, double s) {
  const Jet2 m = mu_jet(v, s, 3);
  return {m.partial(0), m.partial(1), m.partial(2), m.partial(3)};
}

JetVec3 beta_jet(const SurfaceCurve& c, const VariationSpec& v, double sigma) {
  return located("sigma", sigma, [&] {
    const FrameJets fj = frame_jets(c, sigma, 3);
    const auto uv = c.uv_jet(sigma, 4);
    const PatchJets pj = c.patch().along(uv[0], uv[1]);
    const auto [p, q] = tangent_coordinates(pj.xu, pj.xv, fj.Q);
    const Jet2 mu = mu_jet(v, sigma, 4);
    return c.patch().position_jet(uv[0].with_t(mu * p), uv[1].with_t(mu * q));
  });
}

FrameComponents components(const DarbouxData& d, const MVec3& x) {
  return {d.sig.eps1() * inner(x, d.T), d.sig.eps2() * inner(x, d.Q), d.sig.eps3() * inner(x, d.n)};
}

MVec3 assemble(const DarbouxData& d, const FrameComponents& c) {
  return c.T * d.T + c.Q * d.Q + c.n * d.n;
}

ClosedFormJets closed_form_jets(const DarbouxData& d, const std::array<double, 4>& mu,
                                FormulaVariant variant) {
  const double e1 = d.sig.eps1(), e2 = d.sig.eps2(), e3 = d.sig.eps3();
  const double kg = d.kappa_g(0), kg1 = d.kappa_g(1), kg2 = d.kappa_g(2);
  const double kn = d.kappa_n(0), kn1 = d.kappa_n(1);
  const double tg = d.tau_g(0), tg1 = d.tau_g(1), tg2 = d.tau_g(2);
  const double m0 = mu[0], m1 = mu[1], m2 = mu[2], m3 = mu[3];
  const bool printed = variant == FormulaVariant::Printed;

  ClosedFormJets r;
  r.b_ss = {0.0, e2 * kg, e3 * kn};
  r.b_ts = {-e1 * m0 * kg, m1, e3 * m0 * tg};
  r.b_sss = {-(e1 * e2 * kg * kg + e1 * e3 * kn * kn), e2 * kg1 - e2 * e3 * kn * tg,
             e3 * kn1 + e2 * e3 * kg * tg};

  r.b_tss.T = -2.0 * e1 * m1 * kg - e1 * m0 * kg1 - e1 * e3 * m0 * kn * tg;
  if (printed) {
    r.b_tss.Q = m2 - e1 * e2 * m0 * kg * kg - e1 * e3 * m0 * tg * tg;
    r.b_tss.n = 2.0 * e3 * m1 * tg - e1 * e3 * m0 * tg1 + e1 * e3 * m0 * kg * kn;
  } else {
    r.b_tss.Q = m2 - e1 * e2 * m0 * kg * kg - e2 * e3 * m0 * tg * tg;
    r.b_tss.n = 2.0 * e3 * m1 * tg + e3 * m0 * tg1 - e1 * e3 * m0 * kg * kn;
  }

  r.b_tsss.T = -3.0 * e1 * m2 * kg - 3.0 * e1 * m1 * kg1 - e1 * m0 * kg2 -
               e1 * e3 * m0 * kn1 * tg - 2.0 * e1 * e3 * m0 * kn * tg1 -
               3.0 * e1 * e3 * m1 * kn * tg + e3 * m0 * kg * kn * kn + e2 * m0 * kg * kg * kg +
               e1 * e2 * e3 * m0 * kg * tg * tg;
  r.b_tsss.Q = m3 - 3.0 * e1 * e2 * m1 * kg * kg - 3.0 * e2 * e3 * m1 * tg * tg -
               3.0 * e1 * e2 * m0 * kg * kg1 - 3.0 * e2 * e3 * m0 * tg * tg1;
  r.b_tsss.n = -3.0 * e1 * e3 * m1 * kg * kn - 2.0 * e1 * e3 * m0 * kg1 * kn -
               e1 * e2 * e3 * m0 * kg * kg * tg + 3.0 * e3 * m2 * tg + 3.0 * e3 * m1 * tg1 +
               e3 * m0 * tg2 - e1 * e3 * m0 * kg * kn1 - e2 * m0 * tg * tg * tg -
               e1 * m0 * kn * kn * tg;
  return r;
}

ClosedFormJets jet_partials(const SurfaceCurve& c, const VariationSpec& v, double sigma,
                            const DarbouxData& d) {
  const JetVec3 B = beta_jet(c, v, sigma);
  ClosedFormJets r;
  r.b_ss = components(d, partial(B, 2, 0));
  r.b_ts = components(d, partial(B, 1, 1));
  r.b_sss = components(d, partial(B, 3, 0));
  r.b_tss = components(d, partial(B, 2, 1));
  r.b_tsss = components(d, partial(B, 3, 1));
  return r;
}

VariationBlocks variation_blocks(const Jet2& kg, const Jet2& kn, const Jet2& tg,
                                 const CaseSignature& sig, double omega) {
  const FrameAlgebra alg(kg, kn, tg, sig, omega);
  // Constants carry one extra order so that differentiating them does not
  // truncate below the order of the invariants.
  const int m = std::min({kg.sigma_order(), kn.sigma_order(), tg.sigma_order()});
  const Jet2 zero = Jet2::constant(0.0, m + 1, 0), one = Jet2::constant(1.0, m + 1, 0);
  const FC T{one, zero, zero};
  const FC T1 = alg.d(T), T2 = alg.d(T1);

  MuPoly bt;
  for (auto& v : bt) v = {zero, zero, zero};
  bt[0] = {zero, one, zero};  // b_t = mu Q
  const MuPoly bts = d_poly(alg, bt), btss = d_poly(alg, bts), btsss = d_poly(alg, btss);

  const Jet2 N = alg.triple(T, T1, T2);
  const Jet2 D = alg.dot(T, T) * alg.dot(T1, T1) - alg.dot(T1, T) * alg.dot(T1, T);
  if (std::fabs(D.value()) < kDenominatorTolerance)
    throw IndefiniteDenominator("first variation", "eps2 kappa_g^2 + eps3 kappa_n^2 vanishes");
  VariationBlocks r;
  r.f = N / D;
  const Jet2 tt = alg.dot(T, T), t1t1 = alg.dot(T1, T1);
  for (int k = 0; k < 4; ++k) {
    const Jet2 Nt = alg.triple(bts[k], T1, T2) + alg.triple(T, btss[k], T2) +
                    alg.triple(T, T1, btsss[k]);
    const Jet2 Dt = 2.0 * alg.dot(bts[k], T) * t1t1 + 2.0 * tt * alg.dot(btss[k], T1);
    r.A[k] = 2.0 * r.f * (D * Nt - N * Dt) / (D * D);
  }
  return r;
}

std::vector<std::string> printed_term_names() {
  std::vector<std::string> n(kPrintedTerms);
  n[0] = "length-restriction term";
  for (int i = 1; i <= 11; ++i) n[i] = "P0 term " + std::to_string(i);
  for (int i = 12; i <= 15; ++i) n[i] = "R0 term " + std::to_string(i - 11);
  for (int i = 16; i <= 22; ++i) n[i] = "P1 term " + std::to_string(i - 15);
  n[23] = "A1 coupling 4 kn tg N";
  n[24] = "P2 term 1";
  n[25] = "P2 term 2";
  n[26] = "A2 coupling 2 kg N";
  n[27] = "A3 block";
  for (int i = 28; i <= 31; ++i) n[i] = "coupling numerator term " + std::to_string(i - 27);
  n[32] = "A0 coupling N R0";
  n[33] = "A0 leading block";
  n[34] = "A1 leading block";
  n[35] = "A2 leading block";
  return n;
}

PrintedBlocks<double> printed_blocks(const InvariantSeries<double>& v, const CaseSignature& sig,
                                     const PrintedOptions& o) {
  return printed_impl(v, sig, o);
}

PrintedBlocks<Jet2> printed_blocks(const InvariantSeries<Jet2>& v, const CaseSignature& sig,
                                   const PrintedOptions& o) {
  return printed_impl(v, sig, o);
}

InvariantSeries<Jet2> invariant_series(const Jet2& kg, const Jet2& kn, const Jet2& tg) {
  InvariantSeries<Jet2> r;
  r.kg = {kg, kg.d_sigma(), kg.d_sigma().d_sigma()};
  r.kn = {kn, kn.d_sigma(), kn.d_sigma().d_sigma()};
  r.tg = {tg, tg.d_sigma(), tg.d_sigma().d_sigma()};
  return r;
}

InvariantSeries<double> invariant_values(const DarbouxData& d) {
  InvariantSeries<double> r;
  for (int k = 0; k < 3; ++k) {
    r.kg[k] = d.kappa_g(k);
    r.kn[k] = d.kappa_n(k);
    r.tg[k] = d.tau_g(k);
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kBlockOrder = 5;  // invariant jets; blocks carry three derivatives
constexpr int kMaxPanels = 4096;

bool agrees(double a, double b) {
  return std::fabs(a - b) <= 1e-10 * std::max(std::fabs(a), std::fabs(b)) + 1e-14;
}

}  // namespace

FirstVariationTable::FirstVariationTable(std::shared_ptr<const SurfaceCurve> c, int panels)
    : curve_(std::move(c)), base_panels_(panels) {
  if (panels < 1) throw InputError("panel count must be positive");
  const double l = curve_->length();
  auto endpoint = [&](double s, double& f, std::array<std::array<double, 4>, 4>& A,
                      std::array<std::array<double, 4>, 4>& Ap, double& pf) {
    located("s", s, [&] {
      const DarbouxData d = darboux_frame(*curve_, s, kBlockOrder);
      sig_ = d.sig;
      const VariationBlocks b = variation_blocks(d.kg, d.kn, d.tg, d.sig, d.omega);
      f = b.f.value();
      for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j) A[k][j] = b.A[k].partial(j);
      PrintedOptions o;
      o.restated_a1 = true;
      const auto p = printed_blocks(invariant_series(d.kg, d.kn, d.tg), d.sig, o);
      for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j) Ap[k][j] = p.A[k].partial(j);
      const double kg = d.kappa_g(0), kn = d.kappa_n(0);
      const double delta = d.sig.eps2() * kg * kg + d.sig.eps3() * kn * kn;
      pf = 2.0 * p.f.value() / (delta * delta);
      return 0;
    });
  };
  endpoint(0.0, f_0_, A_0_, Ap_0_, pf_0_);
  endpoint(l, f_l_, A_l_, Ap_l_, pf_l_);
}

FirstVariationTable::Level FirstVariationTable::build(int panels) const {
  const GaussRule& rule = gauss_legendre(16);
  const int q = static_cast<int>(rule.nodes.size());
  const double l = curve_->length(), h = l / panels;
  const double e1 = sig_.eps1();
  Level lv;
  lv.panels = panels;
  lv.nodes.resize(static_cast<std::size_t>(panels) * q);
  parallel_for(lv.nodes.size(), [&](std::size_t i) {
    const int p = static_cast<int>(i) / q, k = static_cast<int>(i) % q;
    Node& nd = lv.nodes[i];
    nd.s = (p + 0.5) * h + 0.5 * h * rule.nodes[k];
    nd.w = 0.5 * h * rule.weights[k];
    located("s", nd.s, [&] {
      const DarbouxData d = darboux_frame(*curve_, nd.s, kBlockOrder);
      const VariationBlocks b = variation_blocks(d.kg, d.kn, d.tg, d.sig, d.omega);
      nd.kg = d.kappa_g(0);
      nd.f = b.f.value();
      for (int j = 0; j < 4; ++j) nd.A[j] = b.A[j].value();
      nd.E = e1 * f_l_ * f_l_ * nd.kg + b.A[0].value() - b.A[1].partial(1) + b.A[2].partial(2) -
             b.A[3].partial(3);
      PrintedOptions o;
      o.restated_a1 = true;
      const auto pb = printed_blocks(invariant_series(d.kg, d.kn, d.tg), d.sig, o);
      nd.Ep = e1 * f_l_ * f_l_ * nd.kg + pb.A[0].value() - pb.A[1].partial(1) +
              pb.A[2].partial(2) - pb.A[3].partial(3);
      nd.inv = invariant_values(d);
      return 0;
    });
  });
  return lv;
}

const FirstVariationTable::Level& FirstVariationTable::level(int k) const {
  std::lock_guard lock(mutex_);
  while (static_cast<int>(levels_.size()) <= k) {
    const int panels = base_panels_ << levels_.size();
    levels_.push_back(std::make_unique<Level>(build(panels)));
  }
  return *levels_[k];
}

FirstVariationTable::Integrals FirstVariationTable::integrate_level(const Level& lv,
                                                                    const VariationSpec& v) const {
  Integrals r;
  r.panels = lv.panels;
  const double e1 = sig_.eps1();
  double mu_kg = 0.0;
  for (const Node& nd : lv.nodes) {
    const auto m = mu_derivatives(v, nd.s);
    mu_kg += nd.w * m[0] * nd.kg;
    for (int k = 0; k < 4; ++k) r.grouped[k] += nd.w * m[k] * nd.A[k];
    r.euler_lagrange += nd.w * m[0] * nd.E;
    r.f2_mu_kg += nd.w * nd.f * nd.f * m[0] * nd.kg;
  }
  r.dlambda = e1 * mu_kg;
  r.lambda_term = e1 * f_l_ * f_l_ * mu_kg;
  r.f2_mu_kg *= e1;
  r.total = r.lambda_term + r.grouped[0] + r.grouped[1] + r.grouped[2] + r.grouped[3];
  return r;
}

FirstVariationTable::Integrals FirstVariationTable::integrals(const VariationSpec& v) const {
  Integrals prev = integrate_level(level(0), v);
  for (int k = 1; (base_panels_ << k) <= kMaxPanels; ++k) {
    Integrals cur = integrate_level(level(k), v);
    if (agrees(cur.total, prev.total) && agrees(cur.euler_lagrange, prev.euler_lagrange) &&
        agrees(cur.dlambda, prev.dlambda))
      return cur;
    prev = cur;
  }
  return prev;
}

double FirstVariationTable::printed_total(const VariationSpec& v, const PrintedOptions& o) const {
  auto eval = [&](const Level& lv) {
    double mu_kg = 0.0, sum = 0.0, first = 1.0;
    for (const Node& nd : lv.nodes) {
      const auto m = mu_derivatives(v, nd.s);
      const auto pb = printed_blocks(nd.inv, sig_, o);
      first = pb.first_term_sign;
      mu_kg += nd.w * m[0] * nd.kg;
      for (int k = 0; k < 4; ++k) sum += nd.w * m[k] * pb.A[k];
    }
    return first * sig_.eps1() * f_l_ * f_l_ * mu_kg + sum;
  };
  double prev = eval(level(0));
  for (int k = 1; (base_panels_ << k) <= kMaxPanels; ++k) {
    const double cur = eval(level(k));
    if (agrees(cur, prev)) return cur;
    prev = cur;
  }
  return prev;
}

double FirstVariationTable::printed_ibp_total(const VariationSpec& v) const {
  const double l = curve_->length();
  const auto ml = mu_derivatives(v, l), m0 = mu_derivatives(v, 0.0);
  const double bc1 = Ap_l_[1][0] - Ap_l_[2][1] + Ap_l_[3][2];
  const double bc2 = Ap_l_[2][0] - Ap_l_[3][1];
  const double boundary = ml[0] * bc1 + ml[1] * bc2 + ml[2] * pf_l_ - m0[2] * pf_0_;
  auto eval = [&](const Level& lv) {
    double sum = 0.0;
    for (const Node& nd : lv.nodes) sum += nd.w * mu_derivatives(v, nd.s)[0] * nd.Ep;
    return sum;
  };
  double prev = eval(level(0));
  for (int k = 1; (base_panels_ << k) <= kMaxPanels; ++k) {
    const double cur = eval(level(k));
    if (agrees(cur, prev)) return cur + boundary;
    prev = cur;
  }
  return prev + boundary;
}

BoundaryTerms FirstVariationTable::boundary(const VariationSpec& v) const {
  const double l = curve_->length();
  const auto ml = mu_derivatives(v, l), m0 = mu_derivatives(v, 0.0);
  BoundaryTerms b;
  b.mu = {ml[0], ml[1], ml[2], m0[2]};
  b.coeff = {A_l_[1][0] - A_l_[2][1] + A_l_[3][2], A_l_[2][0] - A_l_[3][1], A_l_[3][0],
             -A_0_[3][0]};
  return b;
}

BoundaryTerms FirstVariationTable::printed_boundary(const VariationSpec& v) const {
  BoundaryTerms b = boundary(v);
  b.coeff = {Ap_l_[1][0] - Ap_l_[2][1] + Ap_l_[3][2], Ap_l_[2][0] - Ap_l_[3][1], pf_l_, -pf_0_};
  return b;
}

// ---------------------------------------------------------------------------

VariationFamily::VariationFamily(std::shared_ptr<const SurfaceCurve> c, VariationSpec v,
                                 int panels)
    : curve_(std::move(c)), spec_(std::move(v)) {
  if (panels < 1) throw InputError("panel count must be positive");
  l_ = curve_->length();
  l_star_ = l_ * (1.0 + spec_.margin);
  // Panel doubling on H(0) and the length integral.
  std::vector<Node> prev = build(panels);
  // Straight arcs have no osculating plane; only lambda is usable there, so
  // the doubling then watches the length alone and H(t) throws later.
  bool with_tau = true;
  auto totals = [&](const std::vector<Node>& nodes) {
    double h = 0.0, len = 0.0;
    for (const Node& nd : nodes) {
      const Local loc = evaluate(nd, 0.0, with_tau);
      h += nd.w * loc.tau * loc.tau;
      len += nd.w * loc.speed;
    }
    return std::pair{h, len};
  };
  std::pair<double, double> tp;
  try {
    tp = totals(prev);
  } catch (const DegenerateOsculating&) {
    with_tau = false;
    tp = totals(prev);
  }
  int p = panels;
  while (2 * p <= kMaxPanels) {
    std::vector<Node> cur = build(2 * p);
    const auto tc = totals(cur);
    p *= 2;
    prev = std::move(cur);
    const bool done = agrees(tc.first, tp.first) && agrees(tc.second, tp.second);
    tp = tc;
    if (done) break;
  }
  nodes_ = std::move(prev);
  panels_ = p;
}

VariationFamily::Node VariationFamily::make_node(double sigma, double w) const {
  return located("sigma", sigma, [&] {
    const FrameJets fj = frame_jets(*curve_, sigma, 2);
    Node nd;
    nd.sigma = sigma;
    nd.w = w;
    nd.uv = curve_->uv_jet(sigma, 3);
    const PatchJets pj = curve_->patch().along(nd.uv[0], nd.uv[1]);
    const auto [p, q] = tangent_coordinates(pj.xu, pj.xv, fj.Q);
    const Jet2 mu = mu_jet(spec_, sigma, 3);
    nd.eta = mu * p;
    nd.zeta = mu * q;
    return nd;
  });
}

std::vector<VariationFamily::Node> VariationFamily::build(int panels) const {
  const GaussRule& rule = gauss_legendre(16);
  const int q = static_cast<int>(rule.nodes.size());
  const double h = l_ / panels;
  std::vector<Node> nodes(static_cast<std::size_t>(panels) * q);
  parallel_for(nodes.size(), [&](std::size_t i) {
    const int p = static_cast<int>(i) / q, k = static_cast<int>(i) % q;
    nodes[i] = make_node((p + 0.5) * h + 0.5 * h * rule.nodes[k], 0.5 * h * rule.weights[k]);
  });
  return nodes;
}

VariationFamily::Local VariationFamily::evaluate(const Node& nd, double t, bool with_tau) const {
  return located("sigma", nd.sigma, [&] {
    const JetVec3 b = curve_->patch().position_jet(nd.uv[0] + t * nd.eta, nd.uv[1] + t * nd.zeta);
    const MVec3 a1 = partial(b, 1), a2 = partial(b, 2), a3 = partial(b, 3);
    const double q1 = inner(a1, a1);
    if (std::fabs(q1) < kCausalTolerance) throw NullSpeed("H(t)", "b_sigma is null");
    if (!with_tau) return Local{std::sqrt(std::fabs(q1)), 0.0};
    const double D = q1 * inner(a2, a2) - inner(a1, a2) * inner(a1, a2);
    const double scale = euclidean_norm(a1) * euclidean_norm(a2);
    if (!(std::fabs(D) > kCausalTolerance * scale * scale))
      throw DegenerateOsculating("H(t)", "osculating plane of b(., t) is degenerate");
    return Local{std::sqrt(std::fabs(q1)), triple(a1, a2, a3) / D};
  });
}

double VariationFamily::tail(double t, double lambda, bool weight_tau, HMode mode) const {
  if (lambda == l_) return 0.0;
  const GaussRule& rule = gauss_legendre(16);
  const double mid = 0.5 * (l_ + lambda), half = 0.5 * (lambda - l_);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const Local loc = evaluate(make_node(mid + half * rule.nodes[k], 0.0), t, weight_tau);
    double g = loc.speed;
    if (weight_tau) g = loc.tau * loc.tau * (mode == HMode::ArcLength ? loc.speed : 1.0);
    acc += rule.weights[k] * g;
  }
  return half * acc;
}

double VariationFamily::lambda(double t) const {
  return located("t", t, [&] {
    double L0 = 0.0;
    for (const Node& nd : nodes_) L0 += nd.w * evaluate(nd, t, false).speed;
    double lam = l_;
    for (int it = 0; it < 60; ++it) {
      const double g = L0 + tail(t, lam, false, HMode::Parametric) - l_;
      const double sp = evaluate(make_node(lam, 0.0), t, false).speed;
      const double step = g / sp;
      lam -= step;
      if (!(lam >= 0.0 && lam <= l_star_))
        throw WindowExceeded("lambda_of_t", "no root of the length restriction in [0, l*]");
      if (std::fabs(step) <= 1e-15 * l_) return lam;
    }
    return lam;
  });
}

double VariationFamily::H(double t, HMode mode) const {
  const double lam = lambda(t);
  return located("t", t, [&] {
    double acc = 0.0;
    for (const Node& nd : nodes_) {
      const Local loc = evaluate(nd, t);
      acc += nd.w * loc.tau * loc.tau * (mode == HMode::ArcLength ? loc.speed : 1.0);
    }
    return acc + tail(t, lam, true, mode);
  });
}

double functional_H(const SurfaceCurve& c) {
  QuadratureOptions o;
  return integrate(
      [&](double s) {
        const double tau = curvature_torsion(c, s).tau;
        return tau * tau;
      },
      0.0, c.length(), o);
}

double probe_window(const VariationFamily& fam, double h_min) {
  for (double w = 0.05; w >= h_min; w *= 0.5) {
    try {
      fam.H(w);
      fam.H(-w);
      return w;
    } catch (const NumericalError&) {
    }
  }
  throw WindowExceeded("probe_window", "no admissible t-window of width " + fmt(h_min));
}

FdResult dH_dt_fd(const VariationFamily& fam, double h, HMode mode) {
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  const double w = probe_window(fam, 0.5 * h * 1e-3);
  h = std::min(h, w);
  const double d1 = (fam.H(h, mode) - fam.H(-h, mode)) / (2.0 * h);
  const double d2 = (fam.H(0.5 * h, mode) - fam.H(-0.5 * h, mode)) / h;
  return {(4.0 * d2 - d1) / 3.0, d1, h, w};
}

double dlambda_dt_fd(const VariationFamily& fam, double h) {
  return (fam.lambda(h) - fam.lambda(-h)) / (2.0 * h);
}

double dlambda_dt_closed(const SurfaceCurve& c, const VariationSpec& v, int panels) {
  const int e1 = darboux_frame(c, 0.0, 0).sig.eps1();
  QuadratureOptions q;
  q.panels = panels;
  const double I = integrate(
      [&](double s) {
        const double x[1] = {s};
        return v.mu.evaluate(std::span<const double>(x)) * darboux_frame(c, s, 0).kappa_g();
      },
      0.0, c.length(), q);
  return e1 * I;
}

VariationReport dH_dt_closed(std::shared_ptr<const SurfaceCurve> c, const VariationSpec& v,
                             const VaryOptions& o) {
  const FirstVariationTable table(std::move(c), o.panels);
  return dH_dt_closed(table, v, o);
}

VariationReport dH_dt_closed(const FirstVariationTable& table, const VariationSpec& v,
                             const VaryOptions& o) {
  const SurfaceCurve& c = table.curve();
  VariationReport r;
  const auto I = table.integrals(v);
  const CaseSignature sig = darboux_frame(c, 0.0, 1).sig;
  r.case_label = sig.label();
  r.branch = c.cross_branch();
  r.lambda_term = I.lambda_term;
  r.grouped = I.grouped;
  r.dH_dt_closed = I.total;
  r.boundary = table.boundary(v);
  r.boundary_printed = table.printed_boundary(v);
  r.dH_dt_closed_ibp = I.euler_lagrange;
  for (int k = 0; k < 4; ++k) r.dH_dt_closed_ibp += r.boundary.mu[k] * r.boundary.coeff[k];
  r.dH_dt_printed = table.printed_total(v);
  r.dH_dt_printed_ibp = table.printed_ibp_total(v);
  r.dH_dt_closed_true = I.total - I.f2_mu_kg;
  r.dlambda_dt_closed = I.dlambda;
  r.panels = I.panels;

  const VariationFamily fam(table.curve_ptr(), v, o.panels);
  const FdResult fd = dH_dt_fd(fam, o.fd_step, HMode::Parametric);
  r.dH_dt_fd = fd.value;
  r.fd_step = fd.h;
  r.window = fd.window;
  r.dH_dt_fd_true = dH_dt_fd(fam, o.fd_step, HMode::ArcLength).value;
  r.dlambda_dt_fd = dlambda_dt_fd(fam);
  const double gap = std::fabs(r.dH_dt_closed - r.dH_dt_fd);
  r.relative_gap = r.dH_dt_fd != 0.0 ? gap / std::fabs(r.dH_dt_fd) : gap;

  const double l = c.length(), e1 = sig.eps1(), fl = table.f_end();
  for (int i = 0; i < o.samples; ++i) {
    const double s = o.samples == 1 ? 0.0 : l * i / (o.samples - 1);
    located("s", s, [&] {
      const DarbouxData d = darboux_frame(c, s, kBlockOrder);
      const VariationBlocks b = variation_blocks(d.kg, d.kn, d.tg, d.sig, d.omega);
      const auto m = mu_derivatives(v, s);
      IntegrandSample smp;
      smp.s = s;
      smp.mu = m[0];
      smp.integrand = e1 * fl * fl * m[0] * d.kappa_g(0);
      for (int k = 0; k < 4; ++k) smp.integrand += m[k] * b.A[k].value();
      smp.euler_lagrange = e1 * fl * fl * d.kappa_g(0) + b.A[0].value() - b.A[1].partial(1) +
                           b.A[2].partial(2) - b.A[3].partial(3);
      r.samples.push_back(smp);
      return 0;
    });
  }
  return r;
}

}  // namespace elastica
