#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "elastica/curve.hpp"
#include "elastica/expr.hpp"

namespace elastica {

enum class BumpKind { Polynomial, SineSquared, Custom };

struct BumpParams {
  BumpKind kind = BumpKind::Polynomial;
  double length = 1.0;
  int power = 1;           // k in s^2 (l - s)^k
  std::string expression;  // custom mu(s)
  double scale = 1.0;
  double margin = 0.1;     // l* = l (1 + margin)
};

struct VariationSpec {
  std::string name;
  Expr mu;  // in s
  double margin = 0.1;
};

// Throws ConstraintViolation unless mu(0) = mu'(0) = 0 and mu is not
// identically zero on [0, l].
VariationSpec make_bump(const BumpParams& p, std::string name = "mu");

Jet2 mu_jet(const VariationSpec& v, double s, int order);
// mu, mu', mu'', mu''' at s
std::array<double, 4> mu_derivatives(const VariationSpec& v, double s);

// beta(sigma; t) = x(u + t eta, v + t zeta) with eta x_u + zeta x_v = mu Q,
// as a jet of orders (4, 1) at (sigma, t = 0).
JetVec3 beta_jet(const SurfaceCurve& c, const VariationSpec& v, double sigma);

// Coefficients on the Darboux frame: X = T T + Q Q + n n.
struct FrameComponents {
  double T = 0.0, Q = 0.0, n = 0.0;
};

FrameComponents components(const DarbouxData& d, const MVec3& x);
MVec3 assemble(const DarbouxData& d, const FrameComponents& c);

enum class FormulaVariant { Printed, Corrected };

// Frame expansions of the mixed partials of beta at t = 0.
struct ClosedFormJets {
  FrameComponents b_ss;    // d2/dsigma2
  FrameComponents b_ts;    // d2/dt dsigma
  FrameComponents b_sss;   // d3/dsigma3
  FrameComponents b_tss;   // d3/dt dsigma2
  FrameComponents b_tsss;  // d4/dt dsigma3
};

// The printed variant keeps the expansions as originally stated; the corrected
// variant fixes two rows of d3/dt dsigma2.
ClosedFormJets closed_form_jets(const DarbouxData& d, const std::array<double, 4>& mu,
                                FormulaVariant variant = FormulaVariant::Corrected);

// The same five partials read off beta_jet, on the same frame.
ClosedFormJets jet_partials(const SurfaceCurve& c, const VariationSpec& v, double sigma,
                            const DarbouxData& d);

// ---------------------------------------------------------------------------
// First-variation blocks.
//
// H'(0) = eps1 f(l)^2 int mu kg + int (mu A0 + mu' A1 + mu'' A2 + mu''' A3).

struct VariationBlocks {
  Jet2 f;
  std::array<Jet2, 4> A;
};

// Derived from d/dt (N/D)^2 with N = [b_s, b_ss, b_sss] and
// D = <b_s,b_s><b_ss,b_ss> - <b_s,b_ss>^2, expanded on the frame.
// Invariant jets of order m give blocks of order m - 2.
VariationBlocks variation_blocks(const Jet2& kg, const Jet2& kn, const Jet2& tg,
                                 const CaseSignature& sig, double omega = -1.0);

// Printed grouping of the same quantity. Term indices for sign flips are
// listed by printed_term_names().
struct PrintedOptions {
  bool restated_a1 = false;  // 4 eps1 eps2 kn tg instead of 4 eps1 eps3 kn tg
  int flip = -1;             // index of a single term whose sign is reversed
};

std::vector<std::string> printed_term_names();

template <class S>
struct InvariantSeries {
  std::array<S, 3> kg, kn, tg;  // value, first and second derivative
};

template <class S>
struct PrintedBlocks {
  S f;
  std::array<S, 4> A;
  double first_term_sign = 1.0;
};

PrintedBlocks<double> printed_blocks(const InvariantSeries<double>& v, const CaseSignature& sig,
                                     const PrintedOptions& o = {});
PrintedBlocks<Jet2> printed_blocks(const InvariantSeries<Jet2>& v, const CaseSignature& sig,
                                   const PrintedOptions& o = {});
InvariantSeries<Jet2> invariant_series(const Jet2& kg, const Jet2& kn, const Jet2& tg);
InvariantSeries<double> invariant_values(const DarbouxData& d);

struct BoundaryTerms {
  std::array<double, 4> mu{};     // mu(l), mu'(l), mu''(l), mu''(0)
  std::array<double, 4> coeff{};  // their coefficients
};

// Blocks tabulated on Gauss-Legendre nodes over [0, l] so that H'(0) for
// many mu costs one pass over stored values.
class FirstVariationTable {
 public:
  explicit FirstVariationTable(std::shared_ptr<const SurfaceCurve> c, int panels = 64);

  const SurfaceCurve& curve() const { return *curve_; }
  double f_end() const { return f_l_; }
  double f_start() const { return f_0_; }
  // A_k and their first three derivatives at s = 0 and s = l.
  const std::array<std::array<double, 4>, 4>& end_blocks() const { return A_l_; }
  const std::array<std::array<double, 4>, 4>& start_blocks() const { return A_0_; }

  struct Integrals {
    double lambda_term = 0.0;          // eps1 f(l)^2 int mu kg
    std::array<double, 4> grouped{};   // int mu^(k) A_k
    double total = 0.0;
    double euler_lagrange = 0.0;       // int mu E
    double dlambda = 0.0;              // eps1 int mu kg
    double f2_mu_kg = 0.0;             // eps1 int f^2 mu kg
    int panels = 0;
  };
  // Derived blocks, doubling panels until the totals agree to 1e-10.
  Integrals integrals(const VariationSpec& v) const;
  // Printed blocks (values only), at the converged panel count of the
  // derived evaluation.
  double printed_total(const VariationSpec& v, const PrintedOptions& o = {}) const;
  // Printed integrated-by-parts form with the restated A1 and the printed
  // mu''(l), mu''(0) coefficients.
  double printed_ibp_total(const VariationSpec& v) const;
  BoundaryTerms boundary(const VariationSpec& v) const;
  BoundaryTerms printed_boundary(const VariationSpec& v) const;
  std::shared_ptr<const SurfaceCurve> curve_ptr() const { return curve_; }

 private:
  struct Node {
    double s, w;
    double kg, f, E, Ep;
    std::array<double, 4> A;
    InvariantSeries<double> inv;
  };
  struct Level {
    int panels;
    std::vector<Node> nodes;
  };
  const Level& level(int k) const;
  Level build(int panels) const;
  Integrals integrate_level(const Level& lv, const VariationSpec& v) const;
  std::shared_ptr<const SurfaceCurve> curve_;
  CaseSignature sig_{1, 1, -1};
  double f_l_ = 0.0, f_0_ = 0.0;
  std::array<std::array<double, 4>, 4> A_l_{}, A_0_{};
  std::array<std::array<double, 4>, 4> Ap_l_{}, Ap_0_{};  // printed, restated A1
  double pf_l_ = 0.0, pf_0_ = 0.0;                        // printed 2 f / delta^2
  int base_panels_;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<Level>> levels_;
};

// ---------------------------------------------------------------------------
// The two-parameter family and its length restriction.

enum class HMode {
  Parametric,  // int_0^lambda (N / D)^2 dsigma
  ArcLength,   // int_0^lambda tau^2 |b_s| dsigma
};

class VariationFamily {
 public:
  VariationFamily(std::shared_ptr<const SurfaceCurve> c, VariationSpec v, int panels = 64);

  double l_star() const { return l_star_; }
  int panels() const { return panels_; }
  // Arc length restriction: int_0^lambda |b_s(sigma; t)| dsigma = l.
  double lambda(double t) const;
  double H(double t, HMode mode = HMode::Parametric) const;

 private:
  struct Node {
    double sigma, w;
    std::array<Jet2, 2> uv;
    Jet2 eta, zeta;
  };
  struct Local {
    double speed, tau;
  };
  Node make_node(double sigma, double w) const;
  Local evaluate(const Node& nd, double t, bool with_tau = true) const;
  std::vector<Node> build(int panels) const;
  double tail(double t, double lambda, bool weight_tau, HMode mode) const;
  std::shared_ptr<const SurfaceCurve> curve_;
  VariationSpec spec_;
  double l_ = 0.0, l_star_ = 0.0;
  int panels_ = 64;
  std::vector<Node> nodes_;
};

double functional_H(const SurfaceCurve& c);

struct FdResult {
  double value;   // Richardson-extrapolated central difference
  double coarse;  // plain central difference at h
  double h;
  double window;
};

// Largest t in {0.05, 0.025, ...} with H(+-t) evaluable.
double probe_window(const VariationFamily& fam, double h_min);
FdResult dH_dt_fd(const VariationFamily& fam, double h = 1e-3, HMode mode = HMode::Parametric);
double dlambda_dt_fd(const VariationFamily& fam, double h = 1e-5);
// eps1 int_0^l mu kg ds; needs no torsion, so it also covers straight arcs.
double dlambda_dt_closed(const SurfaceCurve& c, const VariationSpec& v, int panels = 16);

struct IntegrandSample {
  double s, mu, integrand, euler_lagrange;
};

struct VariationReport {
  std::string case_label, branch;
  double dH_dt_closed = 0.0;       // derived grouped form
  double dH_dt_closed_ibp = 0.0;   // int mu E + boundary terms
  double dH_dt_printed = 0.0;      // printed grouped form
  double dH_dt_printed_ibp = 0.0;  // printed integrated-by-parts form
  double dH_dt_fd = 0.0;           // parametric H(t)
  double dH_dt_fd_true = 0.0;      // arc-length H(t)
  double dH_dt_closed_true = 0.0;
  double dlambda_dt_closed = 0.0, dlambda_dt_fd = 0.0;
  double lambda_term = 0.0;
  std::array<double, 4> grouped{};
  BoundaryTerms boundary, boundary_printed;
  double relative_gap = 0.0;
  double fd_step = 0.0, window = 0.0;
  int panels = 0;
  std::vector<IntegrandSample> samples;
};

struct VaryOptions {
  double fd_step = 1e-3;
  int panels = 64;
  int samples = 33;
};

VariationReport dH_dt_closed(std::shared_ptr<const SurfaceCurve> c, const VariationSpec& v,
                             const VaryOptions& o = {});
// Same report reusing a prebuilt table.
VariationReport dH_dt_closed(const FirstVariationTable& table, const VariationSpec& v,
                             const VaryOptions& o = {});

}  // namespace elastica
