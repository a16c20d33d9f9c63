#include "elastica/el_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "elastica/errors.hpp"
#include "elastica/parallel.hpp"
#include "elastica/variation.hpp"

namespace elastica {

namespace {

constexpr int kInvariantOrder = 5;
constexpr double kStraightTolerance = 1e-10;

template <class F>
auto located(const char* name, double value, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (NumericalError& e) {
    e.locate(name, value);
    throw;
  }
}

struct Local {
  double f = 0.0, kg = 0.0, kn = 0.0, tg = 0.0;
  double delta = 0.0;  // eps2 kg^2 + eps3 kn^2
  // A[k][j]: j-th derivative of block k
  std::array<std::array<double, 4>, 4> A{};
  int eps1 = 1;
};

bool straight(const DarbouxData& d) {
  for (int k = 0; k <= 3; ++k)
    if (std::fabs(d.kappa_g(k)) > kStraightTolerance ||
        std::fabs(d.kappa_n(k)) > kStraightTolerance)
      return false;
  return true;
}

Local local_blocks(const SurfaceCurve& c, double s) {
  return located("s", s, [&] {
    const DarbouxData d = darboux_frame(c, s, kInvariantOrder);
    Local r;
    r.kg = d.kappa_g(0);
    r.kn = d.kappa_n(0);
    r.tg = d.tau_g(0);
    r.eps1 = d.sig.eps1();
    r.delta = d.sig.eps2() * r.kg * r.kg + d.sig.eps3() * r.kn * r.kn;
    if (straight(d)) return r;
    const VariationBlocks b = variation_blocks(d.kg, d.kn, d.tg, d.sig, d.omega);
    r.f = b.f.value();
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) r.A[k][j] = b.A[k].partial(j);
    return r;
  });
}

double euler_lagrange(const Local& b, double f_l) {
  return b.eps1 * f_l * f_l * b.kg + b.A[0][0] - b.A[1][1] + b.A[2][2] - b.A[3][3];
}

struct Series {
  Jet2 g, g1, n, n1, t, t1, t2;
};

Series series(const SurfaceCurve& c, double s) {
  const DarbouxData d = darboux_frame(c, s, kInvariantOrder);
  const InvariantSeries<Jet2> v = invariant_series(d.kg, d.kn, d.tg);
  return {v.kg[0], v.kg[1], v.kn[0], v.kn[1], v.tg[0], v.tg[1], v.tg[2]};
}

void check_delta(const Jet2& delta) {
  if (std::fabs(delta.value()) < kDenominatorTolerance)
    throw IndefiniteDenominator("printed differential equation",
                                "eps2 kappa_g^2 + eps3 kappa_n^2 vanishes");
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Extremal: return "Extremal";
    case Verdict::NotExtremal: return "NotExtremal";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<double> uniform_grid(double length, int points) {
  if (points < 2) throw InputError("grid needs at least two points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = length * i / (points - 1);
  g.back() = length;
  return g;
}

std::vector<ResidualSample> el_residual(const SurfaceCurve& c, const std::vector<double>& s_grid) {
  const double f_l = local_blocks(c, c.length()).f;
  std::vector<ResidualSample> out(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) {
    const double s = s_grid[i];
    const Local b = local_blocks(c, s);
    out[i] = {s, euler_lagrange(b, f_l), b.f, b.kg, b.kn, b.tg};
  });
  return out;
}

std::array<double, 4> boundary_conditions(const SurfaceCurve& c) {
  const Local e = local_blocks(c, c.length());
  const Local z = local_blocks(c, 0.0);
  return {e.A[1][0] - e.A[2][1] + e.A[3][2], e.A[2][0] - e.A[3][1], e.f, z.f};
}

ELReport classify(const SurfaceCurve& c, const ELOptions& o) {
  ELReport r;
  r.options = o;
  r.branch = c.cross_branch();
  const std::vector<double> grid = uniform_grid(c.length(), o.grid);
  try {
    r.sig = darboux_frame(c, 0.0, 1).sig;
  } catch (const NumericalError& e) {
    r.note = e.what();
    return r;
  }

  double f_l = 0.0;
  bool ok = true;
  try {
    const Local e = local_blocks(c, c.length());
    const Local z = local_blocks(c, 0.0);
    f_l = e.f;
    r.bc = {e.A[1][0] - e.A[2][1] + e.A[3][2], e.A[2][0] - e.A[3][1], e.f, z.f};
    r.second_derivative_coeff = {e.A[3][0], -z.A[3][0]};
  } catch (const NumericalError& e) {
    ok = false;
    r.note = e.what();
  }

  std::vector<std::optional<ResidualSample>> slots(grid.size());
  std::vector<std::string> errors(grid.size());
  std::vector<double> delta(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      const Local b = local_blocks(c, grid[i]);
      delta[i] = b.delta;
      slots[i] = ResidualSample{grid[i], euler_lagrange(b, f_l), b.f, b.kg, b.kn, b.tg};
    } catch (const NumericalError& e) {
      errors[i] = e.what();
    }
  });
  double sf = 0.0, sg = 0.0, sn = 0.0, st = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!slots[i]) {
      if (ok) r.note = errors[i];
      ok = false;
      continue;
    }
    // a sign change between neighbours means the singular locus lies on the grid interval
    if (ok && i > 0 && slots[i - 1] && delta[i] * delta[i - 1] < 0.0) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "eps2 kappa_g^2 + eps3 kappa_n^2 changes sign between s=%.12e and s=%.12e",
                    grid[i - 1], grid[i]);
      r.note = buf;
      ok = false;
    }
    const ResidualSample& x = *slots[i];
    r.samples.push_back(x);
    r.residual_sup = std::max(r.residual_sup, std::fabs(x.residual));
    sf = std::max(sf, std::fabs(x.f));
    sg = std::max(sg, std::fabs(x.kappa_g));
    sn = std::max(sn, std::fabs(x.kappa_n));
    st = std::max(st, std::fabs(x.tau_g));
  }
  r.normalization = 1.0 + sf * sf * sf + sg * sg * sg + sn * sn * sn + st * st * st;
  r.residual_norm = r.residual_sup / r.normalization;
  if (!ok) {
    r.verdict = Verdict::Inconclusive;
    return r;
  }
  bool pass = r.residual_norm <= o.tol_residual;
  for (double b : r.bc) pass = pass && std::fabs(b) <= o.tol_bc;
  r.verdict = pass ? Verdict::Extremal : Verdict::NotExtremal;
  return r;
}

double printed_general_residual(const SurfaceCurve& c, double s, double f_l) {
  return located("s", s, [&] {
    const DarbouxData d = darboux_frame(c, s, kInvariantOrder);
    PrintedOptions o;
    o.restated_a1 = true;
    const auto p = printed_blocks(invariant_series(d.kg, d.kn, d.tg), d.sig, o);
    return d.sig.eps1() * d.kappa_g(0) * f_l * f_l + p.A[0].value() - p.A[1].partial(1) +
           p.A[2].partial(2) - p.A[3].partial(3);
  });
}

double printed_spacelike_surface_residual(const SurfaceCurve& c, double s, double f_l,
                                          double r0_tau_coefficient) {
  return located("s", s, [&] {
    const Series x = series(c, s);
    const Jet2 &g = x.g, &g1 = x.g1, &n = x.n, &n1 = x.n1, &t = x.t, &t1 = x.t1, &t2 = x.t2;
    const Jet2 delta = g * g - n * n;
    check_delta(delta);
    const Jet2 F = g * (n1 + g * t) - n * (g1 + n * t);
    const Jet2 f = F / delta;
    const Jet2 P0 = -3.0 * g * g * n1 - 3.0 * g * g * g * t + 3.0 * g * g1 * n +
                    2.0 * g * n * n * t + g * g * g * g - g * g * n * n - n1 * t * t - g1 * t1 +
                    4.0 * n * t * t1 + g * t2 + g * n * n * t;
    const Jet2 R0 = -4.0 * g * g * g + 4.0 * g * n * n + 2.0 * g * t * t + r0_tau_coefficient * n * t1;
    const Jet2 P1 = -4.0 * g * g * n - n * n * n - 2.0 * g1 * t + 2.0 * n * t * t + 3.0 * g * t1 +
                    3.0 * g * g * n + 3.0 * n * t * t;
    const Jet2 P2 = n1 + 4.0 * g * t;
    const Jet2 pre = 2.0 * f / (delta * delta);
    const Jet2 B0 = pre * (delta * P0 - F * R0);
    const Jet2 B1 = pre * (delta * P1 - 4.0 * n * t * F);
    const Jet2 B2 = pre * (delta * P2 - 2.0 * g * F);
    const Jet2 B3 = 2.0 * n * f / (delta * delta);
    return g.value() * f_l * f_l + B0.value() - B1.partial(1) + B2.partial(2) + B3.partial(3);
  });
}

double printed_timelike_arc_residual(const SurfaceCurve& c, double s, double f_l) {
  return located("s", s, [&] {
    const Series x = series(c, s);
    const Jet2 &g = x.g, &g1 = x.g1, &n = x.n, &n1 = x.n1, &t = x.t, &t1 = x.t1, &t2 = x.t2;
    const Jet2 delta = g * g + n * n;
    check_delta(delta);
    const Jet2 D = -1.0 * delta;
    const Jet2 F = -1.0 * g * (n1 + g * t) + n * (g1 - n * t);
    const Jet2 f = (g * (n1 + g * t) - n * (g1 - n * t)) / delta;
    const Jet2 P0 = -3.0 * g * g * n1 - 3.0 * g * g * g * t + 3.0 * g * g1 * n -
                    2.0 * g * n * n * t + g * g * g * g + g * g * n * n - n1 * t * t + g1 * t1 +
                    4.0 * n * t * t1 - g * t2 - g * n * n * t;
    const Jet2 R0 = -4.0 * g * g * g - 4.0 * g * n * n + 2.0 * g * t * t - 2.0 * n * t1;
    const Jet2 P1 = -4.0 * g * g * n + n * n * n + 2.0 * g1 * t + 2.0 * n * t * t - 3.0 * g * t1 +
                    3.0 * g * g * n + 3.0 * n * t * t;
    const Jet2 P2 = -1.0 * n1 - 4.0 * g * t;
    const Jet2 pre = 2.0 * f / (delta * delta);
    const Jet2 B0 = pre * (D * P0 - F * R0);
    const Jet2 B1 = pre * (D * P1 + 4.0 * n * t * F);
    const Jet2 B2 = pre * (D * P2 + 2.0 * g * F);
    const Jet2 B3 = 2.0 * n * f / (delta * delta);
    return -g.value() * f_l * f_l + B0.value() - B1.partial(1) + B2.partial(2) - B3.partial(3);
  });
}

}  // namespace elastica
