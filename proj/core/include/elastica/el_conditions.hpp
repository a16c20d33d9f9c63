#pragma once

#include <array>
#include <string>
#include <vector>

#include "elastica/curve.hpp"

namespace elastica {

enum class Verdict { Extremal, NotExtremal, Inconclusive };
std::string to_string(Verdict v);

struct ResidualSample {
  double s, residual, f, kappa_g, kappa_n, tau_g;
};

struct ELOptions {
  int grid = 257;
  double tol_residual = 1e-6;  // on the normalized sup-residual
  double tol_bc = 1e-8;
};

struct ELReport {
  CaseSignature sig{1, 1, -1};
  std::string branch;
  std::vector<ResidualSample> samples;
  double residual_sup = 0.0;   // sup |E| over the grid
  double normalization = 1.0;  // 1 + sup|f|^3 + sup|kg|^3 + sup|kn|^3 + sup|tg|^3
  double residual_norm = 0.0;  // residual_sup / normalization
  // mu(l) block, mu'(l) block, f(l), f(0)
  std::array<double, 4> bc{};
  // coefficients of mu''(l) and mu''(0); proportional to f(l) and f(0)
  std::array<double, 2> second_derivative_coeff{};
  Verdict verdict = Verdict::Inconclusive;
  ELOptions options;
  std::string note;  // reason for an inconclusive verdict
};

// The Euler-Lagrange expression
//   E = eps1 f(l)^2 kg + A0 - A1' + A2'' - A3'''
// at each grid point. Where the curvature jet vanishes identically the arc
// is locally straight and every block is zero. Throws IndefiniteDenominator
// elsewhere on eps2 kg^2 + eps3 kn^2 = 0.
std::vector<ResidualSample> el_residual(const SurfaceCurve& c, const std::vector<double>& s_grid);

// BC1 = A1 - A2' + A3'' and BC2 = A2 - A3' at l, BC3 = f(l), BC4 = f(0).
std::array<double, 4> boundary_conditions(const SurfaceCurve& c);

// Never throws on degeneracies; they become an Inconclusive verdict.
ELReport classify(const SurfaceCurve& c, const ELOptions& o = {});

std::vector<double> uniform_grid(double length, int points);

// Printed differential equations, for identity checks against the
// signature-substituted general form.
//   general: eps1 kg f(l)^2 + A0 - A1' + A2'' - A3''' with the restated A1
//   spacelike surface: the (+1, +1, -1) transcription; r0_tau_coefficient
//     is the coefficient of kn tg' inside its R0 bracket (printed as -1)
//   timelike arc: the (-1, +1, +1) transcription
double printed_general_residual(const SurfaceCurve& c, double s, double f_l);
double printed_spacelike_surface_residual(const SurfaceCurve& c, double s, double f_l,
                                          double r0_tau_coefficient = -1.0);
double printed_timelike_arc_residual(const SurfaceCurve& c, double s, double f_l);

}  // namespace elastica
