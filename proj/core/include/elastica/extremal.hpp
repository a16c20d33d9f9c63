#pragma once

#include <memory>
#include <string>
#include <vector>

#include "elastica/curve.hpp"
#include "elastica/spline.hpp"

namespace elastica {

// A curve of prescribed length on a patch, as a clamped spline in the chart.
// nodes are the N + 1 control points of the finest spline: nodes[0] is the
// initial point and nodes[1] - nodes[0] points along the initial direction.
//
// levels, when present, hold the same spline as a sum of splines on nested
// breakpoints, coarse first. Sixth derivatives amplify coefficient rounding
// roughly by h^-6, so keeping the fine levels as small corrections is what
// lets the Euler-Lagrange check read meaningful jets at large N. nodes is
// then a rounded flattening of the levels.
struct DiscreteCurve {
  std::shared_ptr<const SurfacePatch> patch;
  std::vector<Point2> nodes;
  int degree = 7;
  double length = 0.0;
  std::vector<BSplinePath> levels;

  int N() const { return static_cast<int>(nodes.size()) - 1; }
  Point2 start() const { return nodes.front(); }
  // Unit (Euclidean) initial direction in the chart.
  Point2 direction() const;
  std::shared_ptr<const CurvePath> path() const;
  // The spline on its full parameter range p in [0, 1].
  std::shared_ptr<const SurfaceCurve> surface_curve() const;
  double spline_length() const;
};

// Breakpoints of a level with the given span count, chosen among the uniform
// breakpoints of the finest level.
std::vector<double> nested_breakpoints(int fine_spans, int spans);

struct DiscretizeOptions {
  int N = 200;
  int degree = 7;
  // Node counts of the coarser levels; entries >= N are dropped.
  std::vector<int> schedule{10, 25, 50, 100};
  int samples_per_node = 4;
};

// Fits the arc of u(s), v(s) (any regular parameter s from 0) with the given
// length.
DiscreteCurve discretize(std::shared_ptr<const SurfacePatch> patch, const Expr& u, const Expr& v,
                         double length, const DiscretizeOptions& o = {});
// Multilevel refit of a node-only curve.
DiscreteCurve with_levels(const DiscreteCurve& c, const std::vector<int>& schedule = {10, 25, 50, 100});
// Least-squares flattening of a multilevel spline onto its finest level.
std::vector<Point2> flatten(const std::vector<BSplinePath>& levels, Point2 start, Point2 direction);

enum class MinimizeMethod {
  // Levenberg-Marquardt on the residuals tau sqrt(|alpha'|) at the quadrature
  // nodes plus sqrt(w) (L - l), one level at a time, coarse first.
  LevenbergMarquardt,
  // Parabolic coordinate steps with adaptive step sizes and pattern moves.
  Coordinate,
};

struct MinimizeOptions {
  MinimizeMethod method = MinimizeMethod::LevenbergMarquardt;
  double penalty = 1.0;  // initial weight w of w (L - l)^2
  double penalty_growth = 10.0;
  int outer_loops = 8;
  int max_sweeps = 4000;          // sweeps or Levenberg-Marquardt iterations
  int max_sweeps_per_stage = 600;
  double rel_tol = 1e-10;        // relative decrease of the objective over one iteration
  double violation_tol = 1e-7;   // |L - l| / l at which the penalty stops ramping
  int quadrature = 8;            // Gauss-Legendre nodes per finest span
  // Weight mu of mu * sum w_q (d|alpha'|/dp)^2 in the Levenberg-Marquardt
  // objective. Tangential node motion leaves H unchanged and can accumulate
  // into large parameter derivatives; the term damps it.
  double speed_regularization = 0.0;
  bool coarse_to_fine = true;
};

struct MinimizeLogRow {
  int iteration, outer, stage;
  double H, weight, objective, violation;
};

struct MinimizeResult {
  DiscreteCurve curve;
  double H_value = 0.0;
  double H_initial = 0.0;
  int iterations = 0;
  bool converged = false;
  double violation = 0.0;  // |L - l| / l
  int rejected_steps = 0;  // trial steps that hit a degenerate point
  std::string status;      // "converged" or "MaxIterations"
  std::vector<MinimizeLogRow> log;
};

// Descent on H + w (L - l)^2 over all control points except the anchored
// first two, whose ray keeps the initial direction. Every accepted step
// lowers the objective; steps that reach a null tangent or a degenerate
// osculating plane are rejected.
MinimizeResult minimize_H(const DiscreteCurve& init, const MinimizeOptions& o = {});

// H and L of the spline by the same quadrature the solver uses.
struct DiscreteFunctional {
  double H, L;
};
DiscreteFunctional discrete_functional(const DiscreteCurve& c, int quadrature = 8);

}  // namespace elastica
