#pragma once

#include <array>
#include <vector>

#include "elastica/curve.hpp"

namespace elastica {

using Point2 = std::array<double, 2>;

// Clamped B-spline in the (u, v) chart on p in [0, 1]. Interior knots are
// simple and uniform unless breakpoints 0 = b0 < b1 < ... < bm = 1 are given.
// Outside [0, 1] the end polynomial pieces are continued.
class BSplinePath : public CurvePath {
 public:
  BSplinePath(int degree, std::vector<Point2> control);
  BSplinePath(int degree, std::vector<Point2> control, std::vector<double> breakpoints);

  int degree() const { return degree_; }
  int spans() const { return spans_; }
  const std::vector<Point2>& control() const { return ctrl_; }

  // Span index of p, clamped to the first and last span.
  int span(double p) const;
  double span_start(int j) const { return breaks_[j]; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  // Derivatives 0..k of (u, v) at p, written to out[0..k].
  void derivatives(double p, int k, Point2* out) const;
  // Same, on a given span (for evaluation at knots from one side).
  void derivatives(int j, double p, int k, Point2* out) const;
  Point2 point(double p) const;

  std::array<Jet2, 2> uv(double p, int order) const override;

  // Values and derivatives of the degree+1 basis functions that are nonzero
  // on span j; ders[r * (degree + 1) + i] is the r-th derivative of the
  // basis function with control index j + i.
  void basis(int j, double p, int k, double* ders) const;

 private:
  double knot(int i) const;
  int degree_, spans_;
  std::vector<Point2> ctrl_;
  std::vector<double> breaks_;
};

// Sum of splines, for multilevel representations whose breakpoints nest.
class SplineSum : public CurvePath {
 public:
  explicit SplineSum(std::vector<BSplinePath> terms);
  const std::vector<BSplinePath>& terms() const { return terms_; }
  void derivatives(double p, int k, Point2* out) const;
  Point2 point(double p) const;
  std::array<Jet2, 2> uv(double p, int order) const override;

 private:
  std::vector<BSplinePath> terms_;
};

// Least-squares fit of count control points to samples x(p_i) with the first
// control point fixed to c0 and the second on the ray c0 + r d0.
BSplinePath fit_anchored(int degree, const std::vector<double>& breakpoints,
                         const std::vector<double>& p, const std::vector<Point2>& x, Point2 c0,
                         Point2 d0);
BSplinePath fit_anchored(int degree, int count, const std::vector<double>& p,
                         const std::vector<Point2>& x, Point2 c0, Point2 d0);

std::vector<double> uniform_breakpoints(int spans);

}  // namespace elastica
