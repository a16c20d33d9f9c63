#include "elastica/spline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "elastica/errors.hpp"

namespace elastica {

namespace {
constexpr int kMaxDegree = 7;
}

std::vector<double> uniform_breakpoints(int spans) {
  std::vector<double> b(spans + 1);
  for (int j = 0; j <= spans; ++j) b[j] = static_cast<double>(j) / spans;
  return b;
}

BSplinePath::BSplinePath(int degree, std::vector<Point2> control)
    : BSplinePath(degree, control,
                  uniform_breakpoints(std::max(1, static_cast<int>(control.size()) - degree))) {}

BSplinePath::BSplinePath(int degree, std::vector<Point2> control, std::vector<double> breakpoints)
    : degree_(degree), ctrl_(std::move(control)), breaks_(std::move(breakpoints)) {
  if (degree < 1 || degree > kMaxDegree)
    throw InputError("spline degree must lie in 1.." + std::to_string(kMaxDegree));
  if (static_cast<int>(ctrl_.size()) < degree + 1)
    throw InputError("spline needs at least degree + 1 control points");
  spans_ = static_cast<int>(ctrl_.size()) - degree;
  if (static_cast<int>(breaks_.size()) != spans_ + 1 || breaks_.front() != 0.0 ||
      breaks_.back() != 1.0)
    throw InputError("spline breakpoints must run from 0 to 1 with one entry per span boundary");
  for (int j = 0; j < spans_; ++j)
    if (!(breaks_[j] < breaks_[j + 1])) throw InputError("spline breakpoints must increase");
}

double BSplinePath::knot(int i) const {
  if (i <= degree_) return 0.0;
  if (i >= degree_ + spans_) return 1.0;
  return breaks_[i - degree_];
}

int BSplinePath::span(double p) const {
  const int j = static_cast<int>(std::upper_bound(breaks_.begin(), breaks_.end(), p) -
                                 breaks_.begin()) - 1;
  return std::clamp(j, 0, spans_ - 1);
}

// Basis functions and derivatives by the triangular recurrence of Cox and de Boor.
void BSplinePath::basis(int j, double p, int k, double* ders) const {
  const int d = degree_, i = d + j;
  const int n = std::min(k, d);
  double ndu[kMaxDegree + 1][kMaxDegree + 1];
  double left[kMaxDegree + 1], right[kMaxDegree + 1];
  double a[2][kMaxDegree + 1];
  ndu[0][0] = 1.0;
  for (int q = 1; q <= d; ++q) {
    left[q] = p - knot(i + 1 - q);
    right[q] = knot(i + q) - p;
    double saved = 0.0;
    for (int r = 0; r < q; ++r) {
      ndu[q][r] = right[r + 1] + left[q - r];
      const double temp = ndu[r][q - 1] / ndu[q][r];
      ndu[r][q] = saved + right[r + 1] * temp;
      saved = left[q - r] * temp;
    }
    ndu[q][q] = saved;
  }
  const int w = d + 1;
  std::fill(ders, ders + (k + 1) * w, 0.0);
  for (int q = 0; q <= d; ++q) ders[q] = ndu[q][d];
  for (int r = 0; r <= d; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int m = 1; m <= n; ++m) {
      double acc = 0.0;
      const int rk = r - m, pk = d - m;
      if (r >= m) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        acc = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? m - 1 : d - r;
      for (int q = j1; q <= j2; ++q) {
        a[s2][q] = (a[s1][q] - a[s1][q - 1]) / ndu[pk + 1][rk + q];
        acc += a[s2][q] * ndu[rk + q][pk];
      }
      if (r <= pk) {
        a[s2][m] = -a[s1][m - 1] / ndu[pk + 1][r];
        acc += a[s2][m] * ndu[r][pk];
      }
      ders[m * w + r] = acc;
      std::swap(s1, s2);
    }
  }
  double f = d;
  for (int m = 1; m <= n; ++m) {
    for (int q = 0; q <= d; ++q) ders[m * w + q] *= f;
    f *= d - m;
  }
}

void BSplinePath::derivatives(int j, double p, int k, Point2* out) const {
  const int w = degree_ + 1;
  double ders[(kMaxDegree + 2) * (kMaxDegree + 1)];
  const int kk = std::min(k, kMaxDegree + 1);
  basis(j, p, kk, ders);
  for (int m = 0; m <= k; ++m) {
    out[m] = {0.0, 0.0};
    if (m > kk) continue;
    for (int q = 0; q < w; ++q) {
      const Point2& c = ctrl_[j + q];
      out[m][0] += ders[m * w + q] * c[0];
      out[m][1] += ders[m * w + q] * c[1];
    }
  }
}

void BSplinePath::derivatives(double p, int k, Point2* out) const {
  derivatives(span(p), p, k, out);
}

Point2 BSplinePath::point(double p) const {
  Point2 x;
  derivatives(p, 0, &x);
  return x;
}

std::array<Jet2, 2> BSplinePath::uv(double p, int order) const {
  Point2 d[Jet2::kMaxSigmaOrder + 1];
  derivatives(p, order, d);
  std::array<Jet2, 2> r{Jet2(order, 0), Jet2(order, 0)};
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    r[0].coeff(k) = d[k][0] / fact;
    r[1].coeff(k) = d[k][1] / fact;
  }
  return r;
}

SplineSum::SplineSum(std::vector<BSplinePath> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw InputError("spline sum needs at least one term");
}

void SplineSum::derivatives(double p, int k, Point2* out) const {
  Point2 d[Jet2::kMaxSigmaOrder + 1];
  for (int m = 0; m <= k; ++m) out[m] = {0.0, 0.0};
  for (const BSplinePath& t : terms_) {
    t.derivatives(p, k, d);
    for (int m = 0; m <= k; ++m) {
      out[m][0] += d[m][0];
      out[m][1] += d[m][1];
    }
  }
}

Point2 SplineSum::point(double p) const {
  Point2 x;
  derivatives(p, 0, &x);
  return x;
}

std::array<Jet2, 2> SplineSum::uv(double p, int order) const {
  std::array<Jet2, 2> r = terms_.front().uv(p, order);
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    const auto t = terms_[i].uv(p, order);
    r[0] += t[0];
    r[1] += t[1];
  }
  return r;
}

BSplinePath fit_anchored(int degree, int count, const std::vector<double>& p,
                         const std::vector<Point2>& x, Point2 c0, Point2 d0) {
  return fit_anchored(degree, uniform_breakpoints(std::max(1, count - degree)), p, x, c0, d0);
}

BSplinePath fit_anchored(int degree, const std::vector<double>& breakpoints,
                         const std::vector<double>& p, const std::vector<Point2>& x, Point2 c0,
                         Point2 d0) {
  if (p.size() != x.size()) throw InputError("fit_anchored: sample size mismatch");
  const int count = static_cast<int>(breakpoints.size()) - 1 + degree;
  std::vector<Point2> ctrl(count, c0);
  BSplinePath shape(degree, ctrl, breakpoints);
  const int w = degree + 1;
  const int unknowns = 1 + 2 * (count - 2);
  const int rows = 2 * static_cast<int>(p.size());
  if (rows < unknowns) throw InputError("fit_anchored: too few samples");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, unknowns);
  Eigen::VectorXd b(rows);
  std::vector<double> ders(w);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int j = shape.span(p[i]);
    shape.basis(j, p[i], 0, ders.data());
    for (int a = 0; a < 2; ++a) {
      const int row = 2 * static_cast<int>(i) + a;
      double rhs = x[i][a];
      for (int q = 0; q < w; ++q) {
        const int idx = j + q;
        const double B = ders[q];
        if (idx == 0) {
          rhs -= B * c0[a];
        } else if (idx == 1) {
          rhs -= B * c0[a];
          A(row, 0) += B * d0[a];
        } else {
          A(row, 1 + 2 * (idx - 2) + a) += B;
        }
      }
      b(row) = rhs;
    }
  }
  const Eigen::VectorXd z = A.colPivHouseholderQr().solve(b);
  ctrl[1] = {c0[0] + z(0) * d0[0], c0[1] + z(0) * d0[1]};
  for (int k = 2; k < count; ++k) ctrl[k] = {z(1 + 2 * (k - 2)), z(2 + 2 * (k - 2))};
  return BSplinePath(degree, std::move(ctrl), breakpoints);
}

}  // namespace elastica
