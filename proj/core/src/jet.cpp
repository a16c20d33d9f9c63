#include "elastica/jet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

void check_orders(int is, int jt) {
  if (is < 0 || is > Jet2::kMaxSigmaOrder || jt < 0 || jt > Jet2::kMaxTOrder)
    throw std::invalid_argument("Jet2: orders out of range");
}

}  // namespace

Jet2::Jet2(int sigma_order, int t_order) : is_(sigma_order), jt_(t_order) {
  check_orders(sigma_order, t_order);
}

Jet2 Jet2::constant(double value, int sigma_order, int t_order) {
  Jet2 r(sigma_order, t_order);
  r.c_[0] = value;
  return r;
}

Jet2 Jet2::seed(double value, double d_sigma, double d_t, int sigma_order, int t_order) {
  Jet2 r(sigma_order, t_order);
  r.c_[0] = value;
  if (sigma_order >= 1) r.c_[r.idx(1, 0)] = d_sigma;
  if (t_order >= 1) r.c_[r.idx(0, 1)] = d_t;
  return r;
}

double Jet2::coeff(int i, int j) const {
  if (i < 0 || i > is_ || j < 0 || j > jt_) throw std::out_of_range("Jet2::coeff");
  return c_[idx(i, j)];
}

double& Jet2::coeff(int i, int j) {
  if (i < 0 || i > is_ || j < 0 || j > jt_) throw std::out_of_range("Jet2::coeff");
  return c_[idx(i, j)];
}

double Jet2::partial(int i, int j) const { return coeff(i, j) * factorial(i) * factorial(j); }

Jet2 Jet2::truncated(int sigma_order, int t_order) const {
  if (sigma_order > is_ || t_order > jt_)
    throw std::invalid_argument("Jet2::truncated: cannot extend orders");
  Jet2 r(sigma_order, t_order);
  for (int i = 0; i <= sigma_order; ++i)
    for (int j = 0; j <= t_order; ++j) r.c_[idx(i, j)] = c_[idx(i, j)];
  return r;
}

Jet2 Jet2::padded(int sigma_order, int t_order) const {
  Jet2 r(sigma_order, t_order);
  for (int i = 0; i <= std::min(is_, sigma_order); ++i)
    for (int j = 0; j <= std::min(jt_, t_order); ++j) r.c_[idx(i, j)] = c_[idx(i, j)];
  return r;
}

Jet2 Jet2::d_sigma() const {
  if (is_ == 0) throw std::invalid_argument("Jet2::d_sigma: sigma order is zero");
  Jet2 r(is_ - 1, jt_);
  for (int i = 0; i < is_; ++i)
    for (int j = 0; j <= jt_; ++j) r.c_[idx(i, j)] = (i + 1) * c_[idx(i + 1, j)];
  return r;
}

Jet2 Jet2::t_slice(int j) const {
  if (j < 0 || j > jt_) throw std::out_of_range("Jet2::t_slice");
  Jet2 r(is_, 0);
  for (int i = 0; i <= is_; ++i) r.c_[idx(i, 0)] = c_[idx(i, j)];
  return r;
}

Jet2 Jet2::with_t(double dt_value) const {
  Jet2 r = padded(is_, 1);
  r.c_[idx(0, 1)] = dt_value;
  return r;
}

Jet2 Jet2::with_t(const Jet2& dt_part) const {
  const int is = std::min(is_, dt_part.is_);
  Jet2 r = truncated(is, 0).padded(is, 1);
  for (int i = 0; i <= is; ++i) r.c_[idx(i, 1)] = dt_part.c_[idx(i, 0)];
  return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  if (o.is_ < is_ || o.jt_ < jt_) *this = truncated(std::min(is_, o.is_), std::min(jt_, o.jt_));
  for (int i = 0; i <= is_; ++i)
    for (int j = 0; j <= jt_; ++j) c_[idx(i, j)] += o.c_[idx(i, j)];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  if (o.is_ < is_ || o.jt_ < jt_) *this = truncated(std::min(is_, o.is_), std::min(jt_, o.jt_));
  for (int i = 0; i <= is_; ++i)
    for (int j = 0; j <= jt_; ++j) c_[idx(i, j)] -= o.c_[idx(i, j)];
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) { return *this = *this * o; }
Jet2& Jet2::operator/=(const Jet2& o) { return *this = *this / o; }

Jet2& Jet2::operator*=(double k) {
  for (auto& x : c_) x *= k;
  return *this;
}

Jet2& Jet2::operator/=(double k) {
  if (k == 0.0) throw DomainError("jet division", "divisor is zero");
  for (auto& x : c_) x /= k;
  return *this;
}

std::string Jet2::to_string() const {
  std::string s = "[";
  char buf[48];
  for (int i = 0; i <= is_; ++i) {
    if (i) s += "; ";
    for (int j = 0; j <= jt_; ++j) {
      std::snprintf(buf, sizeof buf, "%s%.6g", j ? ", " : "", c_[idx(i, j)]);
      s += buf;
    }
  }
  return s + "]";
}

Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
Jet2 operator-(Jet2 a) { return a *= -1.0; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
  const int is = std::min(a.is_, b.is_), jt = std::min(a.jt_, b.jt_);
  Jet2 r(is, jt);
  for (int i = 0; i <= is; ++i)
    for (int j = 0; j <= jt; ++j) {
      double acc = 0.0;
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) acc += a.c_[a.idx(p, q)] * b.c_[b.idx(i - p, j - q)];
      r.c_[r.idx(i, j)] = acc;
    }
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double b0 = b.c_[0];
  if (b0 == 0.0 || !std::isfinite(b0))
    throw DomainError("jet division", "divisor has zero constant term");
  const int is = std::min(a.is_, b.is_), jt = std::min(a.jt_, b.jt_);
  Jet2 r(is, jt);
  for (int i = 0; i <= is; ++i)
    for (int j = 0; j <= jt; ++j) {
      double acc = a.c_[a.idx(i, j)];
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          if (p == i && q == j) continue;
          acc -= r.c_[r.idx(p, q)] * b.c_[b.idx(i - p, j - q)];
        }
      r.c_[r.idx(i, j)] = acc / b0;
    }
  return r;
}

Jet2 operator/(double k, const Jet2& a) {
  return Jet2::constant(k, a.sigma_order(), a.t_order()) / a;
}

Jet2 compose(const Jet2& a, const double* taylor) {
  const int n = a.is_ + a.jt_;
  Jet2 d = a;
  d.c_[0] = 0.0;
  Jet2 r = Jet2::constant(taylor[n], a.is_, a.jt_);
  for (int k = n - 1; k >= 0; --k) {
    r = r * d;
    r.c_[0] += taylor[k];
  }
  return r;
}

namespace {

constexpr int kMaxTerms = Jet2::kMaxSigmaOrder + Jet2::kMaxTOrder + 1;

int terms(const Jet2& a) { return a.sigma_order() + a.t_order() + 1; }

// Taylor coefficients f^(k)(x)/k! given the 4-periodic or 2-periodic derivative cycle.
template <class Cycle>
Jet2 compose_cycle(const Jet2& a, Cycle derivative) {
  double t[kMaxTerms];
  for (int k = 0; k < terms(a); ++k) t[k] = derivative(k) / factorial(k);
  return compose(a, t);
}

}  // namespace

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cyc[4] = {s, c, -s, -c};
  return compose_cycle(a, [&](int k) { return cyc[k % 4]; });
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cyc[4] = {c, -s, -c, s};
  return compose_cycle(a, [&](int k) { return cyc[k % 4]; });
}

Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return compose_cycle(a, [&](int k) { return k % 2 ? c : s; });
}

Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return compose_cycle(a, [&](int k) { return k % 2 ? s : c; });
}

Jet2 tanh(const Jet2& a) { return sinh(a) / cosh(a); }

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return compose_cycle(a, [&](int) { return e; });
}

Jet2 log(const Jet2& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log", "argument is not positive");
  double t[kMaxTerms];
  t[0] = std::log(x);
  double p = 1.0;
  for (int k = 1; k < terms(a); ++k) {
    p *= x;
    t[k] = (k % 2 ? 1.0 : -1.0) / (k * p);
  }
  return compose(a, t);
}

Jet2 sqrt(const Jet2& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("sqrt", "argument is not positive");
  double t[kMaxTerms];
  // generalized binomial coefficients of (x + d)^(1/2)
  double binom = 1.0;
  t[0] = std::sqrt(x);
  for (int k = 1; k < terms(a); ++k) {
    binom *= (0.5 - (k - 1)) / k;
    t[k] = binom * t[0] / std::pow(x, k);
  }
  return compose(a, t);
}

Jet2 pow(const Jet2& a, int n) {
  if (n < 0) return 1.0 / pow(a, -n);
  Jet2 r = Jet2::constant(1.0, a.sigma_order(), a.t_order());
  Jet2 base = a;
  while (n > 0) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

JetVec3 d_sigma(const JetVec3& v) { return {v.x0.d_sigma(), v.x1.d_sigma(), v.x2.d_sigma()}; }

JetVec3 t_slice(const JetVec3& v, int j) {
  return {v.x0.t_slice(j), v.x1.t_slice(j), v.x2.t_slice(j)};
}

JetVec3 truncated(const JetVec3& v, int sigma_order, int t_order) {
  return {v.x0.truncated(sigma_order, t_order), v.x1.truncated(sigma_order, t_order),
          v.x2.truncated(sigma_order, t_order)};
}

MVec3 partial(const JetVec3& v, int i, int j) {
  return {v.x0.partial(i, j), v.x1.partial(i, j), v.x2.partial(i, j)};
}

JetVec3 lift(const MVec3& v, int sigma_order, int t_order) {
  return {Jet2::constant(v.x0, sigma_order, t_order), Jet2::constant(v.x1, sigma_order, t_order),
          Jet2::constant(v.x2, sigma_order, t_order)};
}

}  // namespace elastica
