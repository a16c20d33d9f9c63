#pragma once

#include <array>
#include <string>

#include "elastica/minkowski.hpp"

namespace elastica {

// Truncated bivariate Taylor polynomial in (sigma, t):
//   c(i, j) = d^{i+j} f / dsigma^i dt^j / (i! j!)  at the expansion point.
// Orders are fixed per instance. Binary operations on jets of unequal
// orders truncate to the smaller order in each variable.
class Jet2 {
 public:
  static constexpr int kMaxSigmaOrder = 8;
  static constexpr int kMaxTOrder = 1;
  static constexpr int kDefaultSigmaOrder = 4;
  static constexpr int kDefaultTOrder = 1;

  Jet2() : Jet2(kDefaultSigmaOrder, kDefaultTOrder) {}
  Jet2(int sigma_order, int t_order);

  static Jet2 constant(double value, int sigma_order = kDefaultSigmaOrder,
                       int t_order = kDefaultTOrder);
  // value + d_sigma * (sigma - sigma0) + d_t * t
  static Jet2 seed(double value, double d_sigma, double d_t,
                   int sigma_order = kDefaultSigmaOrder, int t_order = kDefaultTOrder);

  int sigma_order() const { return is_; }
  int t_order() const { return jt_; }

  double coeff(int i, int j = 0) const;
  double& coeff(int i, int j = 0);
  double value() const { return c_[0]; }
  // Plain partial derivative d^{i+j}/dsigma^i dt^j (coefficient times i! j!).
  double partial(int i, int j = 0) const;

  Jet2 truncated(int sigma_order, int t_order) const;
  // Same coefficients viewed at larger orders; the new slots are zero.
  // Only meaningful when the caller knows the omitted terms vanish.
  Jet2 padded(int sigma_order, int t_order) const;
  // d/dsigma; sigma order drops by one.
  Jet2 d_sigma() const;
  // Column j of the t-expansion as a sigma-only jet.
  Jet2 t_slice(int j) const;
  // Sigma-only jet promoted to t-order 1 with d/dt = dt_value (a constant).
  Jet2 with_t(double dt_value) const;
  // Sigma-only jet promoted to t-order 1 with d/dt given by a sigma jet.
  Jet2 with_t(const Jet2& dt_part) const;

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
  Jet2& operator+=(double k) { c_[0] += k; return *this; }
  Jet2& operator-=(double k) { c_[0] -= k; return *this; }
  Jet2& operator*=(double k);
  Jet2& operator/=(double k);

  std::string to_string() const;

 private:
  static constexpr int kStride = kMaxTOrder + 1;
  int idx(int i, int j) const { return i * kStride + j; }
  int is_, jt_;
  std::array<double, (kMaxSigmaOrder + 1) * (kMaxTOrder + 1)> c_{};

  friend Jet2 operator*(const Jet2&, const Jet2&);
  friend Jet2 operator/(const Jet2&, const Jet2&);
  friend Jet2 compose(const Jet2&, const double*);
};

Jet2 operator+(Jet2 a, const Jet2& b);
Jet2 operator-(Jet2 a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator-(Jet2 a);
inline Jet2 operator+(Jet2 a, double k) { return a += k; }
inline Jet2 operator+(double k, Jet2 a) { return a += k; }
inline Jet2 operator-(Jet2 a, double k) { return a -= k; }
inline Jet2 operator-(double k, const Jet2& a) { return -a + k; }
inline Jet2 operator*(Jet2 a, double k) { return a *= k; }
inline Jet2 operator*(double k, Jet2 a) { return a *= k; }
inline Jet2 operator/(Jet2 a, double k) { return a /= k; }
Jet2 operator/(double k, const Jet2& a);

// f(x0 + d) = sum_k taylor[k] d^k where d = a - a.value();
// taylor must hold sigma_order + t_order + 1 entries.
Jet2 compose(const Jet2& a, const double* taylor);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 sinh(const Jet2& a);
Jet2 cosh(const Jet2& a);
Jet2 tanh(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 pow(const Jet2& a, int n);

using JetVec3 = Vec3<Jet2>;

JetVec3 d_sigma(const JetVec3& v);
JetVec3 t_slice(const JetVec3& v, int j);
JetVec3 truncated(const JetVec3& v, int sigma_order, int t_order);
MVec3 partial(const JetVec3& v, int i, int j = 0);
JetVec3 lift(const MVec3& v, int sigma_order, int t_order);

}  // namespace elastica
