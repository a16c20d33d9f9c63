#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace elastica {

// Classification band on <v,v> for unit-magnitude inputs.
inline constexpr double kCausalTolerance = 1e-10;

// Three components under the index-1 metric, x0 being the timelike slot.
// S is double for plain vectors and Jet2 for Taylor-expanded vectors.
template <class S>
struct Vec3 {
  S x0{}, x1{}, x2{};

  Vec3() = default;
  Vec3(S a, S b, S c) : x0(std::move(a)), x1(std::move(b)), x2(std::move(c)) {
    if constexpr (std::is_floating_point_v<S>) {
      if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(x2))
        throw std::domain_error("MVec3: non-finite coordinate");
    }
  }

  const S& operator[](int i) const { return i == 0 ? x0 : (i == 1 ? x1 : x2); }
  S& operator[](int i) { return i == 0 ? x0 : (i == 1 ? x1 : x2); }

  Vec3& operator+=(const Vec3& o) { x0 += o.x0; x1 += o.x1; x2 += o.x2; return *this; }
  Vec3& operator-=(const Vec3& o) { x0 -= o.x0; x1 -= o.x1; x2 -= o.x2; return *this; }
};

using MVec3 = Vec3<double>;

template <class S> Vec3<S> operator+(Vec3<S> a, const Vec3<S>& b) { return a += b; }
template <class S> Vec3<S> operator-(Vec3<S> a, const Vec3<S>& b) { return a -= b; }
template <class S> Vec3<S> operator-(const Vec3<S>& a) { return {-a.x0, -a.x1, -a.x2}; }

template <class S, class K>
auto operator*(const K& k, const Vec3<S>& a) -> Vec3<S> {
  return {k * a.x0, k * a.x1, k * a.x2};
}
template <class S, class K>
auto operator*(const Vec3<S>& a, const K& k) -> Vec3<S> {
  return {a.x0 * k, a.x1 * k, a.x2 * k};
}
template <class S, class K>
auto operator/(const Vec3<S>& a, const K& k) -> Vec3<S> {
  return {a.x0 / k, a.x1 / k, a.x2 / k};
}

// <u,w> = -u0 w0 + u1 w1 + u2 w2
template <class S>
S inner(const Vec3<S>& u, const Vec3<S>& w) {
  return u.x1 * w.x1 + u.x2 * w.x2 - u.x0 * w.x0;
}

// Lorentzian cross product, characterized by <u x w, z> = -det[u; w; z].
// With this sign the frame identities T x Q = n, Q x n = -T, n x T = -Q
// hold for T = (0,1,0), Q = (0,0,1), n = (1,0,0).
template <class S>
Vec3<S> cross(const Vec3<S>& u, const Vec3<S>& w) {
  return {u.x1 * w.x2 - u.x2 * w.x1,
          u.x0 * w.x2 - u.x2 * w.x0,
          u.x1 * w.x0 - u.x0 * w.x1};
}

// [u, w, z] = <u x w, z>
template <class S>
S triple(const Vec3<S>& u, const Vec3<S>& w, const Vec3<S>& z) {
  return inner(cross(u, w), z);
}

inline double pseudo_norm(const MVec3& v) { return std::sqrt(std::fabs(inner(v, v))); }

inline double euclidean_norm(const MVec3& v) {
  return std::sqrt(v.x0 * v.x0 + v.x1 * v.x1 + v.x2 * v.x2);
}

enum class CausalCharacter { Spacelike, Timelike, Null };

CausalCharacter causal_character(const MVec3& v, double tol = kCausalTolerance);
std::string to_string(CausalCharacter c);

// Metric signs of (T, Q, n) along a surface curve.
class CaseSignature {
 public:
  CaseSignature(int eps1, int eps2, int eps3);

  int eps1() const { return e1_; }
  int eps2() const { return e2_; }
  int eps3() const { return e3_; }

  static CaseSignature spacelike_surface() { return {1, 1, -1}; }
  static CaseSignature timelike_arc() { return {-1, 1, 1}; }
  static CaseSignature spacelike_arc_on_timelike() { return {1, -1, 1}; }

  // "spacelike-surface", "timelike-surface/timelike-arc", "timelike-surface/spacelike-arc"
  std::string label() const;
  std::string to_string() const;

  friend bool operator==(const CaseSignature&, const CaseSignature&) = default;

 private:
  int e1_, e2_, e3_;
};

inline int sign_of(double x) { return x < 0.0 ? -1 : 1; }

}  // namespace elastica
