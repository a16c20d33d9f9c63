#include "elastica/extremal.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>

#include "elastica/errors.hpp"
#include "elastica/quadrature.hpp"

namespace elastica {

namespace {

constexpr int kMaxDeriv = 3;  // torsion needs alpha', alpha'', alpha'''

Point2 unit(Point2 d) {
  const double n = std::hypot(d[0], d[1]);
  if (!(n > 0.0)) throw InputError("initial direction vanishes");
  return {d[0] / n, d[1] / n};
}

double dot(Point2 a, Point2 b) { return a[0] * b[0] + a[1] * b[1]; }

constexpr double kInvFact[] = {1.0, 1.0, 0.5, 1.0 / 6.0};

struct PointValue {
  double r = 0.0;  // tau sqrt(w |alpha'|), so that h = r^2
  double h = 0.0, len = 0.0;
  double accel = 0.0;  // d|alpha'|/dp
  bool ok = false;
};

// Gradients of r and len with respect to the derivatives D[d][a].
struct PointGradient {
  double r[kMaxDeriv + 1][2]{}, len[kMaxDeriv + 1][2]{}, accel[kMaxDeriv + 1][2]{};
  bool ok = false;
};

struct Geometry {
  MVec3 a1, a2, a3;
  double q1, qc;
};

bool admissible(const Geometry& g, int eps1) {
  const double e1 = euclidean_norm(g.a1);
  if (!(std::fabs(g.q1) > kCausalTolerance * e1 * e1) || sign_of(g.q1) != eps1) return false;
  const double scale = e1 * euclidean_norm(g.a2);
  return std::fabs(g.qc) > kCausalTolerance * scale * scale;
}

// tau^2 |alpha'| and |alpha'| at a point from (u, v) derivatives 0..3.
PointValue evaluate_point(const SurfacePatch& patch, const Point2* D, double w, int eps1) {
  PointValue r;
  Jet2 u(kMaxDeriv, 0), v(kMaxDeriv, 0);
  for (int k = 0; k <= kMaxDeriv; ++k) {
    u.coeff(k) = D[k][0] * kInvFact[k];
    v.coeff(k) = D[k][1] * kInvFact[k];
  }
  if (!patch.domain().contains(u.value(), v.value())) return r;
  try {
    const JetVec3 x = patch.position_jet(u, v);
    Geometry g{partial(x, 1), partial(x, 2), partial(x, 3), 0.0, 0.0};
    g.q1 = inner(g.a1, g.a1);
    const MVec3 C = cross(g.a1, g.a2);
    g.qc = inner(C, C);
    if (!admissible(g, eps1)) return r;
    const double tau = inner(C, g.a3) / std::fabs(g.qc);
    const double speed = std::sqrt(std::fabs(g.q1));
    r.r = tau * std::sqrt(w * speed);
    r.h = r.r * r.r;
    r.len = w * speed;
    r.accel = sign_of(g.q1) * inner(g.a1, g.a2) / speed;
    r.ok = std::isfinite(r.h) && std::isfinite(r.len) && std::isfinite(r.accel);
  } catch (const std::exception&) {
    r.ok = false;
  }
  return r;
}

// One t-direction per derivative slot D[d][a].
PointGradient gradient_point(const SurfacePatch& patch, const Point2* D, double w, int eps1) {
  PointGradient g;
  try {
    for (int d = 0; d <= kMaxDeriv; ++d)
      for (int a = 0; a < 2; ++a) {
        Jet2 u(kMaxDeriv, 1), v(kMaxDeriv, 1);
        for (int k = 0; k <= kMaxDeriv; ++k) {
          u.coeff(k, 0) = D[k][0] * kInvFact[k];
          v.coeff(k, 0) = D[k][1] * kInvFact[k];
        }
        (a == 0 ? u : v).coeff(d, 1) = kInvFact[d];
        const JetVec3 x = patch.position_jet(u, v);
        const MVec3 a1 = partial(x, 1), a2 = partial(x, 2), a3 = partial(x, 3);
        const MVec3 b1 = partial(x, 1, 1), b2 = partial(x, 2, 1), b3 = partial(x, 3, 1);
        const double q1 = inner(a1, a1);
        const MVec3 C = cross(a1, a2);
        const MVec3 dC = cross(b1, a2) + cross(a1, b2);
        const double qc = inner(C, C);
        if (!admissible({a1, a2, a3, q1, qc}, eps1)) return g;
        const double N = inner(C, a3), dN = inner(dC, a3) + inner(C, b3);
        const double dqc = 2.0 * inner(C, dC);
        const double aq = std::fabs(qc);
        const double tau = N / aq;
        const double dtau = dN / aq - N * sign_of(qc) * dqc / (qc * qc);
        const double speed = std::sqrt(std::fabs(q1));
        const double dspeed = sign_of(q1) * inner(a1, b1) / speed;
        const double root = std::sqrt(w * speed);
        g.r[d][a] = dtau * root + tau * w * dspeed / (2.0 * root);
        g.len[d][a] = w * dspeed;
        g.accel[d][a] = sign_of(q1) * ((inner(b1, a2) + inner(a1, b2)) / speed -
                                       inner(a1, a2) * dspeed / (speed * speed));
      }
    g.ok = true;
  } catch (const std::exception&) {
    g.ok = false;
  }
  return g;
}

std::vector<BSplinePath> levels_of(const DiscreteCurve& c) {
  if (!c.levels.empty()) return c.levels;
  return {BSplinePath(c.degree, c.nodes)};
}

class Solver {
 public:
  Solver(const DiscreteCurve& init, const MinimizeOptions& o)
      : patch_(*init.patch), opts_(o), deg_(init.degree), l_(init.length) {
    for (const BSplinePath& b : levels_of(init)) {
      ctrl_.push_back(b.control());
      breaks_.push_back(b.breakpoints());
    }
    start_ = init.start();
    d0_ = init.direction();
    const std::vector<double>& fine = breaks_.back();
    spans_ = static_cast<int>(fine.size()) - 1;
    G_ = o.quadrature;
    const GaussRule& rule = gauss_legendre(G_);
    const int P = spans_ * G_;
    p_.resize(P);
    w_.resize(P);
    for (int j = 0; j < spans_; ++j) {
      const double a = fine[j], b = fine[j + 1];
      for (int g = 0; g < G_; ++g) {
        p_[j * G_ + g] = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[g];
        w_[j * G_ + g] = 0.5 * (b - a) * rule.weights[g];
      }
    }
    const int L = static_cast<int>(ctrl_.size());
    span_.assign(L, std::vector<int>(P));
    basis_.assign(L, std::vector<double>(static_cast<std::size_t>(P) * 4 * (deg_ + 1)));
    first_fine_.resize(L);
    for (int lv = 0; lv < L; ++lv) {
      const BSplinePath shape(deg_, ctrl_[lv], breaks_[lv]);
      for (int q = 0; q < P; ++q) {
        // points lie strictly inside fine spans, hence inside level spans
        span_[lv][q] = shape.span(p_[q]);
        shape.basis(span_[lv][q], p_[q], kMaxDeriv, &basis_[lv][q * 4 * (deg_ + 1)]);
      }
      // fine span index of each level breakpoint
      first_fine_[lv].resize(breaks_[lv].size());
      for (std::size_t k = 0; k < breaks_[lv].size(); ++k)
        first_fine_[lv][k] = static_cast<int>(
            std::lower_bound(fine.begin(), fine.end(), breaks_[lv][k] - 1e-15) - fine.begin());
    }
    D_.resize(static_cast<std::size_t>(P) * 4);
    r_.resize(P);
    h_.resize(P);
    len_.resize(P);
    accel_.resize(P);
    eps1_ = 0;
    rebuild();
  }

  double H() const { return H_; }
  double L() const { return Lsum_; }
  double objective(double w) const { return H_ + w * (Lsum_ - l_) * (Lsum_ - l_) + mu_ * S_; }
  double violation() const { return std::fabs(Lsum_ - l_) / l_; }
  int levels() const { return static_cast<int>(ctrl_.size()); }
  int rejected() const { return rejected_; }
  void set_speed_weight(double mu) { mu_ = mu; }

  bool rebuild() {
    const int P = static_cast<int>(p_.size());
    std::fill(D_.begin(), D_.end(), Point2{0.0, 0.0});
    for (int lv = 0; lv < levels(); ++lv) {
      const int w = deg_ + 1;
      for (int q = 0; q < P; ++q) {
        const double* B = &basis_[lv][q * 4 * w];
        const int j = span_[lv][q];
        for (int d = 0; d <= kMaxDeriv; ++d)
          for (int k = 0; k < w; ++k) {
            const Point2& c = ctrl_[lv][j + k];
            D_[q * 4 + d][0] += B[d * w + k] * c[0];
            D_[q * 4 + d][1] += B[d * w + k] * c[1];
          }
      }
    }
    if (eps1_ == 0) {
      const double q1 = initial_q1();
      eps1_ = sign_of(q1);
    }
    H_ = Lsum_ = S_ = 0.0;
    bool ok = true;
    for (int q = 0; q < P; ++q) {
      const PointValue v = evaluate_point(patch_, &D_[q * 4], w_[q], eps1_);
      ok = ok && v.ok;
      r_[q] = v.r;
      h_[q] = v.h;
      len_[q] = v.len;
      H_ += v.h;
      Lsum_ += v.len;
      accel_[q] = v.accel;
      S_ += w_[q] * v.accel * v.accel;
    }
    return ok;
  }

  // One coordinate: level, control index (>= 1), component 0/1, or 2 for the
  // anchored ray of control 1.
  struct Coord {
    int level, index, comp;
  };

  std::vector<Coord> coords(int level) const {
    std::vector<Coord> c;
    c.push_back({level, 1, 2});
    for (int i = 2; i < static_cast<int>(ctrl_[level].size()); ++i) {
      c.push_back({level, i, 0});
      c.push_back({level, i, 1});
    }
    return c;
  }

  struct Trial {
    double dH = 0.0, dL = 0.0;
    bool ok = false;
  };

  Trial trial(const Coord& c, double t) {
    Trial r;
    if (c.comp == 2 && !direction_kept(c.level, t)) return r;
    const Point2 e = direction_of(c);
    const auto [q0, q1] = support(c);
    const int w = deg_ + 1;
    scratch_.resize(q1 - q0);
    for (int q = q0; q < q1; ++q) {
      const int k = c.index - span_[c.level][q];
      Point2 D[4];
      for (int d = 0; d <= kMaxDeriv; ++d) D[d] = D_[q * 4 + d];
      if (k >= 0 && k < w) {
        const double* B = &basis_[c.level][q * 4 * w];
        for (int d = 0; d <= kMaxDeriv; ++d) {
          D[d][0] += t * B[d * w + k] * e[0];
          D[d][1] += t * B[d * w + k] * e[1];
        }
      }
      const PointValue v = evaluate_point(patch_, D, w_[q], eps1_);
      if (!v.ok) {
        ++rejected_;
        return r;
      }
      scratch_[q - q0] = v;
      r.dH += v.h - h_[q];
      r.dL += v.len - len_[q];
    }
    r.ok = true;
    return r;
  }

  void accept(const Coord& c, double t, const Trial& tr) {
    const Point2 e = direction_of(c);
    ctrl_[c.level][c.index][0] += t * e[0];
    ctrl_[c.level][c.index][1] += t * e[1];
    const auto [q0, q1] = support(c);
    const int w = deg_ + 1;
    // the last trial evaluated is not necessarily t, so recompute
    for (int q = q0; q < q1; ++q) {
      const int k = c.index - span_[c.level][q];
      if (k >= 0 && k < w) {
        const double* B = &basis_[c.level][q * 4 * w];
        for (int d = 0; d <= kMaxDeriv; ++d) {
          D_[q * 4 + d][0] += t * B[d * w + k] * e[0];
          D_[q * 4 + d][1] += t * B[d * w + k] * e[1];
        }
      }
      const PointValue v = evaluate_point(patch_, &D_[q * 4], w_[q], eps1_);
      r_[q] = v.r;
      h_[q] = v.h;
      len_[q] = v.len;
    }
    H_ += tr.dH;
    Lsum_ += tr.dL;
  }

  // Parabolic coordinate step from trials at +-eta. Returns the decrease.
  double line_search(const Coord& c, double& eta, double weight) {
    const double gap = Lsum_ - l_;
    auto dphi = [&](const Trial& t) { return t.dH + weight * t.dL * (2.0 * gap + t.dL); };
    for (int attempt = 0; attempt < 4; ++attempt) {
      const Trial tp = trial(c, eta), tm = trial(c, -eta);
      if (!tp.ok && !tm.ok) {
        eta *= 0.5;
        continue;
      }
      double best_t = 0.0, best = 0.0;
      Trial best_trial;
      auto consider = [&](double t, const Trial& tr) {
        if (!tr.ok) return;
        const double v = dphi(tr);
        if (v < best) {
          best = v;
          best_t = t;
          best_trial = tr;
        }
      };
      consider(eta, tp);
      consider(-eta, tm);
      if (tp.ok && tm.ok) {
        const double fp = dphi(tp), fm = dphi(tm);
        const double a = (fp + fm) / (2.0 * eta * eta), b = (fp - fm) / (2.0 * eta);
        if (a > 0.0) {
          const double ts = std::clamp(-b / (2.0 * a), -4.0 * eta, 4.0 * eta);
          if (std::fabs(ts) > 1e-3 * eta && std::fabs(std::fabs(ts) - eta) > 1e-3 * eta)
            consider(ts, trial(c, ts));
        }
      }
      if (best < 0.0) {
        accept(c, best_t, best_trial);
        eta = std::clamp(std::fabs(best_t), 0.25 * eta, 4.0 * eta);
        return -best;
      }
      eta *= 0.25;
      return 0.0;
    }
    return 0.0;
  }

  std::vector<std::vector<Point2>> state() const { return ctrl_; }

  // Full evaluation at another state; restores on failure.
  bool try_state(const std::vector<std::vector<Point2>>& s, double weight) {
    const double before = objective(weight);
    auto saved = ctrl_;
    ctrl_ = s;
    if (!direction_total_positive() || !rebuild() || !(objective(weight) < before)) {
      ctrl_ = std::move(saved);
      rebuild();
      return false;
    }
    return true;
  }

  // Levenberg-Marquardt on the coordinates of one level with the penalty
  // weight fixed. Returns true once a sweep of kSweep iterations no longer
  // lowers the objective by more than rel_tol relative, or no step is
  // accepted.
  bool levenberg_marquardt(int level, double weight, int budget, int& iterations,
                           const std::function<void()>& on_step) {
    const std::vector<Coord> cs = coords(level);
    const int n = static_cast<int>(cs.size());
    const int P = static_cast<int>(p_.size());
    const int w = deg_ + 1;
    const double sw = std::sqrt(weight);
    double lambda = -1.0, nu = 2.0;
    double sweep_start = objective(weight);
    std::vector<PointGradient> grads(P);
    for (int it = 0; it < budget; ++it) {
      for (int q = 0; q < P; ++q) {
        grads[q] = gradient_point(patch_, &D_[q * 4], w_[q], eps1_);
        if (!grads[q].ok) return true;
      }
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(static_cast<std::size_t>(P) * 4 * w + n);
      Eigen::VectorXd res(2 * P + 1), lrow = Eigen::VectorXd::Zero(n);
      for (int q = 0; q < P; ++q) {
        res(q) = r_[q];
        const double sm = std::sqrt(mu_ * w_[q]);
        res(P + 1 + q) = sm * accel_[q];
        const double* B = &basis_[level][q * 4 * w];
        const int j = span_[level][q];
        for (int k = 0; k < w; ++k) {
          const int idx = j + k;
          if (idx == 0) continue;
          for (int comp = 0; comp < 2; ++comp) {
            if (idx == 1 && comp == 1) continue;
            const Point2 e = idx == 1 ? d0_ : (comp == 0 ? Point2{1.0, 0.0} : Point2{0.0, 1.0});
            double jr = 0.0, jl = 0.0, ja = 0.0;
            for (int d = 0; d <= kMaxDeriv; ++d) {
              const double b = B[d * w + k];
              jr += b * (grads[q].r[d][0] * e[0] + grads[q].r[d][1] * e[1]);
              jl += b * (grads[q].len[d][0] * e[0] + grads[q].len[d][1] * e[1]);
              ja += b * (grads[q].accel[d][0] * e[0] + grads[q].accel[d][1] * e[1]);
            }
            const int col = idx == 1 ? 0 : 1 + 2 * (idx - 2) + comp;
            trip.emplace_back(q, col, jr);
            if (mu_ > 0.0) trip.emplace_back(P + 1 + q, col, sm * ja);
            lrow(col) += jl;
          }
        }
      }
      res(P) = sw * (Lsum_ - l_);
      for (int c = 0; c < n; ++c) trip.emplace_back(P, c, sw * lrow(c));
      Eigen::SparseMatrix<double> J(2 * P + 1, n);
      J.setFromTriplets(trip.begin(), trip.end());
      const Eigen::SparseMatrix<double> JtJ = (J.transpose() * J).pruned();
      const Eigen::VectorXd g = J.transpose() * res;
      Eigen::VectorXd diag = JtJ.diagonal();
      const double dmax = diag.maxCoeff();
      if (!(dmax > 0.0)) return true;
      for (int c = 0; c < n; ++c) diag(c) = std::max(diag(c), 1e-12 * dmax);
      if (lambda < 0.0) lambda = 1e-3;
      const double before = objective(weight);
      const Saved saved = save();
      bool accepted = false;
      for (int attempt = 0; attempt < kMaxRejections && !accepted; ++attempt) {
        Eigen::SparseMatrix<double> M = JtJ;
        for (int c = 0; c < n; ++c) M.coeffRef(c, c) += lambda * diag(c);
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(M);
        Eigen::VectorXd step;
        if (solver.info() == Eigen::Success) step = solver.solve(-g);
        if (solver.info() != Eigen::Success || !step.allFinite()) {
          lambda *= nu;
          nu *= 2.0;
          continue;
        }
        for (int c = 0; c < n; ++c) {
          const Coord& co = cs[c];
          const Point2 e = direction_of(co);
          ctrl_[level][co.index][0] += step(c) * e[0];
          ctrl_[level][co.index][1] += step(c) * e[1];
        }
        const bool ok = direction_total_positive() && rebuild();
        const double after = objective(weight);
        if (ok && after < before) {
          const double predicted = step.dot(lambda * diag.cwiseProduct(step) - g);
          const double rho = predicted > 0.0 ? (before - after) / predicted : 0.0;
          lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
          nu = 2.0;
          accepted = true;
        } else {
          if (!ok) ++rejected_;
          restore(saved);
          lambda *= nu;
          nu *= 2.0;
        }
      }
      if (!accepted) return true;
      ++iterations;
      on_step();
      if ((it + 1) % kSweep == 0) {
        const double now = objective(weight);
        if (sweep_start - now <= opts_.rel_tol * sweep_start) return true;
        sweep_start = now;
      }
    }
    return false;
  }

  std::vector<BSplinePath> paths() const {
    std::vector<BSplinePath> r;
    for (int lv = 0; lv < levels(); ++lv) r.emplace_back(deg_, ctrl_[lv], breaks_[lv]);
    return r;
  }

  Point2 start() const { return start_; }
  Point2 d0() const { return d0_; }

 private:
  static constexpr int kMaxRejections = 30;
  static constexpr int kSweep = 10;

  struct Saved {
    std::vector<std::vector<Point2>> ctrl;
    std::vector<Point2> D;
    std::vector<double> r, h, len, accel;
    double H, L, S;
  };
  Saved save() const { return {ctrl_, D_, r_, h_, len_, accel_, H_, Lsum_, S_}; }
  void restore(const Saved& s) {
    ctrl_ = s.ctrl;
    D_ = s.D;
    r_ = s.r;
    h_ = s.h;
    len_ = s.len;
    accel_ = s.accel;
    H_ = s.H;
    Lsum_ = s.L;
    S_ = s.S;
  }

  double initial_q1() const {
    Jet2 u(1, 0), v(1, 0);
    Point2 d[2];
    SplineSum(paths()).derivatives(0.0, 1, d);
    u.coeff(0) = d[0][0];
    u.coeff(1) = d[1][0];
    v.coeff(0) = d[0][1];
    v.coeff(1) = d[1][1];
    const MVec3 a1 = partial(patch_.position_jet(u, v), 1);
    return inner(a1, a1);
  }

  Point2 direction_of(const Coord& c) const {
    if (c.comp == 2) return d0_;
    return c.comp == 0 ? Point2{1.0, 0.0} : Point2{0.0, 1.0};
  }

  std::pair<int, int> support(const Coord& c) const {
    const int m = static_cast<int>(breaks_[c.level].size()) - 1;
    const int a = std::max(c.index - deg_, 0);
    const int b = std::min(c.index, m - 1) + 1;
    return {first_fine_[c.level][a] * G_, first_fine_[c.level][b] * G_};
  }

  // alpha'(0) is sum over levels of deg / b1 * (c1 - c0), all along d0.
  double initial_speed(const std::vector<std::vector<Point2>>& s) const {
    double r = 0.0;
    for (int lv = 0; lv < levels(); ++lv) {
      const Point2 d = {s[lv][1][0] - s[lv][0][0], s[lv][1][1] - s[lv][0][1]};
      r += deg_ / breaks_[lv][1] * dot(d, d0_);
    }
    return r;
  }
  bool direction_total_positive() const { return initial_speed(ctrl_) > 0.0; }
  bool direction_kept(int level, double t) const {
    return initial_speed(ctrl_) + deg_ / breaks_[level][1] * t > 0.0;
  }

  const SurfacePatch& patch_;
  MinimizeOptions opts_;
  int deg_;
  double l_;
  Point2 start_{}, d0_{};
  std::vector<std::vector<Point2>> ctrl_;
  std::vector<std::vector<double>> breaks_;
  int spans_ = 0, G_ = 8;
  std::vector<double> p_, w_;
  std::vector<std::vector<int>> span_;
  std::vector<std::vector<double>> basis_;
  std::vector<std::vector<int>> first_fine_;
  std::vector<Point2> D_;
  std::vector<double> r_, h_, len_, accel_;
  std::vector<PointValue> scratch_;
  double H_ = 0.0, Lsum_ = 0.0;
  // sum of w_q (d|alpha'|/dp)^2, weighted by mu_ in the objective
  double S_ = 0.0, mu_ = 0.0;
  int eps1_ = 0;
  int rejected_ = 0;
};

}  // namespace

Point2 DiscreteCurve::direction() const {
  if (nodes.size() < 2) throw InputError("discrete curve needs at least two nodes");
  return unit({nodes[1][0] - nodes[0][0], nodes[1][1] - nodes[0][1]});
}

std::shared_ptr<const CurvePath> DiscreteCurve::path() const {
  if (!levels.empty()) return std::make_shared<SplineSum>(levels);
  return std::make_shared<BSplinePath>(degree, nodes);
}

std::shared_ptr<const SurfaceCurve> DiscreteCurve::surface_curve() const {
  return std::make_shared<SurfaceCurve>(patch, path(), 1.0);
}

double DiscreteCurve::spline_length() const { return surface_curve()->length(); }

std::vector<double> nested_breakpoints(int fine_spans, int spans) {
  if (spans < 1 || spans > fine_spans) throw InputError("nested level has too many spans");
  std::vector<double> b(spans + 1);
  for (int k = 0; k <= spans; ++k) {
    const long idx = std::lround(static_cast<double>(k) * fine_spans / spans);
    b[k] = static_cast<double>(idx) / fine_spans;
  }
  b.back() = 1.0;
  return b;
}

namespace {

std::vector<BSplinePath> fit_levels(int degree, const std::vector<int>& counts,
                                    const std::vector<double>& p, std::vector<Point2> x,
                                    Point2 start, Point2 dir) {
  const int fine_spans = counts.back() - degree;
  std::vector<BSplinePath> levels;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const Point2 c0 = k == 0 ? start : Point2{0.0, 0.0};
    levels.push_back(fit_anchored(degree, nested_breakpoints(fine_spans, counts[k] - degree), p, x,
                                  c0, dir));
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Point2 y = levels.back().point(p[i]);
      x[i][0] -= y[0];
      x[i][1] -= y[1];
    }
  }
  return levels;
}

std::vector<int> level_counts(int N, int degree, const std::vector<int>& schedule) {
  std::vector<int> counts;
  for (int n : schedule)
    if (n < N && n + 1 > degree && (counts.empty() || n + 1 > counts.back())) counts.push_back(n + 1);
  counts.push_back(N + 1);
  return counts;
}

std::vector<double> sample_grid(int count) {
  std::vector<double> p(count);
  for (int i = 0; i < count; ++i) p[i] = static_cast<double>(i) / (count - 1);
  return p;
}

}  // namespace

std::vector<Point2> flatten(const std::vector<BSplinePath>& levels, Point2 start, Point2 direction) {
  const BSplinePath& fine = levels.back();
  const SplineSum sum(levels);
  const std::vector<double> p = sample_grid(4 * static_cast<int>(fine.control().size()) + 16);
  std::vector<Point2> x(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) x[i] = sum.point(p[i]);
  return fit_anchored(fine.degree(), fine.breakpoints(), p, x, start, direction).control();
}

DiscreteCurve discretize(std::shared_ptr<const SurfacePatch> patch, const Expr& u, const Expr& v,
                         double length, const DiscretizeOptions& o) {
  if (!(length > 0.0)) throw InputError("curve length must be positive");
  if (o.N + 1 < o.degree + 1) throw InputError("N + 1 must be at least degree + 1");
  auto path = std::make_shared<ExprPath>(u, v);
  // parameter end with arc length equal to `length`, by the secant method
  auto arc = [&](double pe) { return SurfaceCurve(patch, path, pe).length() - length; };
  double p0 = length, f0 = arc(p0);
  double p1 = length * (f0 > 0 ? 0.9 : 1.1), f1 = arc(p1);
  for (int it = 0; it < 60 && std::fabs(f1) > 1e-13 * length; ++it) {
    const double p2 = p1 - f1 * (p1 - p0) / (f1 - f0);
    p0 = p1;
    f0 = f1;
    p1 = p2;
    f1 = arc(p1);
  }
  const SurfaceCurve c(patch, path, p1);
  const std::vector<int> counts = level_counts(o.N, o.degree, o.schedule);
  const std::vector<double> q = sample_grid(o.samples_per_node * (o.N + 1) + 16);
  std::vector<Point2> x(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto j = path->uv(c.param_at(q[i] * c.length()), 0);
    x[i] = {j[0].value(), j[1].value()};
  }
  const auto j0 = path->uv(0.0, 1);
  const Point2 start{j0[0].value(), j0[1].value()};
  const Point2 dir = unit({j0[0].partial(1), j0[1].partial(1)});
  DiscreteCurve d;
  d.patch = std::move(patch);
  d.degree = o.degree;
  d.length = length;
  d.levels = fit_levels(o.degree, counts, q, std::move(x), start, dir);
  d.nodes = flatten(d.levels, start, dir);
  return d;
}

DiscreteCurve with_levels(const DiscreteCurve& c, const std::vector<int>& schedule) {
  const BSplinePath fine(c.degree, c.nodes);
  const std::vector<int> counts = level_counts(c.N(), c.degree, schedule);
  const std::vector<double> p = sample_grid(4 * (c.N() + 1) + 16);
  std::vector<Point2> x(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) x[i] = fine.point(p[i]);
  DiscreteCurve d = c;
  d.levels = fit_levels(c.degree, counts, p, std::move(x), c.start(), c.direction());
  return d;
}

DiscreteFunctional discrete_functional(const DiscreteCurve& c, int quadrature) {
  MinimizeOptions o;
  o.quadrature = quadrature;
  Solver s(c, o);
  return {s.H(), s.L()};
}

namespace {

bool run_coordinate(Solver& s, const MinimizeOptions& o, double& weight, int& sweeps,
                    MinimizeResult& r) {
  const int L = s.levels();
  std::vector<std::vector<double>> eta(L);
  for (int lv = 0; lv < L; ++lv) eta[lv].assign(s.coords(lv).size(), 1e-3);
  bool converged = false;
  for (int outer = 0; outer < o.outer_loops && sweeps < o.max_sweeps; ++outer) {
    const int first_stage = (outer == 0 && o.coarse_to_fine) ? 0 : L - 1;
    for (int stage = first_stage; stage < L && sweeps < o.max_sweeps; ++stage) {
      bool stage_converged = false;
      for (int k = 0; k < o.max_sweeps_per_stage && sweeps < o.max_sweeps; ++k) {
        const double before = s.objective(weight);
        const auto previous = s.state();
        for (int lv = 0; lv <= stage; ++lv) {
          const auto cs = s.coords(lv);
          for (std::size_t i = 0; i < cs.size(); ++i) s.line_search(cs[i], eta[lv][i], weight);
        }
        s.rebuild();
        // pattern move along the sweep displacement
        auto next = s.state();
        for (std::size_t lv = 0; lv < next.size(); ++lv)
          for (std::size_t i = 0; i < next[lv].size(); ++i)
            for (int a = 0; a < 2; ++a) next[lv][i][a] += next[lv][i][a] - previous[lv][i][a];
        s.try_state(next, weight);
        ++sweeps;
        const double after = s.objective(weight);
        r.log.push_back({sweeps, outer, stage, s.H(), weight, after, s.violation()});
        if (before - after <= o.rel_tol * before) {
          stage_converged = true;
          break;
        }
      }
      converged = stage_converged;
    }
    if (converged && s.violation() < o.violation_tol) break;
    weight *= o.penalty_growth;
  }
  return converged;
}

// Each level in turn, coarse first; the nested spaces make a joint solve over
// all levels redundant. The penalty ramps until the length constraint holds.
bool run_levenberg(Solver& s, const MinimizeOptions& o, double& weight, int& iterations,
                   MinimizeResult& r) {
  const int L = s.levels();
  s.set_speed_weight(o.speed_regularization);
  bool converged = false;
  for (int stage = o.coarse_to_fine ? 0 : L - 1; stage < L; ++stage) {
    converged = false;
    for (int outer = 0; outer < o.outer_loops && iterations < o.max_sweeps; ++outer) {
      const int budget = std::min(o.max_sweeps_per_stage, o.max_sweeps - iterations);
      const bool done = s.levenberg_marquardt(stage, weight, budget, iterations, [&] {
        r.log.push_back({iterations, outer, stage, s.H(), weight, s.objective(weight),
                         s.violation()});
      });
      converged = done;
      if (done && s.violation() < o.violation_tol) break;
      weight *= o.penalty_growth;
    }
  }
  return converged;
}

}  // namespace

MinimizeResult minimize_H(const DiscreteCurve& init, const MinimizeOptions& o) {
  if (!init.patch) throw InputError("discrete curve has no surface");
  if (init.N() + 1 < init.degree + 1) throw InputError("N + 1 must be at least degree + 1");
  Solver s(init, o);
  MinimizeResult r;
  if (!std::isfinite(s.H()) || !s.rebuild())
    throw DegenerateOsculating("minimize_H", "initial curve has a null tangent or degenerate osculating plane");
  r.H_initial = s.H();
  double weight = o.penalty;
  int iterations = 0;
  r.log.push_back({0, 0, 0, s.H(), weight, s.objective(weight), s.violation()});
  const bool converged = o.method == MinimizeMethod::Coordinate
                             ? run_coordinate(s, o, weight, iterations, r)
                             : run_levenberg(s, o, weight, iterations, r);
  r.curve = init;
  r.curve.levels = s.paths();
  r.curve.nodes = flatten(r.curve.levels, s.start(), s.d0());
  r.H_value = s.H();
  r.iterations = iterations;
  r.violation = s.violation();
  r.rejected_steps = s.rejected();
  r.converged = converged && r.violation < 1e-6;
  r.status = r.converged ? "converged" : "MaxIterations";
  return r;
}

}  // namespace elastica
