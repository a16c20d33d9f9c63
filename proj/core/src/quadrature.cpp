#include "elastica/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "elastica/parallel.hpp"

namespace elastica {

namespace {

GaussRule build_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

double panel_sum(const std::function<double(double)>& f, double a, double h, int p,
                 const GaussRule& rule) {
  const double lo = a + p * h, mid = lo + 0.5 * h;
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    s += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
  return 0.5 * h * s;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  static std::mutex m;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b, int panels,
                       int nodes_per_panel) {
  const GaussRule& rule = gauss_legendre(nodes_per_panel);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) total += panel_sum(f, a, h, p, rule);
  return total;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  int panels = opts.panels;
  double prev = integrate_fixed(f, a, b, panels, opts.nodes_per_panel);
  for (;;) {
    panels *= 2;
    const double cur = integrate_fixed(f, a, b, panels, opts.nodes_per_panel);
    if (std::fabs(cur - prev) <= std::max(opts.rel_tol * std::fabs(cur), opts.abs_tol) ||
        panels >= opts.max_panels)
      return cur;
    prev = cur;
  }
}

double integrate_parallel(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts) {
  auto fixed = [&](int panels) {
    const GaussRule& rule = gauss_legendre(opts.nodes_per_panel);
    const double h = (b - a) / panels;
    std::vector<double> parts(panels);
    parallel_for(panels, [&](std::size_t p) { parts[p] = panel_sum(f, a, h, int(p), rule); });
    double total = 0.0;
    for (double x : parts) total += x;
    return total;
  };
  int panels = opts.panels;
  double prev = fixed(panels);
  for (;;) {
    panels *= 2;
    const double cur = fixed(panels);
    if (std::fabs(cur - prev) <= std::max(opts.rel_tol * std::fabs(cur), opts.abs_tol) ||
        panels >= opts.max_panels)
      return cur;
    prev = cur;
  }
}

}  // namespace elastica
