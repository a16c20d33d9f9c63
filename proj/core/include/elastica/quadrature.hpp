#pragma once

#include <functional>
#include <vector>

namespace elastica {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule; rules are cached per n.
const GaussRule& gauss_legendre(int n);

struct QuadratureOptions {
  int nodes_per_panel = 16;
  int panels = 64;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_panels = 4096;
};

// Composite Gauss-Legendre with a fixed number of panels.
double integrate_fixed(const std::function<double(double)>& f, double a, double b, int panels,
                       int nodes_per_panel = 16);

// Composite Gauss-Legendre, doubling the panel count until two successive
// values agree to rel_tol (or abs_tol). Returns the finer value.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

// Panel-parallel composite rule; f must be safe to call concurrently.
double integrate_parallel(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts = {});

}  // namespace elastica
