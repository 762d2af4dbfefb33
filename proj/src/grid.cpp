#include "backflow/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace backflow {

void gauss_legendre_rule(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  if (q < 1) throw std::domain_error("gauss_legendre_rule: order must be >= 1");
  nodes.assign(q, 0.0);
  weights.assign(q, 0.0);
  // Newton iteration on the Legendre polynomial P_q, starting from the
  // Chebyshev-angle approximation of the roots.
  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[q - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[q - 1 - i] = w;
  }
}

QuadratureGrid build_grid(const OperatorSpec& spec) {
  if (spec.n < 1)
    throw std::domain_error("build_grid: node count must be >= 1");
  if (!(spec.u_max > spec.u0))
    throw std::domain_error("build_grid: u_max must exceed u0");

  QuadratureGrid grid;
  switch (spec.scheme) {
    case QuadScheme::UniformMidpoint: {
      const double h = (spec.u_max - spec.u0) / spec.n;
      grid.nodes.resize(spec.n);
      grid.weights.assign(spec.n, h);
      for (int i = 0; i < spec.n; ++i)
        grid.nodes[i] = spec.u0 + (i + 0.5) * h;
      break;
    }
    case QuadScheme::CompositeGaussLegendre: {
      const int q = spec.gl_order;
      std::vector<double> xs, ws;
      gauss_legendre_rule(q, xs, ws);
      const int panels = (spec.n + q - 1) / q;
      const double pw = (spec.u_max - spec.u0) / panels;
      grid.nodes.reserve(panels * q);
      grid.weights.reserve(panels * q);
      for (int p = 0; p < panels; ++p) {
        const double lo = spec.u0 + p * pw;
        const double mid = lo + 0.5 * pw;
        for (int j = 0; j < q; ++j) {
          grid.nodes.push_back(mid + 0.5 * pw * xs[j]);
          grid.weights.push_back(0.5 * pw * ws[j]);
        }
      }
      break;
    }
  }
  return grid;
}

}  // namespace backflow
