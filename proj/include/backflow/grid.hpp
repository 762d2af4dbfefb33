#pragma once

#include <vector>

namespace backflow {

enum class QuadScheme {
  UniformMidpoint,
  CompositeGaussLegendre,
};

// One discretized problem instance: the dimensionless window [u0, u_max]
// and how it is resolved.
struct OperatorSpec {
  double u0;
  double u_max;
  int n;
  QuadScheme scheme = QuadScheme::UniformMidpoint;
  int gl_order = 8;  // points per panel for the composite Gauss-Legendre scheme
};

struct QuadratureGrid {
  std::vector<double> nodes;    // strictly increasing, inside (u0, u_max)
  std::vector<double> weights;  // positive, sum = u_max - u0
  int size() const { return static_cast<int>(nodes.size()); }
};

// Nodes and weights of the q-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre_rule(int q, std::vector<double>& nodes, std::vector<double>& weights);

// Build the quadrature grid for a spec.  The composite Gauss-Legendre
// scheme uses ceil(n / gl_order) panels, so the actual node count can
// exceed the request by up to gl_order - 1.
QuadratureGrid build_grid(const OperatorSpec& spec);

}  // namespace backflow
