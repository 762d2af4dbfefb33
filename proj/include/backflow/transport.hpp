#pragma once

#include <complex>
#include <vector>

#include "backflow/eigensolve.hpp"
#include "backflow/grid.hpp"

namespace backflow {

// Extremal wave packet on the momentum grid, phi(u_i) = psi_i / sqrt(w_i),
// unit total probability sum w_i |phi_i|^2 = 1.
struct ExtremalState {
  QuadratureGrid grid;
  std::vector<std::complex<double>> amplitude;
};

ExtremalState extremal_state(const SpectralResult& result, const QuadratureGrid& grid);

struct PositionGrid {
  double y_min = -200.0;
  double y_max = 200.0;
  double dy = 0.05;
  // Fraction of probability the position window may miss.  The extremal
  // amplitude has a jump at the momentum cutoff, so the position density
  // carries a genuine 1/y^2 tail; the leaked mass largely cancels between
  // the two evaluation times.
  double leak_tol = 1e-2;
};

struct TransportResult {
  double p_left_initial = 0.0;
  double p_left_final = 0.0;
  double backflow = 0.0;  // p_left_final - p_left_initial
  double lambda_reference = 0.0;
  double discrepancy = 0.0;  // |backflow - lambda_reference|
  double mass_leak = 0.0;    // probability outside the position window
};

// Thrown when the position window misses more probability than allowed.
struct TruncationError : std::runtime_error {
  double leak;
  TruncationError(const std::string& msg, double leak_) : std::runtime_error(msg), leak(leak_) {}
};

// Free evolution over the unit dimensionless interval: the amplitude is
// exp(+i u^2) phi(u) at the interval start and exp(-i u^2) phi(u) at the
// end.  psi(y) is synthesized by direct quadrature and |psi|^2 integrated
// over y < 0 at both endpoint times.
TransportResult transport_backflow(const ExtremalState& state, const PositionGrid& y_grid,
                                   double lambda_reference);

// Serial reference implementation (the parallel path loops over y-points).
TransportResult transport_backflow_serial(const ExtremalState& state, const PositionGrid& y_grid,
                                          double lambda_reference);

// v^T M v for a unit vector: expected right-to-left flow in the state v.
double rayleigh_quotient(const DiscretizedOperator& op, const std::vector<double>& state_vector);

}  // namespace backflow
