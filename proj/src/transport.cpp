#include "backflow/transport.hpp"

#include <cblas.h>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace backflow {

namespace {

struct LeftTotal {
  double left;
  double total;
};

int point_count(const PositionGrid& g) {
  if (!(g.dy > 0.0) || !(g.y_max > g.y_min))
    throw std::domain_error("transport_backflow: invalid position grid");
  return static_cast<int>(std::lround((g.y_max - g.y_min) / g.dy)) + 1;
}

// Quadrature coefficients w_i a_i exp(i phase_sign u_i^2), fixed per
// evaluation time.
std::vector<std::complex<double>> phased_coefficients(const ExtremalState& state,
                                                      double phase_sign) {
  const int n = state.grid.size();
  std::vector<std::complex<double>> c(n);
  for (int i = 0; i < n; ++i) {
    const double u = state.grid.nodes[i];
    c[i] = state.grid.weights[i] * state.amplitude[i] * std::polar(1.0, phase_sign * u * u);
  }
  return c;
}

// |psi(y)|^2 with psi(y) = (2 pi)^{-1/2} sum_i c_i exp(i u_i y);
// fixed summation order keeps the result deterministic.
double density_at(const std::vector<double>& nodes,
                  const std::vector<std::complex<double>>& coeff, double y) {
  double re = 0.0, im = 0.0;
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(nodes[i] * y), s = std::sin(nodes[i] * y);
    re += coeff[i].real() * c - coeff[i].imag() * s;
    im += coeff[i].real() * s + coeff[i].imag() * c;
  }
  return (re * re + im * im) / (2.0 * std::numbers::pi);
}

LeftTotal integrate_left_total(const std::vector<double>& dens, const PositionGrid& g) {
  LeftTotal acc{0.0, 0.0};
  const int m = static_cast<int>(dens.size());
  for (int k = 0; k + 1 < m; ++k) {
    const double y0 = g.y_min + k * g.dy;
    const double y1 = y0 + g.dy;
    const double seg = 0.5 * (dens[k] + dens[k + 1]) * g.dy;
    acc.total += seg;
    if (y1 <= 0.0) {
      acc.left += seg;
    } else if (y0 < 0.0) {
      // segment straddles the origin: linear interpolation of the density
      const double t = -y0 / g.dy;
      const double d0 = dens[k];
      const double dz = dens[k] + t * (dens[k + 1] - dens[k]);
      acc.left += 0.5 * (d0 + dz) * (-y0);
    }
  }
  return acc;
}

TransportResult run_transport(const ExtremalState& state, const PositionGrid& g,
                              double lambda_reference, bool parallel) {
  if (state.grid.nodes.size() != state.amplitude.size())
    throw std::domain_error("transport_backflow: grid/amplitude size mismatch");
  const int m = point_count(g);

  const std::vector<std::complex<double>> c_start = phased_coefficients(state, +1.0);
  const std::vector<std::complex<double>> c_end = phased_coefficients(state, -1.0);
  const std::vector<double>& nodes = state.grid.nodes;

  std::vector<double> dens_start(m), dens_end(m);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < m; ++k) {
      const double y = g.y_min + k * g.dy;
      dens_start[k] = density_at(nodes, c_start, y);
      dens_end[k] = density_at(nodes, c_end, y);
    }
  } else {
    for (int k = 0; k < m; ++k) {
      const double y = g.y_min + k * g.dy;
      dens_start[k] = density_at(nodes, c_start, y);
      dens_end[k] = density_at(nodes, c_end, y);
    }
  }

  const LeftTotal start = integrate_left_total(dens_start, g);
  const LeftTotal end = integrate_left_total(dens_end, g);

  TransportResult res;
  res.mass_leak = std::max(std::fabs(1.0 - start.total), std::fabs(1.0 - end.total));
  if (res.mass_leak > g.leak_tol)
    throw TruncationError("transport_backflow: position window misses too much probability",
                          res.mass_leak);

  res.p_left_initial = start.left;
  res.p_left_final = end.left;
  res.backflow = end.left - start.left;
  res.lambda_reference = lambda_reference;
  res.discrepancy = std::fabs(res.backflow - lambda_reference);
  return res;
}

}  // namespace

ExtremalState extremal_state(const SpectralResult& result, const QuadratureGrid& grid) {
  const int n = grid.size();
  if (static_cast<int>(result.top_eigenvector.size()) != n)
    throw std::domain_error("extremal_state: eigenvector/grid size mismatch");
  ExtremalState state;
  state.grid = grid;
  state.amplitude.resize(n);
  for (int i = 0; i < n; ++i)
    state.amplitude[i] = result.top_eigenvector[i] / std::sqrt(grid.weights[i]);
  return state;
}

TransportResult transport_backflow(const ExtremalState& state, const PositionGrid& y_grid,
                                   double lambda_reference) {
  return run_transport(state, y_grid, lambda_reference, true);
}

TransportResult transport_backflow_serial(const ExtremalState& state, const PositionGrid& y_grid,
                                          double lambda_reference) {
  return run_transport(state, y_grid, lambda_reference, false);
}

double rayleigh_quotient(const DiscretizedOperator& op, const std::vector<double>& state_vector) {
  const int n = op.n();
  if (static_cast<int>(state_vector.size()) != n)
    throw std::domain_error("rayleigh_quotient: dimension mismatch");
  const double nrm = cblas_dnrm2(n, state_vector.data(), 1);
  if (std::fabs(nrm - 1.0) > 1e-6)
    throw std::domain_error("rayleigh_quotient: state vector must have unit norm");
  std::vector<double> mv(n);
  cblas_dsymv(CblasRowMajor, CblasUpper, n, 1.0, op.matrix.data(), n, state_vector.data(), 1,
              0.0, mv.data(), 1);
  return cblas_ddot(n, state_vector.data(), 1, mv.data(), 1);
}

}  // namespace backflow
