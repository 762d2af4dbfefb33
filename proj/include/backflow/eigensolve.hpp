#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "backflow/nystrom.hpp"

namespace backflow {

// Top of the spectrum of one discretized operator.
struct SpectralResult {
  double lambda_max = 0.0;
  std::vector<double> top_eigenvalues;  // descending
  std::vector<double> top_eigenvector;  // unit norm, largest-|entry| positive
  OperatorSpec spec;
  double residual = 0.0;  // ||M psi - lambda psi|| for the top pair
};

// Thrown when an eigensolve or a convergence run cannot reach its target;
// carries the best estimate obtained so far.
struct ConvergenceError : std::runtime_error {
  double best_estimate;
  double error_estimate;
  ConvergenceError(const std::string& msg, double best, double err)
      : std::runtime_error(msg), best_estimate(best), error_estimate(err) {}
};

// Dense symmetric eigendecomposition of the k algebraically largest pairs.
// matrix is row-major n x n and is left untouched.
SpectralResult dense_top_eigenpairs(const std::vector<double>& matrix, int n, int k);

// Lanczos with full reorthogonalization.  Throws ConvergenceError if the
// residual target is not met within the iteration budget or the top Ritz
// value is too small for the iteration to be trusted.
SpectralResult lanczos_top_eigenpairs(const std::vector<double>& matrix, int n, int k,
                                      int max_iter = 800, double rel_tol = 1e-10);

// Full spectrum, ascending (dense).
std::vector<double> all_eigenvalues(const DiscretizedOperator& op);

// Eigenvalues of a general real matrix (real parts, ascending); used to
// cross-check the plain Nystrom formulation against the symmetrized one.
std::vector<double> general_eigenvalues_real(const std::vector<double>& matrix, int n);

// Dense below dense_threshold, Lanczos above with dense fallback when the
// iteration fails or lands in the near-zero cluster.
SpectralResult largest_eigenpair(const DiscretizedOperator& op, int k = 1);

struct ConvergeControl {
  double tol = 1e-4;
  int n_init = 200;
  int n_max = 6400;
  double min_window = 8.0;            // initial window length is max(min_window, min_window + |u0|)
  double density_floor = 10.0;        // nodes per unit of u
  double nodes_per_half_period = 6.0; // resolution of sin(u^2 - v^2) at the window edge
};

struct ConvergeHistoryEntry {
  int n;
  double u_max;
  double lambda;
};

struct ConvergedEstimate {
  double u0 = 0.0;
  double lambda_max = 0.0;
  double error_estimate = 0.0;
  int n_final = 0;
  double u_max_final = 0.0;
  std::vector<ConvergeHistoryEntry> history;
  bool truncation_extrapolated = false;  // geometric tail extrapolation applied
  double refinement_ratio = 0.0;         // observed h-convergence ratio, 0 if unmeasured
};

// Widen the truncation window until lambda_max stabilizes (extrapolating
// the geometric truncation tail when the node budget runs out first), then
// refine the mesh and Richardson-extrapolate the O(h^2) error.
ConvergedEstimate converge_lambda_max(double u0, const ConvergeControl& ctrl = {});

// Node count demanded by ctrl for a window [u0, u_max].
int nodes_for_window(double u0, double u_max, double base_density, const ConvergeControl& ctrl);

}  // namespace backflow
