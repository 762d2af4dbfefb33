#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "backflow/eigensolve.hpp"

namespace backflow {

struct SweepRow {
  double u0 = 0.0;
  double lambda_max = 0.0;
  double error_estimate = 0.0;
  bool ok = false;
  std::string error;  // set when ok is false
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ascending in u0
  ConvergeControl ctrl;
};

// One converged estimate per u0.  A failure at a single u0 is recorded in
// its row and does not abort the sweep.
SweepResult sweep_lambda_max(const std::vector<double>& u0_list, const ConvergeControl& ctrl = {});

// Classical reference curve: 1 for u0 < 0, 0 for u0 > 0, undefined at the
// discontinuity.
std::optional<double> classical_step(double u0);

struct ClassicalCurvePoint {
  double u0;
  double lambda_max;
  bool ok = true;  // false when the rescaled argument u0/alpha did not converge
};

struct ClassicalFamily {
  std::vector<double> alpha_values;
  std::vector<std::vector<ClassicalCurvePoint>> curves;  // one per alpha
};

// Curves lambda_max(u0 / alpha) on a shared u0 grid.  Every point is
// re-converged; repeated arguments (notably u0 = 0) are evaluated once and
// reused, so all curves carry the identical value there.
ClassicalFamily classical_family(const std::vector<double>& u0_list,
                                 const std::vector<double>& alphas,
                                 const ConvergeControl& ctrl = {});

// Bisection for the cutoff where lambda_max = 0.5.  Stops at |lambda - 0.5|
// <= 2e-3 or bracket width <= 1e-3.
double find_half_crossing(const ConvergeControl& ctrl = {},
                          std::pair<double, double> bracket = {-2.0, 0.0});

struct SymmetryReport {
  double u0_star = 0.0;
  std::vector<double> offsets;
  std::vector<double> residuals;   // [lam(u*+s)-0.5] + [lam(u*-s)-0.5]
  std::vector<double> error_bars;  // combined error estimates
  std::vector<bool> exceeds_bar;   // |residual| > error bar
};

// Probes the conjectured odd symmetry of lambda_max - 0.5 about u0_star.
// Report only; no claim is asserted.
SymmetryReport symmetry_residuals(double u0_star, const std::vector<double>& offsets,
                                  const ConvergeControl& ctrl = {});

}  // namespace backflow
