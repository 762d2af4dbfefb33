#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace backflow {

// sin(x)/x, switching to the truncated Taylor series below |x| = 1e-4 so
// both branches stay accurate to ~1e-16.
inline double sinc_stable(double x) {
  if (!std::isfinite(x))
    throw std::domain_error("sinc_stable: non-finite argument");
  const double t = std::fabs(x);
  if (t < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

// Backflow kernel K(u,v) = -(1/pi) sin(u^2-v^2)/(u-v).
//
// Evaluated through the factorization
//   sin(u^2-v^2)/(u-v) = (u+v) * sinc((u-v)(u+v)),
// which removes the apparent singularity on the diagonal:
//   K(u,u) = -2u/pi.
// sinc_stable takes |x|, so swapping u and v reproduces the exact same
// floating-point value.
inline double kernel_eval(double u, double v) {
  if (!std::isfinite(u) || !std::isfinite(v))
    throw std::domain_error("kernel_eval: non-finite argument");
  const double s = u + v;
  return -s / std::numbers::pi * sinc_stable((u - v) * s);
}

// Physical problem parameters; only the combination T/(4 m hbar) matters.
struct PhysicalParams {
  double p0;    // momentum cutoff, any real
  double T;     // time interval, > 0
  double m;     // mass, > 0
  double hbar;  // action, > 0
};

// u0 = sqrt(T / (4 m hbar)) * p0
inline double dimensionless_cutoff(const PhysicalParams& p) {
  if (!std::isfinite(p.p0))
    throw std::domain_error("dimensionless_cutoff: non-finite p0");
  if (!(p.T > 0.0) || !(p.m > 0.0) || !(p.hbar > 0.0))
    throw std::domain_error("dimensionless_cutoff: T, m and hbar must be positive");
  return std::sqrt(p.T / (4.0 * p.m * p.hbar)) * p.p0;
}

}  // namespace backflow
