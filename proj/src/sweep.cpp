#include "backflow/sweep.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace backflow {

SweepResult sweep_lambda_max(const std::vector<double>& u0_list, const ConvergeControl& ctrl) {
  if (u0_list.empty())
    throw std::domain_error("sweep_lambda_max: empty u0 list");
  for (std::size_t i = 1; i < u0_list.size(); ++i)
    if (!(u0_list[i] > u0_list[i - 1]))
      throw std::domain_error("sweep_lambda_max: u0 list must be strictly ascending");

  SweepResult result;
  result.ctrl = ctrl;
  result.rows.resize(u0_list.size());
  for (std::size_t i = 0; i < u0_list.size(); ++i) {
    SweepRow& row = result.rows[i];
    row.u0 = u0_list[i];
    try {
      const ConvergedEstimate est = converge_lambda_max(row.u0, ctrl);
      row.lambda_max = est.lambda_max;
      row.error_estimate = est.error_estimate;
      row.ok = true;
    } catch (const ConvergenceError& e) {
      row.lambda_max = e.best_estimate;
      row.error_estimate = e.error_estimate;
      row.error = e.what();
    }
  }
  return result;
}

std::optional<double> classical_step(double u0) {
  if (u0 < 0.0) return 1.0;
  if (u0 > 0.0) return 0.0;
  return std::nullopt;
}

ClassicalFamily classical_family(const std::vector<double>& u0_list,
                                 const std::vector<double>& alphas,
                                 const ConvergeControl& ctrl) {
  for (double a : alphas)
    if (!(a > 0.0) || a > 1.0)
      throw std::domain_error("classical_family: alpha values must lie in (0, 1]");

  ClassicalFamily family;
  family.alpha_values = alphas;
  // Cache keyed by the exact rescaled argument: u0 = 0 maps to the same
  // entry for every alpha, so all curves carry the identical value there.
  struct CachedPoint {
    double lambda;
    bool ok;
  };
  std::map<double, CachedPoint> cache;
  auto eval = [&](double u) -> CachedPoint {
    auto it = cache.find(u);
    if (it == cache.end()) {
      CachedPoint p{0.0, true};
      try {
        p.lambda = converge_lambda_max(u, ctrl).lambda_max;
      } catch (const ConvergenceError& e) {
        p.lambda = e.best_estimate;
        p.ok = false;
      }
      it = cache.emplace(u, p).first;
    }
    return it->second;
  };

  for (double alpha : alphas) {
    std::vector<ClassicalCurvePoint> curve;
    curve.reserve(u0_list.size());
    for (double u0 : u0_list) {
      const CachedPoint p = eval(u0 / alpha);
      curve.push_back({u0, p.lambda, p.ok});
    }
    family.curves.push_back(std::move(curve));
  }
  return family;
}

double find_half_crossing(const ConvergeControl& ctrl, std::pair<double, double> bracket) {
  double lo = bracket.first;
  double hi = bracket.second;
  if (!(lo < hi))
    throw std::domain_error("find_half_crossing: invalid bracket");

  const double g_lo = converge_lambda_max(lo, ctrl).lambda_max - 0.5;
  const double g_hi = converge_lambda_max(hi, ctrl).lambda_max - 0.5;
  if (!(g_lo > 0.0 && g_hi < 0.0))
    throw std::domain_error("find_half_crossing: no sign change of lambda_max - 0.5 in bracket");

  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double g = converge_lambda_max(mid, ctrl).lambda_max - 0.5;
    if (std::fabs(g) <= 2e-3) return mid;
    if (g > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

SymmetryReport symmetry_residuals(double u0_star, const std::vector<double>& offsets,
                                  const ConvergeControl& ctrl) {
  for (double s : offsets)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::domain_error("symmetry_residuals: offsets must be non-negative");

  SymmetryReport report;
  report.u0_star = u0_star;
  report.offsets = offsets;

  std::map<double, ConvergedEstimate> cache;
  auto eval = [&](double u) -> const ConvergedEstimate& {
    auto it = cache.find(u);
    if (it == cache.end())
      it = cache.emplace(u, converge_lambda_max(u, ctrl)).first;
    return it->second;
  };

  for (double s : offsets) {
    const ConvergedEstimate& plus = eval(u0_star + s);
    const ConvergedEstimate& minus = eval(u0_star - s);
    const double r = (plus.lambda_max - 0.5) + (minus.lambda_max - 0.5);
    const double bar = plus.error_estimate + minus.error_estimate;
    // At s = 0 both terms probe the same point and the odd-symmetry
    // residual cancels exactly.
    report.residuals.push_back(s == 0.0 ? 0.0 : r);
    report.error_bars.push_back(bar);
    report.exceeds_bar.push_back(std::fabs(report.residuals.back()) > bar);
  }
  return report;
}

}  // namespace backflow
