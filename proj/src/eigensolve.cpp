#include "backflow/eigensolve.hpp"

#include <algorithm>
#include <cblas.h>
#include <cmath>
#include <cstddef>
#include <lapacke.h>
#include <numbers>
#include <random>

namespace backflow {

namespace {

constexpr int kDenseThreshold = 1200;
// Below this the top of the spectrum sits in the near-zero cluster and a
// Krylov iteration cannot separate it reliably in double precision.
constexpr double kLanczosTrustFloor = 1e-6;

void fix_sign(std::vector<double>& v) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::fabs(v[i]) > std::fabs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
}

double top_pair_residual(const std::vector<double>& matrix, int n, double lambda,
                         const std::vector<double>& v) {
  std::vector<double> r(n);
  cblas_dsymv(CblasRowMajor, CblasUpper, n, 1.0, matrix.data(), n, v.data(), 1, 0.0,
              r.data(), 1);
  cblas_daxpy(n, -lambda, v.data(), 1, r.data(), 1);
  return cblas_dnrm2(n, r.data(), 1);
}

}  // namespace

SpectralResult dense_top_eigenpairs(const std::vector<double>& matrix, int n, int k) {
  if (n < 1 || static_cast<std::size_t>(n) * n != matrix.size())
    throw std::domain_error("dense_top_eigenpairs: bad dimensions");
  k = std::clamp(k, 1, n);

  std::vector<double> a(matrix);
  std::vector<double> w(n), z(static_cast<std::size_t>(n) * k);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(1, k)));
  lapack_int m = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_ROW_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, n - k + 1, n, 0.0, &m,
      w.data(), z.data(), k, isuppz.data());
  if (info != 0 || m != k)
    throw ConvergenceError("dense_top_eigenpairs: dsyevr failed", 0.0, 0.0);

  SpectralResult res;
  res.top_eigenvalues.assign(w.begin(), w.begin() + k);
  std::reverse(res.top_eigenvalues.begin(), res.top_eigenvalues.end());
  res.lambda_max = res.top_eigenvalues.front();
  res.top_eigenvector.resize(n);
  for (int i = 0; i < n; ++i)  // last column of z holds the top eigenvector
    res.top_eigenvector[i] = z[static_cast<std::size_t>(i) * k + (k - 1)];
  const double nrm = cblas_dnrm2(n, res.top_eigenvector.data(), 1);
  cblas_dscal(n, 1.0 / nrm, res.top_eigenvector.data(), 1);
  fix_sign(res.top_eigenvector);
  res.residual = top_pair_residual(matrix, n, res.lambda_max, res.top_eigenvector);
  return res;
}

SpectralResult lanczos_top_eigenpairs(const std::vector<double>& matrix, int n, int k,
                                      int max_iter, double rel_tol) {
  if (n < 1 || static_cast<std::size_t>(n) * n != matrix.size())
    throw std::domain_error("lanczos_top_eigenpairs: bad dimensions");
  k = std::clamp(k, 1, n);
  const int m_max = std::min(n, max_iter);

  // Deterministic start vector.
  std::vector<double> basis;  // rows: v_0 .. v_j
  basis.reserve(static_cast<std::size_t>(m_max) * n);
  {
    std::mt19937 rng(12345u);
    std::normal_distribution<double> dist;
    std::vector<double> v0(n);
    for (double& x : v0) x = dist(rng);
    const double nrm = cblas_dnrm2(n, v0.data(), 1);
    cblas_dscal(n, 1.0 / nrm, v0.data(), 1);
    basis.insert(basis.end(), v0.begin(), v0.end());
  }

  std::vector<double> alpha, beta;
  std::vector<double> w(n), coeff;
  std::vector<double> ritz, tz;
  double norm_est = 0.0;

  auto tridiag_solve = [&](int m) {
    ritz.assign(m, 0.0);
    tz.assign(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> d(alpha.begin(), alpha.begin() + m);
    std::vector<double> e(m > 1 ? m - 1 : 1, 0.0);
    for (int i = 0; i + 1 < m; ++i) e[i] = beta[i];
    if (LAPACKE_dstevd(LAPACK_ROW_MAJOR, 'V', m, d.data(), e.data(), tz.data(), m) != 0)
      throw ConvergenceError("lanczos: tridiagonal solve failed", 0.0, 0.0);
    ritz = d;  // ascending
  };

  int m = 0;
  bool converged = false;
  double resid_bound = 0.0;
  while (m < m_max) {
    const double* vj = basis.data() + static_cast<std::size_t>(m) * n;
    cblas_dsymv(CblasRowMajor, CblasUpper, n, 1.0, matrix.data(), n, vj, 1, 0.0, w.data(), 1);
    if (m > 0)
      cblas_daxpy(n, -beta[m - 1], basis.data() + static_cast<std::size_t>(m - 1) * n, 1,
                  w.data(), 1);
    const double a = cblas_ddot(n, vj, 1, w.data(), 1);
    alpha.push_back(a);
    cblas_daxpy(n, -a, vj, 1, w.data(), 1);
    // full reorthogonalization, two passes
    coeff.assign(m + 1, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      cblas_dgemv(CblasRowMajor, CblasNoTrans, m + 1, n, 1.0, basis.data(), n, w.data(), 1,
                  0.0, coeff.data(), 1);
      cblas_dgemv(CblasRowMajor, CblasTrans, m + 1, n, -1.0, basis.data(), n, coeff.data(),
                  1, 1.0, w.data(), 1);
    }
    const double b = cblas_dnrm2(n, w.data(), 1);
    ++m;

    const bool breakdown = b < 1e-14 * std::max(1.0, norm_est);
    if (m % 10 == 0 || m == m_max || breakdown || m == n) {
      tridiag_solve(m);
      norm_est = std::max(std::fabs(ritz.front()), std::fabs(ritz.back()));
      const double s_last = tz[static_cast<std::size_t>(m - 1) * m + (m - 1)];
      resid_bound = std::fabs(b * s_last);
      if (breakdown || m == n || resid_bound <= rel_tol * std::max(1.0, norm_est)) {
        converged = true;
        break;
      }
      if (m >= 150 && ritz.back() < kLanczosTrustFloor)
        throw ConvergenceError("lanczos: top of spectrum below trust floor", ritz.back(),
                               resid_bound);
    }
    if (breakdown || m == n) break;

    beta.push_back(b);
    cblas_dscal(n, 1.0 / b, w.data(), 1);
    basis.insert(basis.end(), w.begin(), w.end());
  }

  if (!converged)
    throw ConvergenceError("lanczos: no convergence within iteration budget",
                           ritz.empty() ? 0.0 : ritz.back(), resid_bound);
  if (ritz.back() < kLanczosTrustFloor)
    throw ConvergenceError("lanczos: top of spectrum below trust floor", ritz.back(),
                           resid_bound);

  SpectralResult res;
  const int kk = std::min(k, m);
  for (int i = 0; i < kk; ++i) res.top_eigenvalues.push_back(ritz[m - 1 - i]);
  res.lambda_max = res.top_eigenvalues.front();
  // top eigenvector = basis^T * top tridiagonal eigenvector
  res.top_eigenvector.assign(n, 0.0);
  std::vector<double> s(m);
  for (int i = 0; i < m; ++i) s[i] = tz[static_cast<std::size_t>(i) * m + (m - 1)];
  cblas_dgemv(CblasRowMajor, CblasTrans, m, n, 1.0, basis.data(), n, s.data(), 1, 0.0,
              res.top_eigenvector.data(), 1);
  const double nrm = cblas_dnrm2(n, res.top_eigenvector.data(), 1);
  cblas_dscal(n, 1.0 / nrm, res.top_eigenvector.data(), 1);
  fix_sign(res.top_eigenvector);
  res.residual = top_pair_residual(matrix, n, res.lambda_max, res.top_eigenvector);
  return res;
}

std::vector<double> all_eigenvalues(const DiscretizedOperator& op) {
  const int n = op.n();
  std::vector<double> a(op.matrix);
  std::vector<double> w(n);
  if (LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', n, a.data(), n, w.data()) != 0)
    throw ConvergenceError("all_eigenvalues: dsyev failed", 0.0, 0.0);
  return w;
}

std::vector<double> general_eigenvalues_real(const std::vector<double>& matrix, int n) {
  std::vector<double> a(matrix);
  std::vector<double> wr(n), wi(n);
  if (LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(),
                    nullptr, n, nullptr, n) != 0)
    throw ConvergenceError("general_eigenvalues_real: dgeev failed", 0.0, 0.0);
  std::sort(wr.begin(), wr.end());
  return wr;
}

SpectralResult largest_eigenpair(const DiscretizedOperator& op, int k) {
  const int n = op.n();
  if (k < 1 || k > n)
    throw std::domain_error("largest_eigenpair: k out of range");
  SpectralResult res;
  if (n <= kDenseThreshold) {
    res = dense_top_eigenpairs(op.matrix, n, k);
  } else {
    try {
      res = lanczos_top_eigenpairs(op.matrix, n, k);
    } catch (const ConvergenceError&) {
      res = dense_top_eigenpairs(op.matrix, n, k);
    }
  }
  res.spec = op.spec;
  return res;
}

int nodes_for_window(double u0, double u_max, double base_density, const ConvergeControl& ctrl) {
  const double len = u_max - u0;
  const double u_abs = std::max(std::fabs(u0), std::fabs(u_max));
  const double half_period = std::numbers::pi / (2.0 * std::max(u_abs, 1e-12));
  const double by_density = base_density * len;
  const double by_oscillation = ctrl.nodes_per_half_period * len / half_period;
  return static_cast<int>(std::ceil(std::max({by_density, by_oscillation, 1.0})));
}

namespace {

double solve_window(double u0, double u_max, int n) {
  OperatorSpec spec{u0, u_max, n, QuadScheme::UniformMidpoint, 8};
  const QuadratureGrid grid = build_grid(spec);
  const DiscretizedOperator op = assemble_operator(grid, spec);
  return largest_eigenpair(op, 1).lambda_max;
}

}  // namespace

ConvergedEstimate converge_lambda_max(double u0, const ConvergeControl& ctrl) {
  if (!std::isfinite(u0))
    throw std::domain_error("converge_lambda_max: non-finite u0");
  if (!(ctrl.tol > 0.0) || ctrl.n_init < 1 || ctrl.n_max < 1)
    throw std::domain_error("converge_lambda_max: invalid control record");

  const double L0 = std::max(ctrl.min_window, ctrl.min_window + std::fabs(u0));
  const double base_density = std::max(ctrl.density_floor, ctrl.n_init / L0);

  ConvergedEstimate est;
  est.u0 = u0;

  // Truncation phase: widen [u0, u0 + L] by doubling L.
  std::vector<ConvergeHistoryEntry> trunc_hist;
  std::vector<double> deltas;
  bool budget_hit = false;
  double L = L0;
  for (;;) {
    const double u_max = u0 + L;
    const int n = nodes_for_window(u0, u_max, base_density, ctrl);
    if (n > ctrl.n_max) {
      budget_hit = true;
      break;
    }
    const double lam = solve_window(u0, u_max, n);
    trunc_hist.push_back({n, u_max, lam});
    if (trunc_hist.size() >= 2) {
      deltas.push_back(lam - trunc_hist[trunc_hist.size() - 2].lambda);
      if (std::fabs(deltas.back()) < ctrl.tol / 2) break;
    }
    L *= 2.0;
  }

  if (trunc_hist.empty())
    throw ConvergenceError("converge_lambda_max: initial window exceeds node budget", 0.0, 0.0);

  double trunc_corr = 0.0;
  double trunc_tail = 0.0;
  if (budget_hit) {
    if (deltas.size() >= 2) {
      const double r = deltas.back() / deltas[deltas.size() - 2];
      if (r < 0.25 || r > 0.75)
        throw ConvergenceError("converge_lambda_max: truncation tail not geometric within budget",
                               trunc_hist.back().lambda, std::fabs(deltas.back()));
      trunc_corr = deltas.back() * r / (1.0 - r);
      est.truncation_extrapolated = true;
    } else if (deltas.size() == 1) {
      trunc_corr = deltas.back();  // assume the observed halving-per-doubling tail
      est.truncation_extrapolated = true;
    } else {
      throw ConvergenceError("converge_lambda_max: node budget allows a single window only",
                             trunc_hist.back().lambda, 0.0);
    }
    trunc_tail = 0.5 * std::fabs(trunc_corr);
  } else {
    trunc_tail = deltas.empty() ? 0.0 : std::fabs(deltas.back());
  }

  // Refinement phase at the final window.
  const double u_max_f = trunc_hist.back().u_max;
  int n_f = trunc_hist.back().n;
  double lam_f = trunc_hist.back().lambda;

  std::vector<ConvergeHistoryEntry> refine_hist;
  const int n_quarter = std::max(n_f / 4, 1);
  const int n_half = std::max(n_f / 2, 1);
  const double lam_q = solve_window(u0, u_max_f, n_quarter);
  const double lam_h = solve_window(u0, u_max_f, n_half);
  refine_hist.push_back({n_quarter, u_max_f, lam_q});
  refine_hist.push_back({n_half, u_max_f, lam_h});

  double refine_delta = lam_f - lam_h;
  const double coarse_delta = lam_h - lam_q;
  if (refine_delta != 0.0) est.refinement_ratio = coarse_delta / refine_delta;

  while (std::fabs(refine_delta) >= ctrl.tol / 2 && 2 * n_f <= ctrl.n_max) {
    const double prev = refine_delta;
    n_f *= 2;
    const double lam_new = solve_window(u0, u_max_f, n_f);
    refine_delta = lam_new - lam_f;
    lam_f = lam_new;
    if (refine_delta != 0.0) est.refinement_ratio = prev / refine_delta;
    refine_hist.push_back({n_f, u_max_f, lam_f});
  }

  const double lam_rich = lam_f + refine_delta / 3.0;  // O(h^2) Richardson step
  est.lambda_max = lam_rich + trunc_corr;
  est.error_estimate = std::hypot(std::fabs(refine_delta) / 3.0, trunc_tail);
  est.n_final = n_f;
  est.u_max_final = u_max_f;

  // History ordered so the final mesh level comes last.
  est.history.assign(trunc_hist.begin(), trunc_hist.end() - 1);
  est.history.push_back(refine_hist[0]);
  est.history.push_back(refine_hist[1]);
  est.history.push_back(trunc_hist.back());
  est.history.insert(est.history.end(), refine_hist.begin() + 2, refine_hist.end());
  return est;
}

}  // namespace backflow
