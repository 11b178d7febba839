#include "varint/solver.hpp"

#include <algorithm>
#include <cmath>

namespace varint {

double max_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double nrm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void lu_solve(std::vector<double>& a, Vec& b, int n) {
  // Row scales from the unfactored matrix drive the singularity test.
  std::vector<double> scale(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      scale[i] = std::max(scale[i], std::abs(a[i * n + j]));

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;

  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a[perm[k] * n + k]);
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(a[perm[i] * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    std::swap(perm[k], perm[p]);
    int rk = perm[k];
    if (best < 1e-14 * std::max(scale[rk], 1e-300))
      throw SingularJacobianError("lu_solve: pivot below 1e-14 of row scale");
    double piv = a[rk * n + k];
    for (int i = k + 1; i < n; ++i) {
      int ri = perm[i];
      double f = a[ri * n + k] / piv;
      a[ri * n + k] = f;
      for (int j = k + 1; j < n; ++j) a[ri * n + j] -= f * a[rk * n + j];
    }
  }

  Vec y(n);
  for (int i = 0; i < n; ++i) {
    double s = b[perm[i]];
    for (int j = 0; j < i; ++j) s -= a[perm[i] * n + j] * y[j];
    y[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int j = i + 1; j < n; ++j) s -= a[perm[i] * n + j] * b[j];
    b[i] = s / a[perm[i] * n + i];
  }
}

std::pair<Vec, SolveReport> newton_solve(const ResidualFn& residual,
                                         const JacobianFn& jacobian, Vec x0,
                                         const SolverConfig& cfg) {
  const int n = static_cast<int>(x0.size());
  Vec x = std::move(x0);
  Vec best_x = x;
  SolveReport rep;
  double best_res = std::numeric_limits<double>::infinity();
  double prev_res = std::numeric_limits<double>::infinity();
  int growth_streak = 0;

  for (int it = 0; it <= cfg.max_outer_iterations; ++it) {
    Vec r = residual(x);
    double rn = max_norm(r);
    rep.iterations_used = it;
    if (rn < best_res) {
      best_res = rn;
      best_x = x;
    }
    if (rn <= cfg.abs_tolerance) {
      rep.final_residual = rn;
      rep.converged = true;
      return {x, rep};
    }
    if (rn > prev_res) {
      if (++growth_streak >= 3)
        throw DivergenceError(
            "newton_solve: residual grew for 3 consecutive iterations");
    } else {
      growth_streak = 0;
    }
    prev_res = rn;
    if (it == cfg.max_outer_iterations) break;

    std::vector<double> jac = jacobian(x);
    for (double& ri : r) ri = -ri;
    lu_solve(jac, r, n);
    for (int i = 0; i < n; ++i) x[i] += r[i];
  }
  rep.final_residual = best_res;
  rep.converged = false;
  return {best_x, rep};
}

KrylovStats gmres(const ApplyFn& apply, const Vec& b, Vec& x, int restart,
                  int max_iterations, double rel_tol) {
  const int n = static_cast<int>(b.size());
  KrylovStats stats;
  x.assign(n, 0.0);
  const double bnorm = nrm2(b);
  if (bnorm == 0.0) {
    stats.converged = true;
    return stats;
  }

  const int m = std::max(1, restart);
  std::vector<Vec> v(m + 1, Vec(n));
  std::vector<double> h((m + 1) * m, 0.0);
  std::vector<double> cs(m), sn(m), g(m + 1);
  Vec w(n), r(n);

  while (stats.iterations < max_iterations) {
    // r = b - A x
    apply(x, w);
    for (int i = 0; i < n; ++i) r[i] = b[i] - w[i];
    double beta = nrm2(r);
    stats.rel_residual = beta / bnorm;
    if (stats.rel_residual <= rel_tol) {
      stats.converged = true;
      return stats;
    }
    for (int i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    int j = 0;
    for (; j < m && stats.iterations < max_iterations; ++j) {
      ++stats.iterations;
      apply(v[j], w);
      for (int i = 0; i <= j; ++i) {
        double hij = 0.0;
        for (int k = 0; k < n; ++k) hij += w[k] * v[i][k];
        h[i * m + j] = hij;
        for (int k = 0; k < n; ++k) w[k] -= hij * v[i][k];
      }
      double hnext = nrm2(w);
      if (!std::isfinite(hnext))
        throw KrylovBreakdownError("gmres: non-finite Arnoldi vector");
      h[(j + 1) * m + j] = hnext;
      bool happy = hnext <= 1e-300;
      if (!happy)
        for (int k = 0; k < n; ++k) v[j + 1][k] = w[k] / hnext;

      // Apply accumulated Givens rotations, then generate the new one.
      for (int i = 0; i < j; ++i) {
        double t = cs[i] * h[i * m + j] + sn[i] * h[(i + 1) * m + j];
        h[(i + 1) * m + j] =
            -sn[i] * h[i * m + j] + cs[i] * h[(i + 1) * m + j];
        h[i * m + j] = t;
      }
      double denom = std::hypot(h[j * m + j], h[(j + 1) * m + j]);
      if (denom == 0.0) denom = 1e-300;
      cs[j] = h[j * m + j] / denom;
      sn[j] = h[(j + 1) * m + j] / denom;
      h[j * m + j] = denom;
      h[(j + 1) * m + j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      stats.rel_residual = std::abs(g[j + 1]) / bnorm;
      if (stats.rel_residual <= rel_tol || happy) {
        ++j;
        break;
      }
    }

    // y = H^{-1} g, x += V y
    std::vector<double> y(j);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j; ++k) s -= h[i * m + k] * y[k];
      y[i] = s / h[i * m + i];
    }
    for (int i = 0; i < j; ++i)
      for (int k = 0; k < n; ++k) x[k] += y[i] * v[i][k];

    if (stats.rel_residual <= rel_tol) {
      stats.converged = true;
      return stats;
    }
  }
  return stats;
}

std::pair<Vec, SolveReport> picard_krylov_solve(
    const FrozenApplyFn& apply_frozen_linear, const ResidualFn& residual,
    Vec x0, const SolverConfig& cfg) {
  const int n = static_cast<int>(x0.size());
  Vec x = std::move(x0);
  Vec best_x = x;
  SolveReport rep;
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> history;

  Vec rhs(n), d(n);
  for (int it = 0; it <= cfg.max_outer_iterations; ++it) {
    Vec r = residual(x);
    double rn = max_norm(r);
    rep.iterations_used = it;
    history.push_back(rn);
    if (rn < best_res) {
      best_res = rn;
      best_x = x;
    }
    if (rn <= cfg.abs_tolerance) {
      rep.final_residual = rn;
      rep.converged = true;
      return {x, rep};
    }
    size_t k = history.size();
    if (k >= 6 && history[k - 1] >= 0.99 * history[k - 6])
      throw StagnationError(
          "picard_krylov_solve: outer residual decreased by <1% over 5 "
          "iterations");
    if (it == cfg.max_outer_iterations) break;

    for (int i = 0; i < n; ++i) rhs[i] = -r[i];
    ApplyFn op = [&](const Vec& u, Vec& out) {
      apply_frozen_linear(x, u, out);
    };
    gmres(op, rhs, d, cfg.krylov_restart, cfg.krylov_max_iterations,
          cfg.krylov_tolerance);
    for (int i = 0; i < n; ++i) x[i] += d[i];
  }
  rep.final_residual = best_res;
  rep.converged = false;
  return {best_x, rep};
}

JacobianFn finite_difference_jacobian(const ResidualFn& residual) {
  return [residual](const Vec& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> jac(n * n);
    Vec xp = x, xm = x;
    for (int j = 0; j < n; ++j) {
      double step = 1e-7 * (1.0 + std::abs(x[j]));
      xp[j] = x[j] + step;
      xm[j] = x[j] - step;
      Vec rp = residual(xp);
      Vec rm = residual(xm);
      for (int i = 0; i < n; ++i) jac[i * n + j] = (rp[i] - rm[i]) / (2 * step);
      xp[j] = x[j];
      xm[j] = x[j];
    }
    return jac;
  };
}

}  // namespace varint
