#include <doctest.h>

#include <cmath>
#include <random>

#include "varint/solver.hpp"

using namespace varint;

TEST_CASE("newton: scalar quadratic x^2 - 4") {
  SolverConfig cfg;
  std::vector<double> residuals;
  ResidualFn res = [&](const Vec& x) {
    Vec r{x[0] * x[0] - 4.0};
    residuals.push_back(std::abs(r[0]));
    return r;
  };
  JacobianFn jac = [](const Vec& x) { return std::vector<double>{2.0 * x[0]}; };
  auto [x, rep] = newton_solve(res, jac, Vec{3.0}, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations_used <= 7);
  CHECK(std::abs(x[0] - 2.0) < 1e-11);

  // Quadratic convergence once |r| < 1e-3.
  for (size_t i = 0; i + 1 < residuals.size(); ++i) {
    if (residuals[i] < 1e-3 && residuals[i] > 0 && residuals[i + 1] > 0)
      CHECK(residuals[i + 1] <= 10.0 * residuals[i] * residuals[i]);
  }
}

TEST_CASE("newton: linear system converges in one iteration") {
  SolverConfig cfg;
  Vec b{1.5, -2.25, 0.75};
  ResidualFn res = [&](const Vec& x) {
    Vec r(3);
    for (int i = 0; i < 3; ++i) r[i] = x[i] - b[i];
    return r;
  };
  JacobianFn jac = [](const Vec&) {
    return std::vector<double>{1, 0, 0, 0, 1, 0, 0, 0, 1};
  };
  auto [x, rep] = newton_solve(res, jac, Vec{10.0, -3.0, 0.0}, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations_used == 1);
  for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

TEST_CASE("newton: circle-line intersection") {
  SolverConfig cfg;
  ResidualFn res = [](const Vec& x) {
    return Vec{x[0] * x[0] + x[1] * x[1] - 1.0, x[0] - x[1]};
  };
  JacobianFn jac = [](const Vec& x) {
    return std::vector<double>{2 * x[0], 2 * x[1], 1.0, -1.0};
  };
  auto [x, rep] = newton_solve(res, jac, Vec{1.0, 0.0}, cfg);
  CHECK(rep.converged);
  const double root = std::sqrt(2.0) / 2.0;
  CHECK(std::abs(x[0] - root) < 1e-11);
  CHECK(std::abs(x[1] - root) < 1e-11);
}

TEST_CASE("newton: singular jacobian reported") {
  SolverConfig cfg;
  ResidualFn res = [](const Vec& x) { return Vec{x[0] * x[0]}; };
  JacobianFn jac = [](const Vec&) { return std::vector<double>{0.0}; };
  CHECK_THROWS_AS(newton_solve(res, jac, Vec{1.0}, cfg),
                  SingularJacobianError);
}

TEST_CASE("newton: divergence detection") {
  SolverConfig cfg;
  // Jacobian with flipped sign makes the iteration run away from the root.
  ResidualFn res = [](const Vec& x) { return Vec{x[0] * x[0] - 4.0}; };
  JacobianFn jac = [](const Vec& x) { return std::vector<double>{-0.2 * x[0]}; };
  CHECK_THROWS_AS(newton_solve(res, jac, Vec{3.0}, cfg), DivergenceError);
}

TEST_CASE("newton: determinism") {
  SolverConfig cfg;
  ResidualFn res = [](const Vec& x) {
    return Vec{std::sin(x[0]) + 0.5 * x[1], x[1] * x[1] * x[1] + x[0] - 1.2};
  };
  JacobianFn jac = finite_difference_jacobian(res);
  auto [x1, r1] = newton_solve(res, jac, Vec{0.3, 0.4}, cfg);
  auto [x2, r2] = newton_solve(res, jac, Vec{0.3, 0.4}, cfg);
  CHECK(x1[0] == x2[0]);
  CHECK(x1[1] == x2[1]);
  CHECK(r1.iterations_used == r2.iterations_used);
}

TEST_CASE("gmres solves a small nonsymmetric system") {
  const int n = 40;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  std::vector<double> a(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = (i == j ? 4.0 : 0.0) + unif(rng);
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = unif(rng);

  ApplyFn apply = [&](const Vec& u, Vec& out) {
    out.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i] += a[i * n + j] * u[j];
  };
  Vec x;
  auto st = gmres(apply, b, x, 20, 500, 1e-13);
  CHECK(st.converged);
  Vec ax(n);
  apply(x, ax);
  for (int i = 0; i < n; ++i) ax[i] -= b[i];
  CHECK(max_norm(ax) < 1e-11 * max_norm(b));
}

TEST_CASE("picard: bilinear scalar fixed point") {
  SolverConfig cfg;
  // x * a(x) = c with a(x) = 1 + 0.1 x, c = 1.1; the solution is x = 1.
  ResidualFn res = [](const Vec& x) {
    return Vec{x[0] * (1.0 + 0.1 * x[0]) - 1.1};
  };
  FrozenApplyFn frozen = [](const Vec& xf, const Vec& u, Vec& out) {
    out.assign(1, (1.0 + 0.1 * xf[0]) * u[0]);
  };
  auto [x, rep] = picard_krylov_solve(frozen, res, Vec{1.0}, cfg);
  CHECK(rep.converged);
  CHECK(std::abs(x[0] - 1.0) < 1e-11);
}

TEST_CASE("picard: pure linear system equals one inner solve") {
  SolverConfig cfg;
  const int n = 12;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unif(-0.3, 0.3);
  std::vector<double> a(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = (i == j ? 2.0 : 0.0) + unif(rng);
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = unif(rng);

  auto matvec = [&](const Vec& u, Vec& out) {
    out.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i] += a[i * n + j] * u[j];
  };
  ResidualFn res = [&](const Vec& x) {
    Vec out;
    matvec(x, out);
    for (int i = 0; i < n; ++i) out[i] -= b[i];
    return out;
  };
  FrozenApplyFn frozen = [&](const Vec&, const Vec& u, Vec& out) {
    matvec(u, out);
  };
  auto [x, rep] = picard_krylov_solve(frozen, res, Vec(n, 0.0), cfg);
  CHECK(rep.converged);
  // One corrective solve plus the verification pass.
  CHECK(rep.iterations_used <= 2);

  Vec xg;
  gmres(ApplyFn(matvec), b, xg, cfg.krylov_restart, cfg.krylov_max_iterations,
        cfg.krylov_tolerance);
  for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - xg[i]) < 1e-10);
}

TEST_CASE("picard vs newton with finite-difference jacobian") {
  SolverConfig cfg;
  const int n = 48;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unif(-0.2, 0.2);
  std::vector<double> a(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = (i == j ? 3.0 : 0.0) + unif(rng);
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = 0.5 * unif(rng);

  // Mildly nonlinear: A x + 0.2 * mean(x) * x = b.
  auto mean = [n](const Vec& x) {
    double s = 0;
    for (double v : x) s += v;
    return s / n;
  };
  ResidualFn res = [&](const Vec& x) {
    Vec out(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i] += a[i * n + j] * x[j];
    double m = mean(x);
    for (int i = 0; i < n; ++i) out[i] += 0.2 * m * x[i] - b[i];
    return out;
  };
  FrozenApplyFn frozen = [&](const Vec& xf, const Vec& u, Vec& out) {
    out.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i] += a[i * n + j] * u[j];
    double m = mean(xf);
    for (int i = 0; i < n; ++i) out[i] += 0.2 * m * u[i];
  };

  auto [xp, rp] = picard_krylov_solve(frozen, res, Vec(n, 0.0), cfg);
  auto [xn, rn] = newton_solve(res, finite_difference_jacobian(res),
                               Vec(n, 0.0), cfg);
  CHECK(rp.converged);
  CHECK(rn.converged);
  Vec diff(n);
  for (int i = 0; i < n; ++i) diff[i] = xp[i] - xn[i];
  CHECK(max_norm(diff) < 10.0 * cfg.abs_tolerance);
}

TEST_CASE("picard: stagnation reported") {
  SolverConfig cfg;
  // A badly scaled frozen operator shrinks the residual by only 0.1%
  // per outer iteration.
  ResidualFn res = [](const Vec& x) { return Vec{x[0] - 1.0}; };
  FrozenApplyFn frozen = [](const Vec&, const Vec& u, Vec& out) {
    out.assign(1, 1000.0 * u[0]);
  };
  CHECK_THROWS_AS(picard_krylov_solve(frozen, res, Vec{0.0}, cfg),
                  StagnationError);
}
