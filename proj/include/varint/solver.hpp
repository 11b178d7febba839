#ifndef VARINT_SOLVER_HPP
#define VARINT_SOLVER_HPP

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace varint {

using Vec = std::vector<double>;

/// Shared settings for the implicit solves. abs_tolerance is a max-norm
/// threshold on the nonlinear residual, krylov_tolerance is relative to
/// the right-hand side of each inner linear solve.
struct SolverConfig {
  int max_outer_iterations = 50;
  double abs_tolerance = 1e-11;
  int krylov_restart = 30;
  int krylov_max_iterations = 5000;
  double krylov_tolerance = 1e-13;
};

struct SolveReport {
  int iterations_used = 0;
  double final_residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularJacobianError : SolverError {
  using SolverError::SolverError;
};
struct DivergenceError : SolverError {
  using SolverError::SolverError;
};
struct StagnationError : SolverError {
  using SolverError::SolverError;
};
struct KrylovBreakdownError : SolverError {
  using SolverError::SolverError;
};

double max_norm(const Vec& v);
double nrm2(const Vec& v);

/// In-place LU solve with partial pivoting, a is n x n row-major.
/// Throws SingularJacobianError if a pivot falls below 1e-14 of the
/// infinity norm of its original row.
void lu_solve(std::vector<double>& a, Vec& b, int n);

using ResidualFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<std::vector<double>(const Vec&)>;
using ApplyFn = std::function<void(const Vec&, Vec&)>;
/// apply_frozen_linear(frozen_state, u, out): out = L_{frozen} u.
using FrozenApplyFn = std::function<void(const Vec&, const Vec&, Vec&)>;

/// Undamped Newton iteration with user-supplied dense Jacobian.
/// Returns the best iterate with converged=false when the iteration
/// budget runs out; throws DivergenceError after three consecutive
/// residual increases.
std::pair<Vec, SolveReport> newton_solve(const ResidualFn& residual,
                                         const JacobianFn& jacobian, Vec x0,
                                         const SolverConfig& cfg);

/// Restarted GMRES, matrix-free. Solves A x = b to a relative residual
/// of rel_tol (measured against |b|), starting from x = 0.
struct KrylovStats {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};
KrylovStats gmres(const ApplyFn& apply, const Vec& b, Vec& x, int restart,
                  int max_iterations, double rel_tol);

/// Frozen-coefficient outer iteration for large field systems: each
/// outer step solves L_{x_m} d = -residual(x_m) matrix-free and updates
/// x_{m+1} = x_m + d. The fixed point satisfies residual(x) = 0
/// independently of the frozen operator, which only sets the
/// contraction rate. Throws StagnationError if the outer residual
/// decreases by less than 1% over five iterations.
std::pair<Vec, SolveReport> picard_krylov_solve(
    const FrozenApplyFn& apply_frozen_linear, const ResidualFn& residual,
    Vec x0, const SolverConfig& cfg);

/// Central finite-difference Jacobian with step 1e-7*(1+|x_j|).
/// Test oracle helper, not used by any production path.
JacobianFn finite_difference_jacobian(const ResidualFn& residual);

}  // namespace varint

#endif
