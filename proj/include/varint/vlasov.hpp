#ifndef VARINT_VLASOV_HPP
#define VARINT_VLASOV_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "varint/array2d.hpp"
#include "varint/solver.hpp"

namespace varint {

/// Uniform periodic-in-x phasespace mesh. x_i = i h_x with
/// h_x = L_x / n_x; v_j = -v_max + j h_v with h_v = 2 v_max / (n_v - 1),
/// so the velocity grid is symmetric about 0 (odd n_v recommended).
struct PhaseGrid {
  int n_x = 0, n_v = 0;
  double L_x = 0.0, v_max = 0.0;
  double h_x = 0.0, h_v = 0.0;
  double h_t = 0.0;

  PhaseGrid() = default;
  PhaseGrid(int nx, int nv, double Lx, double vmax, double ht)
      : n_x(nx), n_v(nv), L_x(Lx), v_max(vmax), h_x(Lx / nx),
        h_v(2.0 * vmax / (nv - 1)), h_t(ht) {
    if (n_x < 4 || n_v < 4)
      throw std::invalid_argument("PhaseGrid: need n_x, n_v >= 4");
    if (!(L_x > 0.0) || !(v_max > 0.0) || !(h_t > 0.0))
      throw std::invalid_argument("PhaseGrid: L_x, v_max, h_t must be > 0");
  }

  double x(int i) const { return i * h_x; }
  double v(int j) const { return -v_max + j * h_v; }
};

using DistributionField = Array2D;  // f(i, j) on the phase grid

/// max |f| on the velocity boundary rows over max f; the run is flagged
/// when this exceeds 1e-8 and invalid above 1e-4.
double boundary_ratio(const DistributionField& f);

struct VlasovState {
  DistributionField f;
  Vec phi;             // zero-mean spatial potential
  double t = 0.0;
  int gravity_sign = +1;  // +1 electrostatic, -1 Jeans
};

struct CollisionParams {
  double nu = 0.0;
};

struct VlasovDiagnostics {
  double N;   // total particle number
  double L2;  // squared norm
  double P;   // momentum
  double E;   // energy, kinetic + potential field energy
  double S;   // entropy
};

struct UnsupportedConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Conservative second-order Arakawa bracket, the equal-weight
/// combination (J++ + J+x + Jx+)/3. Periodic in x; values outside the
/// velocity range count as zero.
Array2D arakawa_bracket(const Array2D& f, const Array2D& h,
                        const PhaseGrid& grid);

/// Nine-point weighted phasespace average of the reduced scheme,
/// (1/16)[1 2 1; 2 4 2; 1 2 1] over (x, v) neighbours.
Array2D ninepoint_average(const Array2D& f, const PhaseGrid& grid);

/// Reduced discrete Poisson solve
///   Delta_fd phi_i = sign * ((n_{i-1} + 2 n_i + n_{i+1})/4 - 1),
/// n_i = h_v sum_j f_ij, right-hand side projected to zero mean and phi
/// returned zero-mean. sign = +1 electrostatic, -1 Jeans (gravity).
Vec poisson_solve(const DistributionField& f, const PhaseGrid& grid,
                  int gravity_sign = +1);

/// Moment-conserving Lenard-Bernstein-type collision operator,
///   C_ij = nu [ (f_{j-1} - 2 f_j + f_{j+1}) / h_v^2
///             + ((v_{j+1}-u_i) f_{j+1} - (v_{j-1}-u_i) f_{j-1})
///               / (2 h_v (eps_i - u_i^2)) ].
Array2D collision_operator(const DistributionField& f, const PhaseGrid& grid,
                           double nu);

enum class Predictor { previous_step, linear_step };

/// One step of the nonlinear variational integrator: f and phi at k+1
/// jointly satisfy the reduced Vlasov equation (with the space-time
/// averaged collision source) and the reduced Poisson equation. Solved
/// by picard_krylov_solve with h frozen per outer iterate; the Poisson
/// equation is eliminated exactly inside the operator.
std::pair<VlasovState, SolveReport> step_nonlinear(
    const VlasovState& state, const PhaseGrid& grid,
    const CollisionParams& coll, const SolverConfig& cfg,
    Predictor predictor = Predictor::previous_step);

/// Linearised integrator: one coupled linear solve per step, no outer
/// iteration. Collisions are not supported on this path.
std::pair<VlasovState, SolveReport> step_linear(
    const VlasovState& state, const PhaseGrid& grid, const SolverConfig& cfg,
    const CollisionParams& coll = CollisionParams{});

enum class ScenarioKind { landau, twostream, jeans };

/// f_M (1 + A cos(kx)) for landau/jeans, v^2 f_M (1 + A cos(kx)) for
/// twostream, with f_M = exp(-v^2/2)/sqrt(2 pi); phi from poisson_solve.
VlasovState init_scenario(ScenarioKind kind, double amplitude,
                          double wavenumber, const PhaseGrid& grid);

VlasovDiagnostics vlasov_diagnostics(const VlasovState& state,
                                     const PhaseGrid& grid);

/// Electrostatic field energy (1/2) sum_i ((phi_{i+1}-phi_i)/h_x)^2 h_x.
double field_energy(const VlasovState& state, const PhaseGrid& grid);

/// Full coupled one-step residual (Vlasov rows then Poisson rows) for a
/// candidate (f_next, phi_next); the dense-Newton oracle runs on this.
/// The Poisson rows carry a mean(phi) gauge term so the system is
/// nonsingular with the zero-mean solution unchanged.
Vec nonlinear_residual(const VlasovState& state, const Array2D& f_next,
                       const Vec& phi_next, const PhaseGrid& grid,
                       const CollisionParams& coll);

}  // namespace varint

#endif
