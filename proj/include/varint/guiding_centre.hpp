#ifndef VARINT_GUIDING_CENTRE_HPP
#define VARINT_GUIDING_CENTRE_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "varint/solver.hpp"
#include "varint/tokamak.hpp"

namespace varint {

enum class Scheme { trapezoidal, midpoint };

/// Poloidal-plane guiding-centre state: (R, Z) coordinates with their
/// conjugate momenta. mu and p_phi enter through GCParams.
struct GCState2D {
  double qR, qZ;
  double pR, pZ;
  double t = 0.0;
};

/// Full tokamak guiding-centre state (R, Z, phi, u) with momenta.
struct GCState4D {
  double qR, qZ, qPhi, qU;
  double pR, pZ, pPhi, pU;
  double t = 0.0;
};

struct GCParams {
  double mu = 0.0;
  double p_phi = 0.0;  // conserved toroidal momentum, 2D reduction only
  TokamakParams tokamak{};
  double h = 0.0;  // timestep

  void validate() const {
    if (h == 0.0) throw std::domain_error("GCParams: h must be nonzero");
    if (mu < 0.0) throw std::domain_error("GCParams: mu must be >= 0");
    tokamak.validate();
  }
};

/// Initial momenta from coordinates, p = A*(q0): the 2D effective
/// potential absorbs u(R,Z; p_phi), the 4D one uses u0 computed from
/// p_phi so that the discrete p_phi starts at its prescribed value.
GCState2D make_initial_2d(const GCParams& p, double R, double Z);
GCState4D make_initial_4d(const GCParams& p, double R, double Z,
                          double phi = 0.0);

/// One step of the position-momentum variational map. The coordinate
/// pair solves a 2x2 nonlinear system by Newton iteration with the
/// analytic Jacobian; the momenta follow explicitly.
std::pair<GCState2D, SolveReport> step_2d(Scheme scheme, const GCState2D& s,
                                          const GCParams& p,
                                          const SolverConfig& cfg);

std::pair<GCState4D, SolveReport> step_4d(Scheme scheme, const GCState4D& s,
                                          const GCParams& p,
                                          const SolverConfig& cfg);

/// Residual of the coordinate system solved inside step_2d/step_4d,
/// exposed so tests can cross-check the Newton path against a dense
/// finite-difference-Jacobian solve of the identical system.
Vec step_residual(Scheme scheme, const GCState2D& s, const GCParams& p,
                  const Vec& q_next);
Vec step_residual(Scheme scheme, const GCState4D& s, const GCParams& p,
                  const Vec& q_next);

/// One classical RK4 stage update for an autonomous field.
template <std::size_t N, class F>
std::array<double, N> rk4_classic(const F& rhs, const std::array<double, N>& y,
                                  double h) {
  std::array<double, N> k1 = rhs(y), s{};
  for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + 0.5 * h * k1[i];
  std::array<double, N> k2 = rhs(s);
  for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + 0.5 * h * k2[i];
  std::array<double, N> k3 = rhs(s);
  for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + h * k3[i];
  std::array<double, N> k4 = rhs(s);
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

/// Classical RK4 on the continuous equations of motion; comparison
/// baseline only. 2D uses the linearised Euler-Lagrange form, 4D solves
/// the degenerate-Lagrangian linear system for the state derivative.
GCState2D rk4_step(const GCState2D& s, const GCParams& p);
GCState4D rk4_step(const GCState4D& s, const GCParams& p);

/// Palindromic composition coefficients, sum = 1.
struct CompositionTable {
  std::vector<double> gammas;

  explicit CompositionTable(std::vector<double> g);
  /// Built-ins: "4o3s", "4o5s", "6o7s", "6o9s".
  static CompositionTable named(const std::string& name);
};

template <class State>
using OneStepMap =
    std::function<std::pair<State, SolveReport>(const State&, double h)>;

/// Composition of a self-adjoint base method with substeps gamma_i * h.
template <class State>
OneStepMap<State> compose(OneStepMap<State> base, CompositionTable table) {
  return [base = std::move(base), table = std::move(table)](
             const State& s, double h) -> std::pair<State, SolveReport> {
    State cur = s;
    SolveReport total;
    total.converged = true;
    total.final_residual = 0.0;
    for (double g : table.gammas) {
      auto [next, rep] = base(cur, g * h);
      cur = next;
      total.iterations_used += rep.iterations_used;
      total.final_residual = std::max(total.final_residual, rep.final_residual);
      total.converged = total.converged && rep.converged;
      if (!total.converged) return {cur, total};
    }
    return {cur, total};
  };
}

struct GCDiagnostics {
  double H;      // energy, H = u^2/2 + mu B
  double p_phi;  // toroidal momentum
};

GCDiagnostics gc_diagnostics(const GCState2D& s, const GCParams& p);
GCDiagnostics gc_diagnostics(const GCState4D& s, const GCParams& p);

}  // namespace varint

#endif
