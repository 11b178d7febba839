#ifndef VARINT_FIELD_CORE_HPP
#define VARINT_FIELD_CORE_HPP

#include <array>
#include <utility>
#include <vector>

#include "varint/solver.hpp"

namespace varint {

/// One space-time grid cell with corners numbered counter-clockwise from
/// the lower-left: 1 = (t_k, x_i), 2 = (t_k, x_i+1), 3 = (t_k+1, x_i+1),
/// 4 = (t_k+1, x_i).
struct Cell2D {
  double phi1, phi2, phi3, phi4;
  double h_t, h_x;
};

struct CellOps {
  double avg, d_dt, d_dx;
};

/// Midpoint cell average and edge-averaged derivatives; exact for fields
/// affine in (t, x).
CellOps cell_ops(const Cell2D& c);

using Slice = std::vector<double>;  // one periodic-in-space time slice

/// 3x3 space-time stencils of the discrete wave equation, rows ordered
/// (k+1, k, k-1) and columns (i-1, i, i+1). The full relation is
/// time_stencil/(4 h_t^2) u = space_stencil/(4 h_x^2) u.
std::array<std::array<double, 3>, 3> wave_time_stencil();
std::array<std::array<double, 3>, 3> wave_space_stencil();

/// One step of the implicit discrete wave equation: solves the 9-point
/// relation for the slice at k+1 given slices at k and k-1.
std::pair<Slice, SolveReport> wave_step(const Slice& u_prev,
                                        const Slice& u_curr, double h_t,
                                        double h_x, const SolverConfig& cfg);

/// One step of the variational advection scheme: time derivative
/// averaged [1 2 1]/4 in space plus c times the centred x-derivative
/// averaged [1 2 1]/4 in time.
std::pair<Slice, SolveReport> advection_step(const Slice& u_prev,
                                             const Slice& u_curr, double c,
                                             double h_t, double h_x,
                                             const SolverConfig& cfg);

/// Second slice from a single initial condition via one step of the
/// first-order reduced form of each scheme.
std::pair<Slice, SolveReport> advection_first_slice(const Slice& u0, double c,
                                                    double h_t, double h_x,
                                                    const SolverConfig& cfg);
std::pair<Slice, SolveReport> wave_first_slice(const Slice& u0,
                                               const Slice& v0, double h_t,
                                               double h_x,
                                               const SolverConfig& cfg);

/// Conserved quantities of the advection scheme. The discrete density
/// straddles two consecutive slices:
///   N = h_x sum_i (u_{i,k} + u_{i+1,k} + u_{i+1,k+1} + u_{i,k+1}) / 4,
/// momentum is c N and kinetic energy c^2 N / 2.
struct AdvectionInvariants {
  double density, momentum, energy;
};
AdvectionInvariants advection_invariants(const Slice& u_k,
                                         const Slice& u_k1, double c,
                                         double h_x);

}  // namespace varint

#endif
