#include "varint/field_core.hpp"

#include <cmath>

namespace varint {

CellOps cell_ops(const Cell2D& c) {
  CellOps o{};
  o.avg = 0.25 * (c.phi1 + c.phi2 + c.phi3 + c.phi4);
  o.d_dt = 0.5 * ((c.phi4 - c.phi1) / c.h_t + (c.phi3 - c.phi2) / c.h_t);
  o.d_dx = 0.5 * ((c.phi2 - c.phi1) / c.h_x + (c.phi3 - c.phi4) / c.h_x);
  return o;
}

std::array<std::array<double, 3>, 3> wave_time_stencil() {
  return {{{1, 2, 1}, {-2, -4, -2}, {1, 2, 1}}};
}

std::array<std::array<double, 3>, 3> wave_space_stencil() {
  return {{{1, -2, 1}, {2, -4, 2}, {1, -2, 1}}};
}

namespace {

int wrap(int i, int n) { return (i % n + n) % n; }

// Solve the periodic 3-point system  lo*u_{i-1} + di*u_i + hi*u_{i+1} = b
// through the shared Krylov machinery.
std::pair<Slice, SolveReport> solve_periodic_3pt(double lo, double di,
                                                 double hi, const Slice& b,
                                                 const SolverConfig& cfg) {
  const int n = static_cast<int>(b.size());
  auto matvec = [&](const Vec& u, Vec& out) {
    out.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
      out[i] = lo * u[wrap(i - 1, n)] + di * u[i] + hi * u[wrap(i + 1, n)];
  };
  ResidualFn res = [&](const Vec& u) {
    Vec out;
    matvec(u, out);
    for (int i = 0; i < n; ++i) out[i] -= b[i];
    return out;
  };
  FrozenApplyFn frozen = [&](const Vec&, const Vec& u, Vec& out) {
    matvec(u, out);
  };
  return picard_krylov_solve(frozen, res, Vec(n, 0.0), cfg);
}

double stencil_row(const std::array<double, 3>& w, const Slice& u, int i,
                   int n) {
  return w[0] * u[wrap(i - 1, n)] + w[1] * u[i] + w[2] * u[wrap(i + 1, n)];
}

}  // namespace

std::pair<Slice, SolveReport> wave_step(const Slice& u_prev,
                                        const Slice& u_curr, double h_t,
                                        double h_x, const SolverConfig& cfg) {
  const int n = static_cast<int>(u_curr.size());
  const auto T = wave_time_stencil();
  const auto X = wave_space_stencil();
  const double ct = 1.0 / (4.0 * h_t * h_t);
  const double cx = 1.0 / (4.0 * h_x * h_x);

  // Rows (k) and (k-1) of the relation move to the right-hand side.
  Slice b(n);
  for (int i = 0; i < n; ++i)
    b[i] = -ct * (stencil_row(T[1], u_curr, i, n) +
                  stencil_row(T[2], u_prev, i, n)) +
           cx * (stencil_row(X[1], u_curr, i, n) +
                 stencil_row(X[2], u_prev, i, n));

  const double lo = ct * T[0][0] - cx * X[0][0];
  const double di = ct * T[0][1] - cx * X[0][1];
  return solve_periodic_3pt(lo, di, lo, b, cfg);
}

std::pair<Slice, SolveReport> advection_step(const Slice& u_prev,
                                             const Slice& u_curr, double c,
                                             double h_t, double h_x,
                                             const SolverConfig& cfg) {
  const int n = static_cast<int>(u_curr.size());
  const double at = 1.0 / (8.0 * h_t);
  const double ax = c / (8.0 * h_x);

  Slice b(n);
  for (int i = 0; i < n; ++i) {
    const int im = wrap(i - 1, n), ip = wrap(i + 1, n);
    b[i] = at * (u_prev[im] + 2 * u_prev[i] + u_prev[ip]) -
           ax * (2 * (u_curr[ip] - u_curr[im]) + (u_prev[ip] - u_prev[im]));
  }
  return solve_periodic_3pt(at - ax, 2 * at, at + ax, b, cfg);
}

std::pair<Slice, SolveReport> advection_first_slice(const Slice& u0, double c,
                                                    double h_t, double h_x,
                                                    const SolverConfig& cfg) {
  const int n = static_cast<int>(u0.size());
  const double at = 1.0 / (4.0 * h_t);
  const double ax = c / (4.0 * h_x);
  Slice b(n);
  for (int i = 0; i < n; ++i) {
    const int im = wrap(i - 1, n), ip = wrap(i + 1, n);
    b[i] = at * (u0[im] + 2 * u0[i] + u0[ip]) - ax * (u0[ip] - u0[im]);
  }
  return solve_periodic_3pt(at - ax, 2 * at, at + ax, b, cfg);
}

std::pair<Slice, SolveReport> wave_first_slice(const Slice& u0,
                                               const Slice& v0, double h_t,
                                               double h_x,
                                               const SolverConfig& cfg) {
  // Implicit midpoint on the first-order system (u, u_t):
  // (I - h^2/4 Dxx) u1 = u0 + h v0 + h^2/4 Dxx u0.
  const int n = static_cast<int>(u0.size());
  const double a = h_t * h_t / (4.0 * h_x * h_x);
  Slice b(n);
  for (int i = 0; i < n; ++i) {
    const int im = wrap(i - 1, n), ip = wrap(i + 1, n);
    b[i] = u0[i] + h_t * v0[i] + a * (u0[im] - 2 * u0[i] + u0[ip]);
  }
  return solve_periodic_3pt(-a, 1.0 + 2 * a, -a, b, cfg);
}

AdvectionInvariants advection_invariants(const Slice& u_k, const Slice& u_k1,
                                         double c, double h_x) {
  const int n = static_cast<int>(u_k.size());
  double density = 0.0;
  for (int i = 0; i < n; ++i) {
    const int ip = wrap(i + 1, n);
    density += 0.25 * (u_k[i] + u_k[ip] + u_k1[ip] + u_k1[i]);
  }
  density *= h_x;
  return {density, c * density, 0.5 * c * c * density};
}

}  // namespace varint
