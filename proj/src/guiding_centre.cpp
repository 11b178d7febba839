#include "varint/guiding_centre.hpp"

#include <array>
#include <cmath>

namespace varint {

namespace {

// Effective poloidal-plane potential A* = A + u b with u = u(R,Z; p_phi)
// substituted, plus everything the 2D residuals and Jacobians read.
struct Eval2D {
  FieldSample f;
  ParallelVelocitySample u;
  double AsR, AsZ;
  double AsR_R, AsZ_R, AsR_Z, AsZ_Z;
  double AsR_RR, AsR_RZ, AsR_ZZ, AsZ_RR, AsZ_RZ, AsZ_ZZ;
};

Eval2D eval2(const GCParams& p, double R, double Z) {
  Eval2D e{};
  e.f = eval_field(p.tokamak, R, Z);
  e.u = parallel_velocity(p.tokamak, R, Z, p.p_phi);
  const FieldSample& f = e.f;
  const ParallelVelocitySample& u = e.u;

  e.AsR = f.A_R + u.u * f.b_R;
  e.AsZ = f.A_Z + u.u * f.b_Z;
  e.AsR_R = f.A_R_R + u.u_R * f.b_R + u.u * f.b_R_R;
  e.AsZ_R = f.A_Z_R + u.u_R * f.b_Z + u.u * f.b_Z_R;
  e.AsR_Z = f.A_R_Z + u.u_Z * f.b_R + u.u * f.b_R_Z;
  e.AsZ_Z = f.A_Z_Z + u.u_Z * f.b_Z + u.u * f.b_Z_Z;
  e.AsR_RR = f.A_R_RR + u.u_RR * f.b_R + 2 * u.u_R * f.b_R_R + u.u * f.b_R_RR;
  e.AsR_RZ = f.A_R_RZ + u.u_RZ * f.b_R + u.u_R * f.b_R_Z + u.u_Z * f.b_R_R +
             u.u * f.b_R_RZ;
  e.AsR_ZZ = f.A_R_ZZ + u.u_ZZ * f.b_R + 2 * u.u_Z * f.b_R_Z + u.u * f.b_R_ZZ;
  e.AsZ_RR = f.A_Z_RR + u.u_RR * f.b_Z + 2 * u.u_R * f.b_Z_R + u.u * f.b_Z_RR;
  e.AsZ_RZ = f.A_Z_RZ + u.u_RZ * f.b_Z + u.u_R * f.b_Z_Z + u.u_Z * f.b_Z_R +
             u.u * f.b_Z_RZ;
  e.AsZ_ZZ = f.A_Z_ZZ + u.u_ZZ * f.b_Z + 2 * u.u_Z * f.b_Z_Z + u.u * f.b_Z_ZZ;
  return e;
}

// Tokamak-geometry potential A* = A + u b at prescribed u (a coordinate).
struct Eval4D {
  FieldSample f;
  double AsR, AsZ, Asphi;
  double AsR_R, AsZ_R, Asphi_R, AsR_Z, AsZ_Z, Asphi_Z;
  double AsR_RR, AsZ_RR, Asphi_RR;
  double AsR_RZ, AsZ_RZ, Asphi_RZ;
  double AsR_ZZ, AsZ_ZZ, Asphi_ZZ;
};

Eval4D eval4(const GCParams& p, double R, double Z, double u) {
  Eval4D e{};
  e.f = eval_field(p.tokamak, R, Z);
  const FieldSample& f = e.f;
  e.AsR = f.A_R + u * f.b_R;
  e.AsZ = f.A_Z + u * f.b_Z;
  e.Asphi = f.A_phi + u * f.b_phi;
  e.AsR_R = f.A_R_R + u * f.b_R_R;
  e.AsZ_R = f.A_Z_R + u * f.b_Z_R;
  e.Asphi_R = f.A_phi_R + u * f.b_phi_R;
  e.AsR_Z = f.A_R_Z + u * f.b_R_Z;
  e.AsZ_Z = f.A_Z_Z + u * f.b_Z_Z;
  e.Asphi_Z = f.A_phi_Z + u * f.b_phi_Z;
  e.AsR_RR = f.A_R_RR + u * f.b_R_RR;
  e.AsZ_RR = f.A_Z_RR + u * f.b_Z_RR;
  e.Asphi_RR = f.A_phi_RR + u * f.b_phi_RR;
  e.AsR_RZ = f.A_R_RZ + u * f.b_R_RZ;
  e.AsZ_RZ = f.A_Z_RZ + u * f.b_Z_RZ;
  e.Asphi_RZ = f.A_phi_RZ + u * f.b_phi_RZ;
  e.AsR_ZZ = f.A_R_ZZ + u * f.b_R_ZZ;
  e.AsZ_ZZ = f.A_Z_ZZ + u * f.b_Z_ZZ;
  e.Asphi_ZZ = f.A_phi_ZZ + u * f.b_phi_ZZ;
  return e;
}

void check_domain(double R) {
  if (!(R > 0.0))
    throw std::domain_error("guiding centre: iterate left the domain R > 0");
}

}  // namespace

GCState2D make_initial_2d(const GCParams& p, double R, double Z) {
  p.validate();
  Eval2D e = eval2(p, R, Z);
  return GCState2D{R, Z, e.AsR, e.AsZ, 0.0};
}

GCState4D make_initial_4d(const GCParams& p, double R, double Z, double phi) {
  p.validate();
  const double u0 = parallel_velocity(p.tokamak, R, Z, p.p_phi).u;
  Eval4D e = eval4(p, R, Z, u0);
  return GCState4D{R, Z, phi, u0, e.AsR, e.AsZ, R * e.Asphi, 0.0, 0.0};
}

Vec step_residual(Scheme scheme, const GCState2D& s, const GCParams& p,
                  const Vec& y) {
  check_domain(y[0]);
  const double h = p.h, mu = p.mu;
  const Eval2D ek = eval2(p, s.qR, s.qZ);
  const double dR = y[0] - s.qR, dZ = y[1] - s.qZ;
  if (scheme == Scheme::trapezoidal) {
    Eval2D ep = eval2(p, y[0], y[1]);
    const double usum = ek.u.u + ep.u.u;
    return Vec{s.pR - 0.5 * (-ek.AsR_R * dR - ek.AsZ_R * dZ + ek.AsR + ep.AsR +
                             0.5 * h * ek.u.u_R * usum + h * mu * ek.f.B_R),
               s.pZ - 0.5 * (-ek.AsR_Z * dR - ek.AsZ_Z * dZ + ek.AsZ + ep.AsZ +
                             0.5 * h * ek.u.u_Z * usum + h * mu * ek.f.B_Z)};
  }
  const double Rm = 0.5 * (s.qR + y[0]), Zm = 0.5 * (s.qZ + y[1]);
  check_domain(Rm);
  Eval2D em = eval2(p, Rm, Zm);
  return Vec{s.pR - 0.5 * (-em.AsR_R * dR - em.AsZ_R * dZ + 2 * em.AsR +
                           h * em.u.u * em.u.u_R + h * mu * em.f.B_R),
             s.pZ - 0.5 * (-em.AsR_Z * dR - em.AsZ_Z * dZ + 2 * em.AsZ +
                           h * em.u.u * em.u.u_Z + h * mu * em.f.B_Z)};
}

std::pair<GCState2D, SolveReport> step_2d(Scheme scheme, const GCState2D& s,
                                          const GCParams& p,
                                          const SolverConfig& cfg) {
  p.validate();
  check_domain(s.qR);
  const double h = p.h, mu = p.mu;
  const Eval2D ek = eval2(p, s.qR, s.qZ);

  ResidualFn residual = [&](const Vec& y) {
    return step_residual(scheme, s, p, y);
  };
  JacobianFn jacobian;

  if (scheme == Scheme::trapezoidal) {
    jacobian = [&](const Vec& y) {
      Eval2D ep = eval2(p, y[0], y[1]);
      return std::vector<double>{
          0.5 * (ek.AsR_R - ep.AsR_R - 0.5 * h * ek.u.u_R * ep.u.u_R),
          0.5 * (ek.AsZ_R - ep.AsR_Z - 0.5 * h * ek.u.u_R * ep.u.u_Z),
          0.5 * (ek.AsR_Z - ep.AsZ_R - 0.5 * h * ek.u.u_Z * ep.u.u_R),
          0.5 * (ek.AsZ_Z - ep.AsZ_Z - 0.5 * h * ek.u.u_Z * ep.u.u_Z)};
    };
  } else {
    jacobian = [&](const Vec& y) {
      const double Rm = 0.5 * (s.qR + y[0]), Zm = 0.5 * (s.qZ + y[1]);
      Eval2D em = eval2(p, Rm, Zm);
      const double dR = y[0] - s.qR, dZ = y[1] - s.qZ;
      const auto& u = em.u;
      const double offdiag = em.AsR_RZ * dR + em.AsZ_RZ * dZ -
                             h * (u.u_R * u.u_Z + u.u * u.u_RZ) -
                             h * mu * em.f.B_RZ;
      return std::vector<double>{
          0.25 * (em.AsR_RR * dR + em.AsZ_RR * dZ -
                  h * (u.u_R * u.u_R + u.u * u.u_RR) - h * mu * em.f.B_RR),
          0.25 * (2 * (em.AsZ_R - em.AsR_Z) + offdiag),
          0.25 * (2 * (em.AsR_Z - em.AsZ_R) + offdiag),
          0.25 * (em.AsR_ZZ * dR + em.AsZ_ZZ * dZ -
                  h * (u.u_Z * u.u_Z + u.u * u.u_ZZ) - h * mu * em.f.B_ZZ)};
    };
  }

  auto [y, rep] = newton_solve(residual, jacobian, Vec{s.qR, s.qZ}, cfg);

  GCState2D out{};
  out.qR = y[0];
  out.qZ = y[1];
  out.t = s.t + h;
  const double dR = y[0] - s.qR, dZ = y[1] - s.qZ;
  if (scheme == Scheme::trapezoidal) {
    Eval2D ep = eval2(p, y[0], y[1]);
    const double usum = ek.u.u + ep.u.u;
    out.pR = 0.5 * (ep.AsR_R * dR + ep.AsZ_R * dZ + ek.AsR + ep.AsR -
                    0.5 * h * ep.u.u_R * usum - h * mu * ep.f.B_R);
    out.pZ = 0.5 * (ep.AsR_Z * dR + ep.AsZ_Z * dZ + ek.AsZ + ep.AsZ -
                    0.5 * h * ep.u.u_Z * usum - h * mu * ep.f.B_Z);
  } else {
    Eval2D em = eval2(p, 0.5 * (s.qR + y[0]), 0.5 * (s.qZ + y[1]));
    out.pR = 0.5 * (em.AsR_R * dR + em.AsZ_R * dZ + 2 * em.AsR -
                    h * em.u.u * em.u.u_R - h * mu * em.f.B_R);
    out.pZ = 0.5 * (em.AsR_Z * dR + em.AsZ_Z * dZ + 2 * em.AsZ -
                    h * em.u.u * em.u.u_Z - h * mu * em.f.B_Z);
  }
  return {out, rep};
}

Vec step_residual(Scheme scheme, const GCState4D& s, const GCParams& p,
                  const Vec& y) {
  check_domain(y[0]);
  const double h = p.h, mu = p.mu;
  const Eval4D ek = eval4(p, s.qR, s.qZ, s.qU);
  const double dR = y[0] - s.qR, dZ = y[1] - s.qZ, dF = y[2] - s.qPhi;
  if (scheme == Scheme::trapezoidal) {
    Eval4D ep = eval4(p, y[0], y[1], y[3]);
    return Vec{s.pR - 0.5 * (-ek.AsR_R * dR - ek.AsZ_R * dZ -
                             s.qR * ek.Asphi_R * dF + ek.AsR + ep.AsR -
                             ek.Asphi * dF + h * mu * ek.f.B_R),
               s.pZ - 0.5 * (-ek.AsR_Z * dR - ek.AsZ_Z * dZ -
                             s.qR * ek.Asphi_Z * dF + ek.AsZ + ep.AsZ +
                             h * mu * ek.f.B_Z),
               s.pPhi - 0.5 * (s.qR * ek.Asphi + y[0] * ep.Asphi),
               s.pU - 0.5 * (h * y[3] - ek.f.b_R * dR - ek.f.b_Z * dZ -
                             s.qR * ek.f.b_phi * dF)};
  }
  const double Rm = 0.5 * (s.qR + y[0]);
  check_domain(Rm);
  Eval4D em = eval4(p, Rm, 0.5 * (s.qZ + y[1]), 0.5 * (s.qU + y[3]));
  const double um = 0.5 * (s.qU + y[3]);
  return Vec{
      s.pR - 0.5 * (-em.AsR_R * dR - em.AsZ_R * dZ - Rm * em.Asphi_R * dF +
                    2 * em.AsR - em.Asphi * dF + h * mu * em.f.B_R),
      s.pZ - 0.5 * (-em.AsR_Z * dR - em.AsZ_Z * dZ - Rm * em.Asphi_Z * dF +
                    2 * em.AsZ + h * mu * em.f.B_Z),
      s.pPhi - Rm * em.Asphi,
      s.pU - 0.5 * (-em.f.b_R * dR - em.f.b_Z * dZ - Rm * em.f.b_phi * dF +
                    h * um)};
}

std::pair<GCState4D, SolveReport> step_4d(Scheme scheme, const GCState4D& s,
                                          const GCParams& p,
                                          const SolverConfig& cfg) {
  p.validate();
  check_domain(s.qR);
  const double h = p.h, mu = p.mu;
  const Eval4D ek = eval4(p, s.qR, s.qZ, s.qU);

  ResidualFn residual = [&](const Vec& y) {
    return step_residual(scheme, s, p, y);
  };
  JacobianFn jacobian;

  if (scheme == Scheme::trapezoidal) {
    jacobian = [&](const Vec& y) {
      Eval4D ep = eval4(p, y[0], y[1], y[3]);
      return std::vector<double>{
          0.5 * (ek.AsR_R - ep.AsR_R),
          0.5 * (ek.AsZ_R - ep.AsR_Z),
          0.5 * (s.qR * ek.Asphi_R + ek.Asphi),
          -0.5 * ep.f.b_R,
          0.5 * (ek.AsR_Z - ep.AsZ_R),
          0.5 * (ek.AsZ_Z - ep.AsZ_Z),
          0.5 * s.qR * ek.Asphi_Z,
          -0.5 * ep.f.b_Z,
          -0.5 * (ep.Asphi + y[0] * ep.Asphi_R),
          -0.5 * y[0] * ep.Asphi_Z,
          0.0,
          -0.5 * y[0] * ep.f.b_phi,
          0.5 * ek.f.b_R,
          0.5 * ek.f.b_Z,
          0.5 * s.qR * ek.f.b_phi,
          -0.5 * h};
    };
  } else {
    jacobian = [&](const Vec& y) {
      const double Rm = 0.5 * (s.qR + y[0]);
      Eval4D em = eval4(p, Rm, 0.5 * (s.qZ + y[1]), 0.5 * (s.qU + y[3]));
      const double dR = y[0] - s.qR, dZ = y[1] - s.qZ, dF = y[2] - s.qPhi;
      const auto& f = em.f;
      const double offdiag = em.AsR_RZ * dR + em.AsZ_RZ * dZ +
                             em.Asphi_Z * dF + Rm * em.Asphi_RZ * dF -
                             h * mu * f.B_RZ;
      return std::vector<double>{
          0.25 * (em.AsR_RR * dR + em.AsZ_RR * dZ + 2 * em.Asphi_R * dF +
                  Rm * em.Asphi_RR * dF - h * mu * f.B_RR),
          0.25 * (2 * (em.AsZ_R - em.AsR_Z) + offdiag),
          0.5 * (Rm * em.Asphi_R + em.Asphi),
          0.25 * (f.b_R_R * dR + f.b_Z_R * dZ + Rm * f.b_phi_R * dF +
                  f.b_phi * dF - 2 * f.b_R),
          0.25 * (2 * (em.AsR_Z - em.AsZ_R) + offdiag),
          0.25 * (em.AsR_ZZ * dR + em.AsZ_ZZ * dZ + Rm * em.Asphi_ZZ * dF -
                  h * mu * f.B_ZZ),
          0.5 * Rm * em.Asphi_Z,
          0.25 * (f.b_R_Z * dR + f.b_Z_Z * dZ + Rm * f.b_phi_Z * dF -
                  2 * f.b_Z),
          -0.5 * (em.Asphi + Rm * em.Asphi_R),
          -0.5 * Rm * em.Asphi_Z,
          0.0,
          -0.5 * Rm * f.b_phi,
          0.25 * (2 * f.b_R + f.b_phi * dF + f.b_R_R * dR + f.b_Z_R * dZ +
                  Rm * f.b_phi_R * dF),
          0.25 * (2 * f.b_Z + f.b_R_Z * dR + f.b_Z_Z * dZ +
                  Rm * f.b_phi_Z * dF),
          0.5 * Rm * f.b_phi,
          -0.25 * h};
    };
  }

  auto [y, rep] =
      newton_solve(residual, jacobian, Vec{s.qR, s.qZ, s.qPhi, s.qU}, cfg);

  GCState4D out{};
  out.qR = y[0];
  out.qZ = y[1];
  out.qPhi = y[2];
  out.qU = y[3];
  out.t = s.t + h;
  const double dR = y[0] - s.qR, dZ = y[1] - s.qZ, dF = y[2] - s.qPhi;
  if (scheme == Scheme::trapezoidal) {
    Eval4D ep = eval4(p, y[0], y[1], y[3]);
    out.pR = 0.5 * (ep.AsR_R * dR + ep.AsZ_R * dZ + y[0] * ep.Asphi_R * dF +
                    ek.AsR + ep.AsR + ep.Asphi * dF - h * mu * ep.f.B_R);
    out.pZ = 0.5 * (ep.AsR_Z * dR + ep.AsZ_Z * dZ + y[0] * ep.Asphi_Z * dF +
                    ek.AsZ + ep.AsZ - h * mu * ep.f.B_Z);
    out.pPhi = 0.5 * (s.qR * ek.Asphi + y[0] * ep.Asphi);
    out.pU = 0.5 * (-h * s.qU + ep.f.b_R * dR + ep.f.b_Z * dZ +
                    y[0] * ep.f.b_phi * dF);
  } else {
    const double Rm = 0.5 * (s.qR + y[0]);
    const double um = 0.5 * (s.qU + y[3]);
    Eval4D em = eval4(p, Rm, 0.5 * (s.qZ + y[1]), um);
    out.pR = 0.5 * (em.AsR_R * dR + em.AsZ_R * dZ + Rm * em.Asphi_R * dF +
                    2 * em.AsR + em.Asphi * dF - h * mu * em.f.B_R);
    out.pZ = 0.5 * (em.AsR_Z * dR + em.AsZ_Z * dZ + Rm * em.Asphi_Z * dF +
                    2 * em.AsZ - h * mu * em.f.B_Z);
    out.pPhi = Rm * em.Asphi;
    out.pU = 0.5 * (em.f.b_R * dR + em.f.b_Z * dZ + Rm * em.f.b_phi * dF -
                    h * um);
  }
  return {out, rep};
}

namespace {

// Continuous 2D equations of motion in linearised Euler-Lagrange form:
// W = A*_{Z,R} - A*_{R,Z},  dR/dt = -H_Z / W,  dZ/dt = +H_R / W.
std::array<double, 2> rhs_2d(const GCParams& p, double R, double Z) {
  check_domain(R);
  Eval2D e = eval2(p, R, Z);
  const double W = e.AsZ_R - e.AsR_Z;
  const double H_R = e.u.u * e.u.u_R + p.mu * e.f.B_R;
  const double H_Z = e.u.u * e.u.u_Z + p.mu * e.f.B_Z;
  return {-H_Z / W, H_R / W};
}

// Continuous 4D equations: with a = (A*_R, A*_Z, R A*_phi) and
// bt = da/du, solve  [a_{i,j}-a_{j,i}] qdot + bt udot = -grad(mu B),
// bt . qdot = u  as a 4x4 linear system.
std::array<double, 4> rhs_4d(const GCParams& p, double R, double Z, double u) {
  check_domain(R);
  Eval4D e = eval4(p, R, Z, u);
  const double aR_Z = e.AsR_Z, aZ_R = e.AsZ_R;
  const double aphi_R = e.Asphi + R * e.Asphi_R;
  const double aphi_Z = R * e.Asphi_Z;
  const double btR = e.f.b_R, btZ = e.f.b_Z, btP = R * e.f.b_phi;

  std::vector<double> m = {
      0.0,          aR_Z - aZ_R, -aphi_R, btR,  //
      aZ_R - aR_Z,  0.0,         -aphi_Z, btZ,  //
      aphi_R,       aphi_Z,      0.0,     btP,  //
      btR,          btZ,         btP,     0.0};
  Vec rhs = {-p.mu * e.f.B_R, -p.mu * e.f.B_Z, 0.0, u};
  lu_solve(m, rhs, 4);
  return {rhs[0], rhs[1], rhs[2], rhs[3]};
}

}  // namespace

GCState2D rk4_step(const GCState2D& s, const GCParams& p) {
  p.validate();
  auto rhs = [&](const std::array<double, 2>& y) {
    return rhs_2d(p, y[0], y[1]);
  };
  auto y = rk4_classic<2>(rhs, {s.qR, s.qZ}, p.h);
  check_domain(y[0]);
  Eval2D e = eval2(p, y[0], y[1]);
  return GCState2D{y[0], y[1], e.AsR, e.AsZ, s.t + p.h};
}

GCState4D rk4_step(const GCState4D& s, const GCParams& p) {
  p.validate();
  auto rhs = [&](const std::array<double, 4>& y) {
    return rhs_4d(p, y[0], y[1], y[3]);
  };
  auto y = rk4_classic<4>(rhs, {s.qR, s.qZ, s.qPhi, s.qU}, p.h);
  check_domain(y[0]);
  Eval4D e = eval4(p, y[0], y[1], y[3]);
  return GCState4D{y[0], y[1], y[2],          y[3], e.AsR,
                   e.AsZ, y[0] * e.Asphi, 0.0,  s.t + p.h};
}

CompositionTable::CompositionTable(std::vector<double> g)
    : gammas(std::move(g)) {
  if (gammas.empty())
    throw std::invalid_argument("CompositionTable: empty table");
  double sum = 0.0;
  for (double x : gammas) sum += x;
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("CompositionTable: coefficients must sum to 1");
  const size_t n = gammas.size();
  for (size_t i = 0; i < n; ++i)
    if (std::abs(gammas[i] - gammas[n - 1 - i]) > 1e-14)
      throw std::invalid_argument("CompositionTable: table not palindromic");
}

CompositionTable CompositionTable::named(const std::string& name) {
  if (name == "4o3s") {
    const double g = 1.0 / (2.0 - std::cbrt(2.0));
    return CompositionTable({g, 1.0 - 2.0 * g, g});
  }
  if (name == "4o5s") {
    const double g = 1.0 / (4.0 - std::cbrt(4.0));
    return CompositionTable({g, g, 1.0 - 4.0 * g, g, g});
  }
  if (name == "6o7s") {
    const double g1 = +0.78451361047755726381949763;
    const double g2 = +0.23557321335935813368479318;
    const double g3 = -1.17767998417887100694641568;
    const double g4 = +1.31518632068391121888424973;
    return CompositionTable({g1, g2, g3, g4, g3, g2, g1});
  }
  if (name == "6o9s") {
    const double g1 = +0.39216144400731413927925056;
    const double g2 = +0.33259913678935943859974864;
    const double g3 = -0.70624617255763935980996482;
    const double g4 = +0.08221359629355080023149045;
    const double g5 = +0.79854399093482996339895035;
    return CompositionTable({g1, g2, g3, g4, g5, g4, g3, g2, g1});
  }
  throw std::invalid_argument("CompositionTable: unknown table " + name);
}

GCDiagnostics gc_diagnostics(const GCState2D& s, const GCParams& p) {
  const double u = parallel_velocity(p.tokamak, s.qR, s.qZ, p.p_phi).u;
  const double B = eval_field(p.tokamak, s.qR, s.qZ).B;
  return {0.5 * u * u + p.mu * B, p.p_phi};
}

GCDiagnostics gc_diagnostics(const GCState4D& s, const GCParams& p) {
  const double B = eval_field(p.tokamak, s.qR, s.qZ).B;
  return {0.5 * s.qU * s.qU + p.mu * B, s.pPhi};
}

}  // namespace varint
