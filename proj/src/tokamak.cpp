#include "varint/tokamak.hpp"

#include <cmath>

namespace varint {

FieldSample eval_field(const TokamakParams& p, double R, double Z) {
  p.validate();
  if (!(R > 0.0)) throw std::domain_error("eval_field: R must be > 0");

  FieldSample s{};
  const double R0 = p.R0, B0 = p.B0, q = p.q;
  const double dR = R - R0;

  s.r = std::sqrt(dR * dR + Z * Z);
  const double S2 = s.r * s.r + q * q * R0 * R0;
  s.S = std::sqrt(S2);
  s.S_R = dR / s.S;
  s.S_Z = Z / s.S;

  // Vector potential
  s.A_R = B0 * R0 * Z / (2 * R);
  s.A_Z = -std::log(R / R0) * B0 * R0 / 2;
  s.A_phi = -B0 * s.r * s.r / (2 * q * R);

  s.A_R_R = -B0 * R0 * Z / (2 * R * R);
  s.A_R_Z = B0 * R0 / (2 * R);
  s.A_Z_R = -B0 * R0 / (2 * R);
  s.A_Z_Z = 0.0;
  s.A_phi_R = -s.A_phi / R - B0 * dR / (q * R);
  s.A_phi_Z = -B0 * Z / (q * R);

  s.A_R_RR = B0 * R0 * Z / (R * R * R);
  s.A_R_RZ = -B0 * R0 / (2 * R * R);
  s.A_R_ZZ = 0.0;
  s.A_Z_RR = B0 * R0 / (2 * R * R);
  s.A_Z_RZ = 0.0;
  s.A_Z_ZZ = 0.0;
  s.A_phi_RR = -2 * s.A_phi_R / R - B0 / (q * R);
  s.A_phi_RZ = B0 * Z / (q * R * R);
  s.A_phi_ZZ = -B0 / (q * R);

  // Field strength
  s.B = B0 * s.S / (q * R);
  s.B_R = s.B * (dR / S2 - 1.0 / R);
  s.B_Z = s.B * Z / S2;
  s.B_RR = s.B_R * (dR / S2 - 1.0 / R) +
           s.B * (1.0 / (R * R) + 1.0 / S2 - 2.0 * dR * dR / (S2 * S2));
  s.B_RZ = (Z * s.B_R - 2.0 * dR * s.B_Z) / S2;
  s.B_ZZ = s.B / S2 * (1.0 - Z * Z / S2);

  // Unit field vector
  s.b_R = -Z / s.S;
  s.b_Z = dR / s.S;
  s.b_phi = -q * R0 / s.S;

  s.b_R_R = -s.b_R * s.b_Z / s.S;
  s.b_Z_R = -(s.b_Z * s.b_Z - 1.0) / s.S;
  s.b_phi_R = -s.b_Z * s.b_phi / s.S;
  s.b_R_Z = (s.b_R * s.b_R - 1.0) / s.S;
  s.b_Z_Z = s.b_R * s.b_Z / s.S;
  s.b_phi_Z = s.b_R * s.b_phi / s.S;

  s.b_R_RR = s.b_R / S2 * (3 * s.b_Z * s.b_Z - 1);
  s.b_Z_RR = s.b_Z / S2 * (3 * s.b_Z * s.b_Z - 3);
  s.b_phi_RR = s.b_phi / S2 * (3 * s.b_Z * s.b_Z - 1);
  s.b_R_RZ = -s.b_Z / S2 * (3 * s.b_R * s.b_R - 1);
  s.b_Z_RZ = -s.b_R / S2 * (3 * s.b_Z * s.b_Z - 1);
  s.b_phi_RZ = -3.0 * s.b_R * s.b_Z * s.b_phi / S2;
  s.b_R_ZZ = s.b_R / S2 * (3 * s.b_R * s.b_R - 3);
  s.b_Z_ZZ = s.b_Z / S2 * (3 * s.b_R * s.b_R - 1);
  s.b_phi_ZZ = s.b_phi / S2 * (3 * s.b_R * s.b_R - 1);

  return s;
}

ParallelVelocitySample parallel_velocity(const TokamakParams& p, double R,
                                         double Z, double p_phi) {
  const FieldSample f = eval_field(p, R, Z);
  const double R0 = p.R0, B0 = p.B0, q = p.q;
  const double dR = R - R0;
  // bracket = p_phi + B0 r^2 / 2q, with r^2 = dR^2 + Z^2
  const double br = p_phi + B0 * f.r * f.r / (2 * q);

  ParallelVelocitySample u{};
  u.u = -br * f.B / (B0 * R0);
  u.u_R = -br * f.B_R / (B0 * R0) - f.B * dR / (q * R0);
  u.u_Z = -br * f.B_Z / (B0 * R0) - f.B * Z / (q * R0);
  u.u_RR = -br * f.B_RR / (B0 * R0) - (2 * dR * f.B_R + f.B) / (q * R0);
  u.u_RZ = -br * f.B_RZ / (B0 * R0) - (dR * f.B_Z + Z * f.B_R) / (q * R0);
  u.u_ZZ = -br * f.B_ZZ / (B0 * R0) - (2 * Z * f.B_Z + f.B) / (q * R0);
  return u;
}

double elliptic_k(double m) {
  if (!(m < 1.0)) throw std::domain_error("elliptic_k: requires m < 1");
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  for (int i = 0; i < 64 && std::abs(a - b) >= 1e-15; ++i) {
    double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return M_PI / (2.0 * a);
}

BounceResult bounce_time(const TokamakParams& p, double energy, double mu,
                         double mass, double R, double Z) {
  p.validate();
  if (!(mu > 0.0)) throw std::domain_error("bounce_time: mu must be > 0");
  if (!(mass > 0.0)) throw std::domain_error("bounce_time: mass must be > 0");
  const double dR = R - p.R0;
  const double r = std::sqrt(dR * dR + Z * Z);
  const double eps = r / p.R0;
  if (!(eps > 0.0))
    throw std::domain_error("bounce_time: evaluation point is on axis");
  const double muB0 = mu * std::abs(p.B0);
  if (energy < muB0 * (1.0 - eps))
    throw std::domain_error("bounce_time: energy below trapping well minimum");

  BounceResult res{};
  res.kappa = (energy - muB0 * (1.0 - eps)) / (2.0 * eps * muB0);
  const double om_par = std::sqrt(eps * muB0 / mass) / (p.q * p.R0);
  if (std::abs(res.kappa - 1.0) < 1e-12)
    throw SeparatrixError("bounce_time: kappa = 1 (separatrix), K diverges");
  if (res.kappa < 1.0) {
    res.kind = OrbitKind::trapped;
    res.tau = 4.0 * elliptic_k(res.kappa) / om_par;
  } else {
    res.kind = OrbitKind::passing;
    res.tau = 2.0 * elliptic_k(1.0 / res.kappa) / (om_par * std::sqrt(res.kappa));
  }
  return res;
}

}  // namespace varint
