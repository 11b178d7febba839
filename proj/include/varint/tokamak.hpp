#ifndef VARINT_TOKAMAK_HPP
#define VARINT_TOKAMAK_HPP

#include <stdexcept>

namespace varint {

/// Analytic axisymmetric tokamak model with constant safety factor.
/// Lengths are normalised to R0 and fields to B0; e = m = c = 1.
struct TokamakParams {
  double R0 = 1.0;  // major radius of the magnetic axis
  double B0 = 1.0;  // field strength on axis
  double q = 2.0;   // safety factor

  void validate() const {
    if (!(R0 > 0.0)) throw std::domain_error("TokamakParams: R0 must be > 0");
    if (B0 == 0.0) throw std::domain_error("TokamakParams: B0 must be nonzero");
    if (q == 0.0) throw std::domain_error("TokamakParams: q must be nonzero");
  }
};

/// Vector potential, field strength and unit field vector at (R, Z),
/// together with every first and second derivative the integrators need.
///
///   A_R = B0 R0 Z / (2R),  A_Z = -ln(R/R0) B0 R0 / 2,  A_phi = -B0 r^2/(2qR)
///   B   = B0 S / (qR),     b = (-Z, R-R0, -q R0) / S
///   r^2 = (R-R0)^2 + Z^2,  S^2 = r^2 + q^2 R0^2
struct FieldSample {
  double r, S, S_R, S_Z;

  double A_R, A_Z, A_phi;
  double A_R_R, A_R_Z, A_Z_R, A_Z_Z, A_phi_R, A_phi_Z;
  double A_R_RR, A_R_RZ, A_R_ZZ;
  double A_Z_RR, A_Z_RZ, A_Z_ZZ;
  double A_phi_RR, A_phi_RZ, A_phi_ZZ;

  double B, B_R, B_Z, B_RR, B_RZ, B_ZZ;

  double b_R, b_Z, b_phi;
  double b_R_R, b_R_Z, b_Z_R, b_Z_Z, b_phi_R, b_phi_Z;
  double b_R_RR, b_R_RZ, b_R_ZZ;
  double b_Z_RR, b_Z_RZ, b_Z_ZZ;
  double b_phi_RR, b_phi_RZ, b_phi_ZZ;
};

/// Parallel velocity u(R, Z; p_phi) of the poloidal-plane reduction,
///   u = -(p_phi + B0 r^2 / 2q) B / (B0 R0),
/// with its first and second derivatives.
struct ParallelVelocitySample {
  double u, u_R, u_Z, u_RR, u_RZ, u_ZZ;
};

FieldSample eval_field(const TokamakParams& p, double R, double Z);

ParallelVelocitySample parallel_velocity(const TokamakParams& p, double R,
                                         double Z, double p_phi);

/// Complete elliptic integral of the first kind, parameter convention:
/// K(m) = int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta). Computed by the
/// arithmetic-geometric mean, terminating below 1e-15.
double elliptic_k(double m);

enum class OrbitKind { trapped, passing };

struct BounceResult {
  double tau;     // bounce (trapped) or transit (passing) time
  double kappa;   // bounce-transit parameter
  OrbitKind kind;
};

struct SeparatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bounce/transit time of a particle with the given energy and magnetic
/// moment. The inverse aspect ratio is evaluated at the minor radius of
/// the supplied point (normally the particle's initial position), with
/// eps = r / R0:
///   kappa  = (E - mu B0 (1 - eps)) / (2 eps mu B0)
///   om_par = sqrt(eps mu B0 / mass) / (q R0)
///   trapped (kappa < 1):  tau_b = 4 K(kappa) / om_par
///   passing (kappa > 1):  tau_t = 2 K(1/kappa) / (om_par sqrt(kappa))
/// kappa == 1 is the separatrix, where K diverges; reported as an error.
BounceResult bounce_time(const TokamakParams& p, double energy, double mu,
                         double mass, double R, double Z = 0.0);

}  // namespace varint

#endif
