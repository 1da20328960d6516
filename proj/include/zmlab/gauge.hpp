#pragma once

#include <span>
#include <vector>

#include "zmlab/fields.hpp"
#include "zmlab/field_zoo.hpp"

namespace zmlab {

// Quadrature controls for the Biot-Savart integral. The integral is taken in
// spherical shells centered at the evaluation point, so the |x-y|^-2 kernel
// singularity is cancelled by the Jacobian and the integrand stays bounded.
struct BiotSavartSpec {
  int n_polar = 32;
  int n_azimuth = 64;
  int nodes_per_segment = 16;
  double s_linear = 8.0;        // unit segments up to here, then geometric
  double geometric_ratio = 1.5;
  double tail_tol = 1e-7;       // absolute bound allowed for the radial tail
  double s_max = 0.0;           // 0 = choose from decay metadata
};

// A(x) = (1/4pi) Int B(y) cross (x-y) / |x-y|^3 dy, the decaying Coulomb-gauge
// potential of B (normalized so that curl A = B).
// Throws HypothesisError when no s_max is given and the field carries no
// decay metadata to bound the tail with.
Vec3 biot_savart(const MagneticField& field, const Vec3& x,
                 const BiotSavartSpec& spec = {});

// Wraps biot_savart as a GaugePotential tagged with the gauge it realizes.
GaugePotential biot_savart_potential(const MagneticField& field,
                                     const BiotSavartSpec& spec = {});

// |curl_h A(x) - B(x)| with centered differences of step h; O(h^2) for smooth A.
double curl_residual(const GaugePotential& A, const MagneticField& B,
                     const Vec3& x, double h);

Vec3 fd_curl(const std::function<Vec3(const Vec3&)>& A, const Vec3& x, double h);
double fd_divergence(const std::function<Vec3(const Vec3&)>& A, const Vec3& x,
                     double h);

// Decay bound for the Biot-Savart potential of an enveloped field:
// for |x| >= r1 = max((2 r0)^2, 1) and alpha = min(1/2, beta/2),
//   envelope(r) = 4pi ||B||_{3/2} (2^5 pi/3)^{1/3} r^{-3/2}
//               + 4pi C_B (C1 2^beta r^{-1-beta/2} + C2 r^{-1-beta}).
// C1 and C2 come from splitting Int t^{-beta-1} ln((1+t)/|1-t|) dt at t = 1/2.
// The bound is stated for the 4pi-weighted integral, so it dominates the
// (1/4pi)-normalized biot_savart value with plenty of room.
struct PotentialEnvelope {
  double r1 = 1.0;
  double alpha = 0.5;
  double C1 = 0.0;
  double C2 = 0.0;
  double C_B = 0.0;
  double beta = 0.0;
  double norm_B_32 = 0.0;

  // the proof's split radius for an evaluation point at distance r
  double rx(double r) const { return std::sqrt(r) / 2.0; }
  double operator()(double r) const;
};

PotentialEnvelope potential_envelope(double C_B, double beta, double r0,
                                     double norm_B_32);

// One row of the CLI-facing envelope comparison.
struct EnvelopeSample {
  double r = 0.0;
  int direction_index = 0;
  double A_mag = 0.0;
  double envelope = 0.0;
  bool pass = false;
};

std::vector<EnvelopeSample> envelope_samples(const MagneticField& field,
                                             const PotentialEnvelope& env,
                                             std::span<const double> radii,
                                             std::span<const Vec3> directions,
                                             const BiotSavartSpec& spec = {});

}  // namespace zmlab
