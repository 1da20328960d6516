#pragma once

#include <span>
#include <vector>

#include "zmlab/fields.hpp"
#include "zmlab/quadrature.hpp"

namespace zmlab {

// Spherical spinor channel. kappa is the integer eigenvalue of
// K = -1 - sigma.L (kappa = -l-1 for j = l+1/2, kappa = l for j = l-1/2;
// kappa = 0 does not occur). m is half-integer, stored doubled.
//
// Phases follow the Condon-Shortley convention; only eigenvalues, norms and
// orthogonality are contract-level, phases are not.
struct Channel {
  int kappa = -1;
  int twice_m = 1;

  int l() const { return kappa > 0 ? kappa : -kappa - 1; }
  int twice_j() const { return 2 * std::abs(kappa) - 1; }
  double m() const { return 0.5 * twice_m; }
  bool valid() const {
    return kappa != 0 && (twice_m % 2 != 0) && std::abs(twice_m) <= twice_j();
  }
};

// All channels with |kappa| <= kappa_max, ordered by (kappa, m).
std::vector<Channel> channels_up_to(int kappa_max);

// Y_l^m with the Condon-Shortley phase, evaluated at a unit vector.
cplx spherical_harmonic_dir(int l, int m, const Vec3& omega);

// Omega_{kappa,m}(omega); throws on invalid (kappa, m).
Spinor spherical_spinor(const Channel& ch, const Vec3& omega);

using SphereFn = std::function<Spinor(const Vec3&)>;

// <f, g>(quad) = Int_S2 <f(w), g(w)>_{C^2} dw.
cplx sphere_inner(const SphereFn& f, const SphereFn& g, const SphereQuadrature& quad);
double sphere_norm(const SphereFn& f, const SphereQuadrature& quad);

// Projection of a sphere function onto channels: a_{kappa,m} = <Omega, f>.
struct ChannelProjection {
  std::vector<Channel> channels;
  Eigen::VectorXcd amplitudes;
  double norm = 0.0;                 // ||f|| on the sphere
  double norm_plus = 0.0;            // kappa > 0 part
  double norm_minus = 0.0;           // kappa < 0 part
  double truncation_residual = 0.0;  // ||f - sum a Omega||
};

ChannelProjection project_channels(const SphereFn& f, int kappa_max,
                                   const SphereQuadrature& quad);

// K f = -f - sigma.L f, realized as projection, multiplication by kappa,
// and resummation. truncation_residual reports what the channel basis missed.
struct KApplied {
  SphereFn value;
  double truncation_residual = 0.0;
};
KApplied apply_k_operator(const SphereFn& f, int kappa_max,
                          const SphereQuadrature& quad);

// Channel amplitudes g_{kappa,m}(r) = <Omega_{kappa,m}, psi(r .)> on a set of
// radii, with the kappa-sign split norms and per-radius truncation residuals.
struct RadialChannelTable {
  std::vector<double> radii;
  std::vector<Channel> channels;
  Eigen::MatrixXcd amplitudes;  // radii x channels
  std::vector<double> norm_plus;
  std::vector<double> norm_minus;
  std::vector<double> truncation;

  std::size_t channel_index(const Channel& ch) const;
};

RadialChannelTable partial_wave_project(const SpinorEvaluator& psi, int kappa_max,
                                        std::span<const double> radii,
                                        const SphereQuadrature& quad);

// | sigma.p psi - (-i) sigma.x^ (d_r + (K+1)/r) psi | at x, all derivatives by
// centered differences (Cartesian for the left side, radial + angular for the
// right side). Refuses |x| < 10 h where the 1/r factor is unresolved.
double radial_factorization_residual(const SpinorEvaluator& psi, const Vec3& x,
                                     double h);

// | D_h ||f||(r) - Re<f, d_r f>(r) / ||f||(r) |, the weak-derivative identity
// for sphere norms; the second operand is 0 when ||f||(r) vanishes.
double sphere_norm_derivative_check(const SpinorEvaluator& f, double r, double h,
                                    const SphereQuadrature& quad);

}  // namespace zmlab
