#pragma once

#include <span>

#include "zmlab/spinor.hpp"

namespace zmlab {

// Channelized first-order system for g with sigma.(p - A) g = 0:
//   a'_{km}(r) = -((kappa+1)/r) a_{km}(r) + i sum M_{(km),(k'm')}(r) a_{k'm'}(r),
// where M(r) holds the sphere-quadrature matrix elements of
// sigma_A(r w) = (sigma.w)(sigma.A(r w)) in the spherical-spinor basis.
struct RadialOdeSpec {
  int quad_polar = 0;    // 0 = 2*kappa_max + 4
  int quad_azimuth = 0;  // 0 = 2*(2*kappa_max + 4)
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
};

struct RadialSolution {
  std::vector<Channel> channels;
  std::vector<double> radii;
  Eigen::MatrixXcd amplitudes;  // radii x channels
  std::vector<double> norm_plus;   // sqrt(sum_{kappa>0} |a|^2)
  std::vector<double> norm_minus;  // sqrt(sum_{kappa<0} |a|^2)
};

// Integrates through the given radii (strictly monotone; decreasing radii give
// the inward sweep "from infinity"). radii[0] carries the initial data,
// indexed like channels_up_to(kappa_max). Adaptive dopri5 with per-step error
// control; throws on step-size underflow.
RadialSolution integrate_radial_system(const GaugePotential& A, int kappa_max,
                                       std::span<const double> radii,
                                       const Eigen::VectorXcd& initial,
                                       const RadialOdeSpec& spec = {});

// Log-log decay fit of the kappa-sign split sphere norms of psi.
struct SphereNormDecay {
  PowerLawFit plus;
  PowerLawFit minus;
  bool plus_superpolynomial = false;  // slope keeps steepening across the window
  bool minus_superpolynomial = false;
  int plus_skipped = 0;  // radii dropped for vanishing norm
  int minus_skipped = 0;
  RadialChannelTable table;
};

SphereNormDecay fit_sphere_norm_decay(const SpinorEvaluator& psi,
                                      std::span<const double> radii, int kappa_max,
                                      const SphereQuadrature& quad);

}  // namespace zmlab
