#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "zmlab/pauli.hpp"

namespace zmlab {

// Gauss-Legendre nodes/weights on [a,b].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static GaussLegendre on(double a, double b, int n);
};

// Product rule on S^2: Gauss-Legendre in cos(theta) times a uniform
// azimuthal grid. Weights sum to 4*pi. Integrates spherical harmonics
// Y_l^m exactly for l <= 2*n_polar - 1 and |m| < n_azimuth.
struct SphereQuadrature {
  int n_polar = 0;
  int n_azimuth = 0;
  std::vector<Vec3> points;
  std::vector<double> weights;

  static SphereQuadrature gauss(int n_polar, int n_azimuth);

  int exactness_degree() const {
    return std::min(2 * n_polar - 1, n_azimuth - 1);
  }
  std::size_t size() const { return points.size(); }

  template <class F>
  auto integrate(F&& f) const -> decltype(f(Vec3{}) * 1.0) {
    decltype(f(Vec3{}) * 1.0) acc{};
    for (std::size_t i = 0; i < points.size(); ++i) acc += weights[i] * f(points[i]);
    return acc;
  }
};

// Adaptive 1D integration (Gauss-Kronrod 15) with an error estimate.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double* error_estimate);

// Least-squares fit of log(y) vs log(r): y ~ constant * r^{-exponent}.
// residual is the RMS misfit of log(y). Throws on nonpositive magnitudes
// or fewer than 3 samples.
struct PowerLawFit {
  double exponent = 0.0;
  double constant = 0.0;
  double residual = 0.0;
};
PowerLawFit fit_decay_exponent(std::span<const std::pair<double, double>> samples);

// Deterministic, roughly uniform unit vectors (Fibonacci lattice).
std::vector<Vec3> fibonacci_directions(int count);

}  // namespace zmlab
