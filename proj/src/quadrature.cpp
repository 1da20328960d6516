#include "zmlab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace zmlab {

GaussLegendre GaussLegendre::on(double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("GaussLegendre: n must be >= 1");
  GaussLegendre q;
  q.nodes.resize(n);
  q.weights.resize(n);
  // Newton iteration on P_n, seeded with the Chebyshev approximation.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = x;
    q.nodes[n - 1 - i] = -x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  // map [-1,1] -> [a,b]
  const double mid = 0.5 * (a + b), scale = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = mid + scale * q.nodes[i];
    q.weights[i] *= scale;
  }
  return q;
}

SphereQuadrature SphereQuadrature::gauss(int n_polar, int n_azimuth) {
  if (n_polar < 1 || n_azimuth < 1)
    throw std::invalid_argument("SphereQuadrature: node counts must be >= 1");
  SphereQuadrature q;
  q.n_polar = n_polar;
  q.n_azimuth = n_azimuth;
  const GaussLegendre gl = GaussLegendre::on(-1.0, 1.0, n_polar);
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  q.points.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  q.weights.reserve(q.points.capacity());
  for (int i = 0; i < n_polar; ++i) {
    const double ct = gl.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double w = gl.weights[i] * dphi;
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = j * dphi;
      q.points.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
      q.weights.push_back(w);
    }
  }
  return q;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double* error_estimate) {
  double err = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, 12, rel_tol, &err);
  if (error_estimate) *error_estimate = err;
  return value;
}

PowerLawFit fit_decay_exponent(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("fit_decay_exponent: need at least 3 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(samples.size());
  for (const auto& [r, mag] : samples) {
    if (!(mag > 0.0) || !(r > 0.0))
      throw std::invalid_argument("fit_decay_exponent: samples must be positive");
    const double x = std::log(r), y = std::log(mag);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300)
    throw std::invalid_argument("fit_decay_exponent: degenerate radii");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  PowerLawFit fit;
  fit.exponent = -slope;
  fit.constant = std::exp(intercept);
  double ss = 0.0;
  for (const auto& [r, mag] : samples) {
    const double resid = std::log(mag) - (intercept + slope * std::log(r));
    ss += resid * resid;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

std::vector<Vec3> fibonacci_directions(int count) {
  std::vector<Vec3> dirs;
  dirs.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    dirs.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return dirs;
}

}  // namespace zmlab
