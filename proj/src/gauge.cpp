#include "zmlab/gauge.hpp"

#include <cmath>
#include <numbers>

namespace zmlab {

namespace {

constexpr double kPi = std::numbers::pi;

// radial segment boundaries: unit steps first, then geometric growth
std::vector<double> radial_breaks(double s_linear, double ratio, double s_max) {
  std::vector<double> breaks{0.0};
  double s = 0.0;
  while (s + 1.0 < s_linear && s + 1.0 < s_max) {
    s += 1.0;
    breaks.push_back(s);
  }
  while (s < s_max) {
    s = std::min(s * ratio + (s == 0.0 ? 1.0 : 0.0), s_max);
    breaks.push_back(s);
  }
  return breaks;
}

}  // namespace

Vec3 biot_savart(const MagneticField& field, const Vec3& x,
                 const BiotSavartSpec& spec) {
  if (!x.allFinite()) throw std::invalid_argument("biot_savart: x must be finite");

  double s_max = spec.s_max;
  if (s_max <= 0.0) {
    if (!field.decay)
      throw HypothesisError(
          "biot_savart: no decay metadata and no s_max; tail not bounded");
    const FieldDecay& d = *field.decay;
    if (d.C_B == 0.0) {
      s_max = std::max(1.0, x.norm() + d.r0);
    } else {
      const double reach =
          std::pow(d.C_B / ((1.0 + d.beta) * spec.tail_tol), 1.0 / (1.0 + d.beta));
      s_max = x.norm() + std::max(d.r0, reach);
    }
  }

  const SphereQuadrature sq = SphereQuadrature::gauss(spec.n_polar, spec.n_azimuth);
  // after the radial integral the integrand is (1/4pi) Int_S2 w x B(x+s w) dw
  auto shell = [&](double s) -> Vec3 {
    Vec3 acc = Vec3::Zero();
    for (std::size_t i = 0; i < sq.size(); ++i)
      acc += sq.weights[i] * sq.points[i].cross(field(x + s * sq.points[i]));
    return acc;
  };

  Vec3 total = Vec3::Zero();
  const std::vector<double> breaks =
      radial_breaks(spec.s_linear, spec.geometric_ratio, s_max);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const GaussLegendre gl =
        GaussLegendre::on(breaks[k], breaks[k + 1], spec.nodes_per_segment);
    for (int i = 0; i < spec.nodes_per_segment; ++i)
      total += gl.weights[i] * shell(gl.nodes[i]);
  }
  return total / (4.0 * kPi);
}

GaugePotential biot_savart_potential(const MagneticField& field,
                                     const BiotSavartSpec& spec) {
  GaugePotential A;
  A.label = field.label + ":biot-savart";
  A.gauge = GaugeTag::biot_savart;
  A.eval = [field, spec](const Vec3& x) { return biot_savart(field, x, spec); };
  if (field.decay) {
    // Decay guaranteed by the envelope bound; constants are certified
    // separately via potential_envelope.
    const FieldDecay& d = *field.decay;
    A.decay = PotentialDecay{0.0, std::min(0.5, d.beta / 2.0),
                             std::max((2.0 * d.r0) * (2.0 * d.r0), 1.0)};
  }
  return A;
}

Vec3 fd_curl(const std::function<Vec3(const Vec3&)>& A, const Vec3& x, double h) {
  Eigen::Matrix3d jac;
  for (int j = 0; j < 3; ++j) {
    Vec3 dx = Vec3::Zero();
    dx(j) = h;
    jac.col(j) = (A(x + dx) - A(x - dx)) / (2.0 * h);
  }
  return Vec3(jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1));
}

double fd_divergence(const std::function<Vec3(const Vec3&)>& A, const Vec3& x,
                     double h) {
  double div = 0.0;
  for (int j = 0; j < 3; ++j) {
    Vec3 dx = Vec3::Zero();
    dx(j) = h;
    div += (A(x + dx)(j) - A(x - dx)(j)) / (2.0 * h);
  }
  return div;
}

double curl_residual(const GaugePotential& A, const MagneticField& B,
                     const Vec3& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("curl_residual: h must be positive");
  return (fd_curl(A.eval, x, h) - B(x)).norm();
}

double PotentialEnvelope::operator()(double r) const {
  const double near_field =
      4.0 * kPi * norm_B_32 * std::cbrt(32.0 * kPi / 3.0) * std::pow(r, -1.5);
  const double far_field =
      4.0 * kPi * C_B *
      (C1 * std::pow(2.0, beta) * std::pow(r, -1.0 - beta / 2.0) +
       C2 * std::pow(r, -1.0 - beta));
  return near_field + far_field;
}

PotentialEnvelope potential_envelope(double C_B, double beta, double r0,
                                     double norm_B_32) {
  if (!(beta > 0.0))
    throw std::invalid_argument("potential_envelope: beta must be positive");
  if (C_B < 0.0 || r0 < 0.0 || norm_B_32 < 0.0)
    throw std::invalid_argument("potential_envelope: constants must be nonnegative");

  PotentialEnvelope env;
  env.C_B = C_B;
  env.beta = beta;
  env.norm_B_32 = norm_B_32;
  env.r1 = std::max((2.0 * r0) * (2.0 * r0), 1.0);
  env.alpha = std::min(0.5, beta / 2.0);

  auto log_kernel = [beta](double t) {
    return std::pow(t, -beta - 1.0) * std::log((1.0 + t) / std::abs(1.0 - t));
  };

  // C2 = Int_{1/2}^inf of the log kernel; split at the t = 1 singularity and
  // bound the remainder beyond T analytically (kernel ~ 2 t^{-beta-2}).
  const double T = 100.0;
  double e1 = 0.0, e2 = 0.0;
  const double part1 = integrate_adaptive(log_kernel, 0.5, 1.0, 1e-10, &e1);
  const double part2 = integrate_adaptive(log_kernel, 1.0, T, 1e-10, &e2);
  const double beyond = 2.0 * std::pow(T, -beta - 1.0) / (beta + 1.0);
  env.C2 = part1 + part2 + beyond;

  // C1 = sup_a a^beta Int_a^{1/2} kernel dt over a in (0, 1/2]
  double c1 = 0.0;
  double integral = 0.0;
  double upper = 0.5;
  for (int k = 1; k <= 120; ++k) {
    const double a = 0.5 * std::pow(2.0, -0.25 * k);
    double err = 0.0;
    integral += integrate_adaptive(log_kernel, a, upper, 1e-10, &err);
    upper = a;
    c1 = std::max(c1, std::pow(a, beta) * integral);
  }
  env.C1 = c1;
  return env;
}

std::vector<EnvelopeSample> envelope_samples(const MagneticField& field,
                                             const PotentialEnvelope& env,
                                             std::span<const double> radii,
                                             std::span<const Vec3> directions,
                                             const BiotSavartSpec& spec) {
  std::vector<EnvelopeSample> rows;
  rows.reserve(radii.size() * directions.size());
  for (double r : radii) {
    const double bound = env(r);
    for (std::size_t k = 0; k < directions.size(); ++k) {
      EnvelopeSample s;
      s.r = r;
      s.direction_index = static_cast<int>(k);
      s.A_mag = biot_savart(field, r * directions[k], spec).norm();
      s.envelope = bound;
      s.pass = s.A_mag <= bound;
      rows.push_back(s);
    }
  }
  return rows;
}

}  // namespace zmlab
