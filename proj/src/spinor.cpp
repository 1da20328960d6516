#include "zmlab/spinor.hpp"

#include <cmath>
#include <memory>

#include <boost/math/special_functions/spherical_harmonic.hpp>

namespace zmlab {

std::vector<Channel> channels_up_to(int kappa_max) {
  if (kappa_max < 1) throw std::invalid_argument("channels_up_to: kappa_max >= 1");
  std::vector<Channel> out;
  for (int akappa = 1; akappa <= kappa_max; ++akappa) {
    for (int kappa : {-akappa, akappa}) {
      const int twice_j = 2 * akappa - 1;
      for (int twice_m = -twice_j; twice_m <= twice_j; twice_m += 2)
        out.push_back(Channel{kappa, twice_m});
    }
  }
  return out;
}

cplx spherical_harmonic_dir(int l, int m, const Vec3& omega) {
  const double theta = std::acos(std::clamp(omega.z() / omega.norm(), -1.0, 1.0));
  const double phi = std::atan2(omega.y(), omega.x());
  return boost::math::spherical_harmonic(l, m, theta, phi);
}

Spinor spherical_spinor(const Channel& ch, const Vec3& omega) {
  if (!ch.valid())
    throw std::invalid_argument("spherical_spinor: invalid (kappa, m) channel");
  const int l = ch.l();
  const double inv = 1.0 / (2.0 * l + 1.0);
  const double m = ch.m();
  // coupled components carry m -/+ 1/2
  const int m_up = (ch.twice_m - 1) / 2;
  const int m_dn = (ch.twice_m + 1) / 2;
  double c_up, c_dn;
  if (ch.kappa < 0) {  // j = l + 1/2
    c_up = std::sqrt((l + 0.5 + m) * inv);
    c_dn = std::sqrt((l + 0.5 - m) * inv);
  } else {  // j = l - 1/2
    c_up = -std::sqrt((l + 0.5 - m) * inv);
    c_dn = std::sqrt((l + 0.5 + m) * inv);
  }
  Spinor out = Spinor::Zero();
  if (std::abs(m_up) <= l && c_up != 0.0)
    out(0) = c_up * spherical_harmonic_dir(l, m_up, omega);
  if (std::abs(m_dn) <= l && c_dn != 0.0)
    out(1) = c_dn * spherical_harmonic_dir(l, m_dn, omega);
  return out;
}

cplx sphere_inner(const SphereFn& f, const SphereFn& g, const SphereQuadrature& quad) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i)
    acc += quad.weights[i] * f(quad.points[i]).dot(g(quad.points[i]));
  return acc;
}

double sphere_norm(const SphereFn& f, const SphereQuadrature& quad) {
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i)
    acc += quad.weights[i] * f(quad.points[i]).squaredNorm();
  return std::sqrt(std::max(0.0, acc));
}

ChannelProjection project_channels(const SphereFn& f, int kappa_max,
                                   const SphereQuadrature& quad) {
  ChannelProjection proj;
  proj.channels = channels_up_to(kappa_max);
  proj.amplitudes = Eigen::VectorXcd::Zero(proj.channels.size());

  // one pass over the quadrature nodes; basis evaluated per node
  double norm2 = 0.0, plus2 = 0.0, minus2 = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const Spinor fv = f(quad.points[i]);
    norm2 += quad.weights[i] * fv.squaredNorm();
    for (std::size_t c = 0; c < proj.channels.size(); ++c) {
      const Spinor basis = spherical_spinor(proj.channels[c], quad.points[i]);
      proj.amplitudes(c) += quad.weights[i] * basis.dot(fv);
    }
  }
  for (std::size_t c = 0; c < proj.channels.size(); ++c) {
    const double a2 = std::norm(proj.amplitudes(c));
    (proj.channels[c].kappa > 0 ? plus2 : minus2) += a2;
  }
  proj.norm = std::sqrt(std::max(0.0, norm2));
  proj.norm_plus = std::sqrt(plus2);
  proj.norm_minus = std::sqrt(minus2);
  proj.truncation_residual = std::sqrt(std::max(0.0, norm2 - plus2 - minus2));
  return proj;
}

KApplied apply_k_operator(const SphereFn& f, int kappa_max,
                          const SphereQuadrature& quad) {
  auto proj = std::make_shared<ChannelProjection>(
      project_channels(f, kappa_max, quad));
  KApplied out;
  out.truncation_residual = proj->truncation_residual;
  out.value = [proj](const Vec3& omega) -> Spinor {
    Spinor acc = Spinor::Zero();
    for (std::size_t c = 0; c < proj->channels.size(); ++c)
      acc += proj->amplitudes(c) * static_cast<double>(proj->channels[c].kappa) *
             spherical_spinor(proj->channels[c], omega);
    return acc;
  };
  return out;
}

std::size_t RadialChannelTable::channel_index(const Channel& ch) const {
  for (std::size_t c = 0; c < channels.size(); ++c)
    if (channels[c].kappa == ch.kappa && channels[c].twice_m == ch.twice_m) return c;
  throw std::out_of_range("channel not in table");
}

RadialChannelTable partial_wave_project(const SpinorEvaluator& psi, int kappa_max,
                                        std::span<const double> radii,
                                        const SphereQuadrature& quad) {
  RadialChannelTable table;
  table.radii.assign(radii.begin(), radii.end());
  table.channels = channels_up_to(kappa_max);
  table.amplitudes =
      Eigen::MatrixXcd::Zero(table.radii.size(), table.channels.size());
  for (std::size_t ri = 0; ri < table.radii.size(); ++ri) {
    const double r = table.radii[ri];
    auto slice = [&psi, r](const Vec3& w) { return psi(r * w); };
    ChannelProjection proj = project_channels(slice, kappa_max, quad);
    table.amplitudes.row(ri) = proj.amplitudes.transpose();
    table.norm_plus.push_back(proj.norm_plus);
    table.norm_minus.push_back(proj.norm_minus);
    table.truncation.push_back(proj.truncation_residual);
  }
  return table;
}

namespace {

// sigma.L f at x by centered differences of the ambient function:
// sigma.L = -i sigma . (x cross grad).
Spinor sigma_L_fd(const SpinorEvaluator& f, const Vec3& x, double h) {
  std::array<Spinor, 3> grad;
  for (int j = 0; j < 3; ++j) {
    Vec3 dx = Vec3::Zero();
    dx(j) = h;
    grad[j] = (f(x + dx) - f(x - dx)) / (2.0 * h);
  }
  // (x cross grad)_k = eps_{kab} x_a d_b
  const Spinor cross_x = x.y() * grad[2] - x.z() * grad[1];
  const Spinor cross_y = x.z() * grad[0] - x.x() * grad[2];
  const Spinor cross_z = x.x() * grad[1] - x.y() * grad[0];
  Spinor out;
  out(0) = cross_z(0) + cross_x(1) - I * cross_y(1);
  out(1) = cross_x(0) + I * cross_y(0) - cross_z(1);
  return -I * out;
}

}  // namespace

double radial_factorization_residual(const SpinorEvaluator& psi, const Vec3& x,
                                     double h) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  const double r = x.norm();
  if (r < 10.0 * h)
    throw std::invalid_argument(
        "radial_factorization_residual: |x| < 10h, radial factor unresolved");

  // left side: sigma.p with Cartesian centered differences
  Spinor lhs = Spinor::Zero();
  for (int j = 0; j < 3; ++j) {
    Vec3 dx = Vec3::Zero();
    dx(j) = h;
    const Spinor dpsi = (psi(x + dx) - psi(x - dx)) / (2.0 * h);
    Vec3 ej = Vec3::Zero();
    ej(j) = 1.0;
    lhs += -I * sigma_apply(ej, dpsi);
  }

  // right side: -i sigma.x^ (d_r psi + (K+1)/r psi), (K+1) psi = -sigma.L psi
  const Vec3 xhat = x / r;
  const Spinor dr = (psi(x + h * xhat) - psi(x - h * xhat)) / (2.0 * h);
  const Spinor k_plus_one = -sigma_L_fd(psi, x, h);
  const Spinor rhs = -I * sigma_apply(xhat, dr + k_plus_one / r);

  return (lhs - rhs).norm();
}

double sphere_norm_derivative_check(const SpinorEvaluator& f, double r, double h,
                                    const SphereQuadrature& quad) {
  if (!(r > 0.0 && h > 0.0 && r > h))
    throw std::invalid_argument("sphere_norm_derivative_check: need r > h > 0");

  auto norm_at = [&](double rr) {
    auto slice = [&f, rr](const Vec3& w) { return f(rr * w); };
    return sphere_norm(slice, quad);
  };
  const double lhs = (norm_at(r + h) - norm_at(r - h)) / (2.0 * h);

  const double nr = norm_at(r);
  double rhs = 0.0;
  if (nr > 1e-14) {
    cplx inner = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const Vec3 w = quad.points[i];
      const Spinor fr = f(r * w);
      const Spinor dfr = (f((r + h) * w) - f((r - h) * w)) / (2.0 * h);
      inner += quad.weights[i] * fr.dot(dfr);
    }
    rhs = inner.real() / nr;
  }
  return std::abs(lhs - rhs);
}

}  // namespace zmlab
