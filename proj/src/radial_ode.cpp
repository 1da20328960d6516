#include "zmlab/radial_ode.hpp"

#include <cmath>
#include <deque>

#include <boost/numeric/odeint.hpp>

namespace zmlab {

namespace {

using State = std::vector<cplx>;

class ChannelSystem {
 public:
  ChannelSystem(const GaugePotential& A, int kappa_max, const RadialOdeSpec& spec)
      : A_(A), channels_(channels_up_to(kappa_max)) {
    const int np = spec.quad_polar > 0 ? spec.quad_polar : 2 * kappa_max + 4;
    const int na = spec.quad_azimuth > 0 ? spec.quad_azimuth : 2 * (2 * kappa_max + 4);
    quad_ = SphereQuadrature::gauss(np, na);
    // basis values at the quadrature nodes, laid out (2*nq) x nch
    basis_.resize(2 * quad_.size(), channels_.size());
    for (std::size_t q = 0; q < quad_.size(); ++q)
      for (std::size_t c = 0; c < channels_.size(); ++c) {
        const Spinor v = spherical_spinor(channels_[c], quad_.points[q]);
        basis_(2 * q, c) = v(0);
        basis_(2 * q + 1, c) = v(1);
      }
  }

  const std::vector<Channel>& channels() const { return channels_; }

  // M(r)_{cc'} = <Omega_c, sigma_A(r w) Omega_c'> over the sphere
  const Eigen::MatrixXcd& coupling(double r) const {
    for (const auto& [rc, mc] : cache_)
      if (rc == r) return mc;
    Eigen::MatrixXcd scaled(2 * quad_.size(), channels_.size());
    for (std::size_t q = 0; q < quad_.size(); ++q) {
      const Vec3 w = quad_.points[q];
      const Mat2c sigma_a = sigma_dot(w) * sigma_dot(Vec3(A_(r * w)));
      const Mat2c wswa = quad_.weights[q] * sigma_a;
      scaled.middleRows(2 * q, 2) = wswa * basis_.middleRows(2 * q, 2);
    }
    cache_.emplace_front(r, basis_.adjoint() * scaled);
    if (cache_.size() > 4) cache_.pop_back();
    return cache_.front().second;
  }

  void operator()(const State& a, State& dadr, double r) const {
    const Eigen::Map<const Eigen::VectorXcd> av(a.data(), a.size());
    Eigen::VectorXcd rhs = I * (coupling(r) * av);
    for (std::size_t c = 0; c < channels_.size(); ++c)
      rhs(c) -= (channels_[c].kappa + 1.0) / r * av(c);
    dadr.resize(a.size());
    Eigen::Map<Eigen::VectorXcd>(dadr.data(), dadr.size()) = rhs;
  }

 private:
  const GaugePotential& A_;
  std::vector<Channel> channels_;
  SphereQuadrature quad_;
  Eigen::MatrixXcd basis_;
  mutable std::deque<std::pair<double, Eigen::MatrixXcd>> cache_;
};

}  // namespace

RadialSolution integrate_radial_system(const GaugePotential& A, int kappa_max,
                                       std::span<const double> radii,
                                       const Eigen::VectorXcd& initial,
                                       const RadialOdeSpec& spec) {
  if (radii.size() < 2)
    throw std::invalid_argument("integrate_radial_system: need >= 2 radii");
  const bool outward = radii[1] > radii[0];
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if ((radii[i + 1] > radii[i]) != outward || radii[i + 1] == radii[i])
      throw std::invalid_argument("integrate_radial_system: radii not monotone");
  for (double r : radii)
    if (!(r > 0.0))
      throw std::invalid_argument("integrate_radial_system: radii must be > 0");

  ChannelSystem system(A, kappa_max, spec);
  if (initial.size() != static_cast<Eigen::Index>(system.channels().size()))
    throw std::invalid_argument("integrate_radial_system: bad initial size");

  RadialSolution sol;
  sol.channels = system.channels();
  sol.radii.assign(radii.begin(), radii.end());
  sol.amplitudes.resize(radii.size(), initial.size());

  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(
      spec.abs_tol, spec.rel_tol);

  State a(initial.data(), initial.data() + initial.size());
  sol.amplitudes.row(0) = initial.transpose();
  double dt = (outward ? 1.0 : -1.0) * std::abs(spec.initial_step);
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    double t = radii[i];
    const double target = radii[i + 1];
    while (outward ? t < target : t > target) {
      if (outward ? t + dt > target : t + dt < target) dt = target - t;
      ode::controlled_step_result res;
      int rejects = 0;
      do {
        res = stepper.try_step(std::ref(system), a, t, dt);
        if (res == ode::fail) ++rejects;
      } while (res == ode::fail && rejects < 100);
      if (res == ode::fail || std::abs(dt) < 1e-14 * (1.0 + std::abs(t)))
        throw std::runtime_error(
            "integrate_radial_system: step size underflow near r = " +
            std::to_string(t));
    }
    for (Eigen::Index c = 0; c < initial.size(); ++c)
      sol.amplitudes(i + 1, c) = a[c];
  }

  for (std::size_t i = 0; i < sol.radii.size(); ++i) {
    double plus2 = 0.0, minus2 = 0.0;
    for (std::size_t c = 0; c < sol.channels.size(); ++c)
      (sol.channels[c].kappa > 0 ? plus2 : minus2) +=
          std::norm(sol.amplitudes(i, c));
    sol.norm_plus.push_back(std::sqrt(plus2));
    sol.norm_minus.push_back(std::sqrt(minus2));
  }
  return sol;
}

namespace {

bool steepening(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 6) return false;
  const std::size_t half = samples.size() / 2;
  const auto early = fit_decay_exponent(samples.subspan(0, half));
  const auto late = fit_decay_exponent(samples.subspan(half));
  return late.exponent - early.exponent > 0.5;
}

}  // namespace

SphereNormDecay fit_sphere_norm_decay(const SpinorEvaluator& psi,
                                      std::span<const double> radii, int kappa_max,
                                      const SphereQuadrature& quad) {
  SphereNormDecay out;
  out.table = partial_wave_project(psi, kappa_max, radii, quad);

  std::vector<std::pair<double, double>> plus, minus;
  for (std::size_t i = 0; i < out.table.radii.size(); ++i) {
    if (out.table.norm_plus[i] > 1e-280)
      plus.emplace_back(out.table.radii[i], out.table.norm_plus[i]);
    else
      ++out.plus_skipped;
    if (out.table.norm_minus[i] > 1e-280)
      minus.emplace_back(out.table.radii[i], out.table.norm_minus[i]);
    else
      ++out.minus_skipped;
  }
  if (plus.size() >= 3) {
    out.plus = fit_decay_exponent(plus);
    out.plus_superpolynomial = steepening(plus);
  }
  if (minus.size() >= 3) {
    out.minus = fit_decay_exponent(minus);
    out.minus_superpolynomial = steepening(minus);
  }
  return out;
}

}  // namespace zmlab
