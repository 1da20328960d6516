#include "zmlab/field_zoo.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace zmlab {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 azimuthal_unit(const Vec3& x) {
  const double rho = std::hypot(x.x(), x.y());
  if (rho < 1e-300) return Vec3::Zero();  // direction undefined on the axis
  return Vec3(-x.y() / rho, x.x() / rho, 0.0);
}

// Fixed probe set for nowhere-vanishing checks: origin plus shells.
std::vector<Vec3> probe_points() {
  std::vector<Vec3> pts;
  pts.emplace_back(Vec3::Zero());
  for (double r : {0.5, 1.0, 2.0, 4.0, 8.0})
    for (const Vec3& d : fibonacci_directions(16)) pts.push_back(r * d);
  return pts;
}

}  // namespace

Vec3 gaussian_swirl_potential(const Vec3& x) {
  const double g = std::exp(-x.squaredNorm());
  return Vec3(-x.y() * g, x.x() * g, 0.0);
}

Vec3 gaussian_swirl_curl(const Vec3& x) {
  const double g = std::exp(-x.squaredNorm());
  return Vec3(2.0 * x.x() * x.z() * g, 2.0 * x.y() * x.z() * g,
              (2.0 - 2.0 * x.x() * x.x() - 2.0 * x.y() * x.y()) * g);
}

LpNormResult lp_norm(const MagneticField& field, double p, const LpNormSpec& spec) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const SphereQuadrature sq = SphereQuadrature::gauss(spec.n_polar, spec.n_azimuth);

  auto shell = [&](double r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i)
      acc += sq.weights[i] * std::pow(field(r * sq.points[i]).norm(), p);
    return r * r * acc;
  };

  // Integrability near the origin: the shell integrand must not behave
  // like r^q with q <= -1.
  {
    const double i1 = shell(1e-3), i2 = shell(1e-2), i3 = shell(1e-1);
    if (i3 > 1e-300 && i2 > 1e-300 && i1 > 1e-300) {
      const double q = std::log(i2 / i1) / std::log(10.0);
      const double q2 = std::log(i3 / i2) / std::log(10.0);
      if (std::min(q, q2) <= -1.0)
        throw HypothesisError("lp_norm: |B|^p not integrable near the origin");
    }
  }

  LpNormResult out;
  double tail = 0.0;
  double r_max = spec.r_max;
  // envelope bound on the integral beyond r
  auto envelope_tail = [&](double r) -> double {
    if (!field.decay) return std::numeric_limits<double>::infinity();
    const FieldDecay& d = *field.decay;
    if (d.C_B == 0.0) return 0.0;
    const double tail_exp = p * (2.0 + d.beta) - 3.0;
    return 4.0 * kPi * std::pow(d.C_B, p) * std::pow(r, -tail_exp) / tail_exp;
  };

  if (field.decay) {
    const double tail_exp = p * (2.0 + field.decay->beta) - 3.0;
    if (field.decay->C_B > 0.0 && tail_exp <= 0.0)
      throw HypothesisError("lp_norm: envelope tail r^{-p(2+beta)+2} not summable");
  } else {
    // No envelope: probe geometrically growing shells and require a clearly
    // summable slope, then bound the tail with the fitted power law.
    double r = 1.0;
    double prev = shell(r);
    for (;;) {
      const double next = shell(2.0 * r);
      if (next < 1e-14 * std::max(prev, 1.0)) {
        r_max = 2.0 * r;
        tail = 0.0;
        break;
      }
      const double q = std::log(next / prev) / std::log(2.0);
      if (r >= 64.0) {
        if (q >= -1.05)
          throw HypothesisError("lp_norm: radial tail not summable (slope " +
                                std::to_string(q) + ")");
        r_max = 2.0 * r;
        tail = next * (2.0 * r) / (-q - 1.0);
        break;
      }
      prev = next;
      r *= 2.0;
    }
  }

  // segmented radial integration; with decay metadata the reach extends
  // until the envelope tail is negligible
  double integral = 0.0, quad_err = 0.0;
  const double start =
      field.decay ? std::max(8.0, 2.0 * field.decay->r0) : std::min(8.0, r_max);
  double lo = 0.0;
  for (double hi : {0.25 * start, 0.5 * start, start}) {
    hi = std::min(hi, r_max > 0.0 ? r_max : hi);
    if (hi <= lo) continue;
    double err = 0.0;
    integral += integrate_adaptive(shell, lo, hi, spec.rel_tol, &err);
    quad_err += err;
    lo = hi;
  }
  while (true) {
    if (r_max > 0.0 && lo >= r_max) break;
    if (field.decay) {
      tail = envelope_tail(lo);
      if (tail <= std::max(spec.rel_tol * integral, 1e-300)) break;
      if (lo >= 1e6) break;  // envelope decays too slowly to chase further
    }
    double hi = 2.0 * lo;
    if (r_max > 0.0) hi = std::min(hi, r_max);
    double err = 0.0;
    integral += integrate_adaptive(shell, lo, hi, spec.rel_tol, &err);
    quad_err += err;
    lo = hi;
  }
  if (field.decay) tail = envelope_tail(lo);
  out.integral = integral + tail;
  out.error = quad_err + tail;
  out.tail = tail;
  out.r_max = lo;
  out.value = out.integral > 0.0 ? std::pow(out.integral, 1.0 / p) : 0.0;
  return out;
}

DecayReport decay_report(const MagneticField& field, std::span<const double> radii,
                         std::span<const Vec3> directions) {
  if (!field.decay)
    throw std::invalid_argument("decay_report: field has no decay metadata");
  const FieldDecay& d = *field.decay;
  for (double r : radii)
    if (r < d.r0)
      throw std::invalid_argument("decay_report: radius below validity radius r0");

  DecayReport rep;
  rep.claimed = d;
  const double pass_limit = d.C_B * (1.0 + 1e-12) + 1e-300;
  rep.pass = true;
  for (double r : radii) {
    DecayReportRow row;
    row.r = r;
    const double scale = std::pow(r, 2.0 + d.beta);
    for (std::size_t k = 0; k < directions.size(); ++k) {
      const double ratio = field(r * directions[k]).norm() * scale;
      if (ratio > row.max_ratio) {
        row.max_ratio = ratio;
        row.argmax_direction = static_cast<int>(k);
      }
    }
    row.pass = row.max_ratio <= pass_limit;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

ZeroModeTriple derive_pair_from_spinor(SpinorEvaluator psi, SpinorGradient grad,
                                       const Spinor& seed) {
  for (const Vec3& x : probe_points()) {
    if (psi(x).norm() < 1e-12)
      throw std::invalid_argument("derive_pair_from_spinor: spinor vanishes near " +
                                  std::to_string(x.norm()));
  }

  auto potential_eval = [psi, grad](const Vec3& x) -> Vec3 {
    const Spinor v = psi(x);
    const auto dv = grad(x);
    const Spinor sp = -I * (sigma_apply(Vec3::UnitX(), dv[0]) +
                            sigma_apply(Vec3::UnitY(), dv[1]) +
                            sigma_apply(Vec3::UnitZ(), dv[2]));
    const double n2 = v.squaredNorm();
    Vec3 a;
    for (int j = 0; j < 3; ++j) {
      Vec3 ej = Vec3::Zero();
      ej(j) = 1.0;
      a(j) = (v.dot(sigma_apply(ej, sp))).real() / n2;
    }
    return a;
  };

  // curl by Richardson-extrapolated centered differences of A
  auto field_eval = [potential_eval](const Vec3& x) -> Vec3 {
    auto curl_h = [&](double h) -> Vec3 {
      Eigen::Matrix3d jac;  // jac(i,j) = d A_i / d x_j
      for (int j = 0; j < 3; ++j) {
        Vec3 dx = Vec3::Zero();
        dx(j) = h;
        jac.col(j) = (potential_eval(x + dx) - potential_eval(x - dx)) / (2.0 * h);
      }
      return Vec3(jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1));
    };
    const Vec3 c1 = curl_h(2e-3), c2 = curl_h(1e-3);
    return (4.0 * c2 - c1) / 3.0;
  };

  ZeroModeTriple t;
  t.potential.label = "derived";
  t.potential.gauge = GaugeTag::closed_form;
  t.potential.eval = potential_eval;
  t.field.label = "derived";
  t.field.eval = field_eval;
  t.spinor = std::move(psi);
  t.gradient = std::move(grad);
  t.seed = seed.normalized();
  return t;
}

ZeroModeTriple loss_yau_triple(const Spinor& seed) {
  const Spinor s = seed.normalized();
  // n = <seed, sigma seed>, a real unit vector
  Vec3 n;
  for (int j = 0; j < 3; ++j) {
    Vec3 ej = Vec3::Zero();
    ej(j) = 1.0;
    n(j) = s.dot(sigma_apply(ej, s)).real();
  }

  auto psi = [s](const Vec3& x) -> Spinor {
    const double u = 1.0 + x.squaredNorm();
    return std::pow(u, -1.5) * (s + I * sigma_apply(x, s));
  };
  auto grad = [s](const Vec3& x) -> std::array<Spinor, 3> {
    const double u = 1.0 + x.squaredNorm();
    const double f = std::pow(u, -1.5);
    const double df = -3.0 * std::pow(u, -2.5);  // d/dx_j = df * x_j
    const Spinor core = s + I * sigma_apply(x, s);
    std::array<Spinor, 3> out;
    for (int j = 0; j < 3; ++j) {
      Vec3 ej = Vec3::Zero();
      ej(j) = 1.0;
      out[j] = df * x(j) * core + f * I * sigma_apply(ej, s);
    }
    return out;
  };

  auto structure = [n](const Vec3& x) -> Vec3 {
    return (1.0 - x.squaredNorm()) * n + 2.0 * n.dot(x) * x + 2.0 * n.cross(x);
  };

  ZeroModeTriple t;
  t.potential.label = "loss-yau-derived";
  t.potential.gauge = GaugeTag::closed_form;
  t.potential.eval = [structure](const Vec3& x) -> Vec3 {
    const double u = 1.0 + x.squaredNorm();
    return 3.0 / (u * u) * structure(x);
  };
  t.potential.decay = PotentialDecay{3.0, 1.0, 0.0};  // |A| = 3/(1+r^2)

  t.field.label = "loss-yau-derived";
  t.field.eval = [structure](const Vec3& x) -> Vec3 {
    const double u = 1.0 + x.squaredNorm();
    return 12.0 / (u * u * u) * structure(x);
  };
  t.field.decay = FieldDecay{12.0, 2.0, 0.0};  // |B| = 12/(1+r^2)^2

  t.spinor = psi;
  t.gradient = grad;
  t.seed = s;
  return t;
}

double triple_residual(const ZeroModeTriple& triple, std::span<const Vec3> probes) {
  double worst = 0.0;
  for (const Vec3& x : probes) {
    const Spinor v = triple.spinor(x);
    const auto dv = triple.gradient(x);
    Spinor r = -I * (sigma_apply(Vec3::UnitX(), dv[0]) +
                     sigma_apply(Vec3::UnitY(), dv[1]) +
                     sigma_apply(Vec3::UnitZ(), dv[2]));
    r -= sigma_apply(triple.potential(x), v);
    worst = std::max(worst, r.norm() / v.norm());
  }
  return worst;
}

FieldBundle field_bundle(const std::string& label) {
  FieldBundle b;
  if (label == "zero") {
    b.field.label = "zero";
    b.field.eval = [](const Vec3&) { return Vec3::Zero(); };
    b.field.decay = FieldDecay{0.0, 1.0, 0.0};
    b.potential = GaugePotential{"zero", GaugeTag::closed_form,
                                 [](const Vec3&) { return Vec3::Zero(); },
                                 PotentialDecay{0.0, 1.0, 0.0}};
  } else if (label == "gaussian-swirl") {
    b.field.label = "gaussian-swirl";
    b.field.eval = gaussian_swirl_curl;
    // sup_r r^4 max_{|x|=r} |B| = 2 (2+sqrt(2))^2 (1+sqrt(2)) e^{-2-sqrt(2)} < 2
    b.field.decay = FieldDecay{2.0, 2.0, 0.0};
    b.potential = GaugePotential{"gaussian-swirl", GaugeTag::closed_form,
                                 gaussian_swirl_potential, std::nullopt};
  } else if (label == "loss-yau-derived") {
    b.triple = loss_yau_triple();
    b.field = b.triple->field;
    b.potential = b.triple->potential;
  } else if (label == "isotropic-swirl") {
    b.field.label = "isotropic-swirl";
    b.field.eval = [](const Vec3& x) -> Vec3 {
      const double u = 1.0 + x.squaredNorm();
      return azimuthal_unit(x) / (u * u);
    };
    b.field.decay = FieldDecay{1.0, 2.0, 0.0};
    b.field.axis_singular = true;
  } else {
    throw std::invalid_argument("unknown builtin field: " + label);
  }
  return b;
}

MagneticField builtin_field(const std::string& label) {
  return field_bundle(label).field;
}

MagneticField power_swirl_field(double C, double exponent,
                                std::optional<FieldDecay> decay) {
  MagneticField f;
  f.label = "power-swirl";
  f.eval = [C, exponent](const Vec3& x) -> Vec3 {
    const double r = x.norm();
    if (r < 1e-300) return Vec3::Zero();
    return C * std::pow(r, -exponent) * azimuthal_unit(x);
  };
  if (decay)
    f.decay = decay;
  else if (exponent > 2.0)
    f.decay = FieldDecay{C, exponent - 2.0, 0.0};
  f.axis_singular = true;
  return f;
}

std::vector<std::string> builtin_field_labels() {
  return {"zero", "gaussian-swirl", "loss-yau-derived", "isotropic-swirl"};
}

FieldBundle field_bundle_from_json(const nlohmann::json& doc) {
  const std::string kind = doc.value("kind", "builtin");
  const std::string label = doc.value("label", "");
  FieldBundle b;
  if (kind == "builtin") {
    if (label == "power-swirl") {
      const auto& params = doc.at("params");
      b.field = power_swirl_field(params.value("C", 1.0), params.at("exponent"));
    } else {
      b = field_bundle(label);
    }
  } else if (kind == "derived") {
    Spinor seed(1.0, 0.0);
    if (doc.contains("params") && doc["params"].contains("seed")) {
      const auto& s = doc["params"]["seed"];
      seed = Spinor(cplx(s.at(0).get<double>(), s.at(1).get<double>()),
                    cplx(s.at(2).get<double>(), s.at(3).get<double>()));
    }
    b.triple = loss_yau_triple(seed);
    b.field = b.triple->field;
    b.potential = b.triple->potential;
    if (!label.empty()) b.field.label = label;
  } else {
    throw std::invalid_argument("field kind must be 'builtin' or 'derived'");
  }
  if (doc.contains("decay")) {
    const auto& d = doc["decay"];
    FieldDecay fd{d.at("C_B").get<double>(), d.at("beta").get<double>(),
                  d.value("r0", 0.0)};
    if (!(fd.beta > 0.0)) throw std::invalid_argument("decay.beta must be > 0");
    if (fd.C_B < 0.0 || fd.r0 < 0.0)
      throw std::invalid_argument("decay constants must be nonnegative");
    b.field.decay = fd;
  }
  return b;
}

MagneticField field_from_json(const nlohmann::json& doc) {
  return field_bundle_from_json(doc).field;
}

}  // namespace zmlab
