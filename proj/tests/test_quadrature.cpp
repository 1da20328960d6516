#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "zmlab/quadrature.hpp"

using namespace zmlab;
constexpr double kPi = std::numbers::pi;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
  const GaussLegendre q = GaussLegendre::on(-1.0, 1.0, 8);
  // x^14 over [-1,1] -> 2/15
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) acc += q.weights[i] * std::pow(q.nodes[i], 14);
  CHECK(acc == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
  // degree 16 is not exact for n=8
  acc = 0.0;
  for (int i = 0; i < 8; ++i) acc += q.weights[i] * std::pow(q.nodes[i], 16);
  CHECK(std::abs(acc - 2.0 / 17.0) > 1e-8);
}

TEST_CASE("Gauss-Legendre respects interval mapping") {
  const GaussLegendre q = GaussLegendre::on(2.0, 5.0, 12);
  double acc = 0.0;
  for (int i = 0; i < 12; ++i) acc += q.weights[i] * q.nodes[i] * q.nodes[i];
  CHECK(acc == doctest::Approx((125.0 - 8.0) / 3.0).epsilon(1e-13));
}

TEST_CASE("sphere quadrature weights sum to 4 pi and integrate harmonics") {
  const SphereQuadrature q = SphereQuadrature::gauss(12, 24);
  double total = 0.0;
  for (double w : q.weights) total += w;
  CHECK(total == doctest::Approx(4.0 * kPi).epsilon(1e-13));

  // Y_3^2 integrates to zero; |Y_3^2|^2 integrates to one
  cplx mean = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const cplx y = spherical_harmonic_dir(3, 2, q.points[i]);
    mean += q.weights[i] * y;
    norm += q.weights[i] * std::norm(y);
  }
  CHECK(std::abs(mean) <= 1e-13);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adaptive integration reports a usable error estimate") {
  double err = 0.0;
  const double v =
      integrate_adaptive([](double t) { return std::exp(-t * t); }, 0.0, 10.0,
                         1e-12, &err);
  CHECK(v == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-12));
  CHECK(err < 1e-8);
}

TEST_CASE("fit_decay_exponent on an exact power law") {
  std::vector<std::pair<double, double>> samples;
  for (double r : {1.0, 2.0, 4.0, 8.0, 16.0})
    samples.emplace_back(r, 5.0 * std::pow(r, -1.5));
  const PowerLawFit fit = fit_decay_exponent(samples);
  CHECK(fit.exponent == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.constant == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(fit.residual <= 1e-12);
}

TEST_CASE("fit_decay_exponent on constant samples gives exponent 0") {
  std::vector<std::pair<double, double>> samples{{1.0, 3.0}, {2.0, 3.0}, {7.0, 3.0}};
  const PowerLawFit fit = fit_decay_exponent(samples);
  CHECK(fit.exponent == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(fit.constant == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("fit_decay_exponent rejects nonpositive magnitudes") {
  std::vector<std::pair<double, double>> samples{{1.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}};
  CHECK_THROWS_AS(fit_decay_exponent(samples), std::invalid_argument);
}

TEST_CASE("fibonacci directions are unit and spread") {
  const auto dirs = fibonacci_directions(32);
  CHECK(dirs.size() == 32);
  Vec3 mean = Vec3::Zero();
  for (const Vec3& d : dirs) {
    CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-12));
    mean += d;
  }
  CHECK(mean.norm() / 32.0 <= 0.05);
}
