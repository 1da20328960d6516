#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "zmlab/eigensolver.hpp"
#include "zmlab/field_zoo.hpp"

using namespace zmlab;

namespace {

GaugePotential zero_potential() {
  GaugePotential A;
  A.label = "zero";
  A.eval = [](const Vec3&) { return Vec3::Zero(); };
  return A;
}

// A = 0, weight = indicator of a ball: exercises the supp-W restriction
FormPair ball_instance(const GridSpec& spec, double radius) {
  return assemble_forms([](const Vec3&) { return Vec3::Zero(); },
                        [radius](const Vec3& x) {
                          return x.norm() <= radius ? 1.0 : 0.0;
                        },
                        spec);
}

}  // namespace

TEST_CASE("delta surrogate: formula, endpoints, monotonicity") {
  CHECK(delta_surrogate(0.0) == 0.0);
  CHECK(delta_surrogate(1.0) == 0.5);
  CHECK_THROWS_AS(delta_surrogate(-0.1), std::invalid_argument);
  double prev = -1.0;
  for (double l : {0.0, 0.01, 0.5, 2.0, 50.0, 1e6}) {
    const double d = delta_surrogate(l);
    CHECK(d >= prev);
    CHECK(d < 1.0);
    prev = d;
  }
  CHECK(delta_surrogate(1e12) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("iterative matches dense on an 8^3 full-support instance") {
  const ZeroModeTriple t = loss_yau_triple();
  FormPair fp = assemble_forms(t.potential, t.field, {0.5, 2.0});
  REQUIRE(fp.grid().n == 8);

  const double dense = dense_lambda_min(fp);
  EigenOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 20000;
  const RayleighResult it = minimize_quotient(fp, opts);
  CHECK(it.converged);
  CHECK(std::abs(it.lambda_min - dense) <= 1e-8 * dense);
  CHECK(it.delta_surrogate == delta_surrogate(it.lambda_min));
  // minimizer is B-normalized
  CHECK(fp.b_form(it.minimizer) == doctest::Approx(1.0).epsilon(1e-10));
  // eigen-residual certificate
  CHECK(fp.p_form(it.minimizer) ==
        doctest::Approx(it.lambda_min).epsilon(1e-8));
}

TEST_CASE("iterative matches dense on the restricted ball-weight instance") {
  FormPair fp = ball_instance({0.5, 2.0}, 1.0);
  REQUIRE(fp.grid().n == 8);
  std::size_t inside = 0;
  for (double w : fp.weight) inside += w > 0.0;
  REQUIRE(inside > 0);
  REQUIRE(inside < fp.weight.size());  // genuinely restricted

  const double dense = dense_lambda_min(fp);
  EigenOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 20000;
  const RayleighResult it = minimize_quotient(fp, opts);
  CHECK(it.converged);
  CHECK(std::abs(it.lambda_min - dense) <= 1e-8 * dense);
}

TEST_CASE("weight identically zero raises the degenerate-form error") {
  FormPair fp = assemble_forms(zero_potential(), builtin_field("zero"), {0.5, 1.0});
  CHECK_THROWS_AS(minimize_quotient(fp), HypothesisError);
  CHECK_THROWS_AS(dense_lambda_min(fp), HypothesisError);
}

TEST_CASE("lambda is invariant under a global phase of the initial guess") {
  const ZeroModeTriple t = loss_yau_triple();
  FormPair fp = assemble_forms(t.potential, t.field, {0.5, 2.0});
  EigenOptions opts;
  opts.tol = 1e-11;
  opts.max_iter = 20000;
  Eigen::VectorXcd seed(fp.grid().num_values());
  auto gen = testing::rng(211);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index i = 0; i < seed.size(); ++i) seed(i) = cplx(u(gen), u(gen));
  const RayleighResult a = minimize_quotient(fp, opts, &seed);
  const Eigen::VectorXcd rotated = std::exp(cplx(0.0, 0.77)) * seed;
  const RayleighResult b = minimize_quotient(fp, opts, &rotated);
  CHECK(a.lambda_min == doctest::Approx(b.lambda_min).epsilon(1e-9));
}

TEST_CASE("lambda is invariant under a consistent spin-basis change") {
  const ZeroModeTriple t = loss_yau_triple();
  FormPair fp = assemble_forms(t.potential, t.field, {0.5, 1.5});
  const double lambda_std = dense_lambda_min(fp);

  // U = exp(i 0.4 sigma_y) rotates the spin basis; sigma_j -> U sigma_j U^+
  const Mat2c U = (cplx(0.0, 0.4) * pauli(1)).exp();
  FormPair rotated = fp;
  rotated.D.sigma_override = {U * pauli(0) * U.adjoint(),
                              U * pauli(1) * U.adjoint(),
                              U * pauli(2) * U.adjoint()};
  const double lambda_rot = dense_lambda_min(rotated);
  CHECK(lambda_rot == doctest::Approx(lambda_std).epsilon(1e-10));
}

TEST_CASE("identity scaling c = 1 leaves both forms unchanged") {
  const ZeroModeTriple t = loss_yau_triple();
  FormPair fp = assemble_forms(t.potential, t.field, {0.5, 2.0});
  FormPair copy = assemble_forms(t.potential, t.field, {0.5, 2.0});
  auto gen = testing::rng(223);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd v(fp.grid().num_values());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(u(gen), u(gen));
  CHECK(fp.p_form(v) == copy.p_form(v));
  CHECK(fp.b_form(v) == copy.b_form(v));
}

TEST_CASE("derived pair: quotient of the sampled zero mode is small") {
  const ZeroModeTriple t = loss_yau_triple();
  FormPair fp = assemble_forms(t.potential, t.field, {0.25, 4.0});
  const SpinorGrid psi = SpinorGrid::sample(fp.grid(), t.spinor);
  const double quotient = fp.p_form(psi.values) / fp.b_form(psi.values);
  CHECK(quotient <= 0.2);  // boundary layer dominates; the minimizer does better
}

TEST_CASE("multilevel solver converges and improves under refinement") {
  const ZeroModeTriple t = loss_yau_triple();
  EigenOptions opts;
  opts.tol = 1e-7;
  const RayleighResult coarse =
      minimize_quotient_multilevel(t.potential, t.field, {0.5, 4.0}, opts);
  const RayleighResult fine =
      minimize_quotient_multilevel(t.potential, t.field, {0.25, 4.0}, opts);
  CHECK(coarse.converged);
  CHECK(fine.converged);
  CHECK(fine.lambda_min < coarse.lambda_min);
  CHECK(fine.lambda_min >= 0.0);
}
