#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zmlab/bootstrap.hpp"

using namespace zmlab;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("0.5") == Rational(1, 2));
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK(parse_rational("6") == Rational(6));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK(to_string(Rational(7, 2)) == "7/2");
  CHECK(to_string(Rational(4)) == "4");
}

TEST_CASE("p = 6, alpha = 1/2: the full ladder 1/2, 1, ..., 4 in 7 steps") {
  const BootstrapRun run = bootstrap_exponents(Rational(6), Rational(1, 2));
  CHECK(run.steps == 7);
  REQUIRE(run.exponents.size() == 8);
  for (int k = 0; k < 8; ++k) CHECK(run.exponents[k] == Rational(k + 1, 2));
}

TEST_CASE("alpha >= 4 caps in one step") {
  for (const Rational p : {Rational(2), Rational(3), Rational(17, 5)}) {
    const BootstrapRun run = bootstrap_exponents(p, Rational(4));
    CHECK(run.steps == 1);
    CHECK(run.exponents.back() == Rational(4));
  }
}

TEST_CASE("p = 2, alpha = 1/4 takes ceil((4 - 3/2)/(1/4)) = 10 steps") {
  const BootstrapRun run = bootstrap_exponents(Rational(2), Rational(1, 4));
  CHECK(run.exponents.front() == Rational(3, 2));
  CHECK(run.steps == 10);
}

TEST_CASE("step count is ceil((4 - 3/p)/alpha) and the sequence is monotone") {
  const std::vector<std::pair<Rational, Rational>> cases = {
      {Rational(2), Rational(1, 3)},  {Rational(5, 2), Rational(3, 7)},
      {Rational(6), Rational(1, 2)},  {Rational(12), Rational(5, 4)},
      {Rational(100), Rational(2)},
  };
  for (const auto& [p, alpha] : cases) {
    const BootstrapRun run = bootstrap_exponents(p, alpha);
    const Rational gap = Rational(4) - Rational(3) / p;
    const long long expected =
        (gap.numerator() * alpha.denominator() + alpha.numerator() * gap.denominator() - 1) /
        (alpha.numerator() * gap.denominator());
    CHECK(run.steps == expected);
    for (std::size_t k = 0; k + 1 < run.exponents.size(); ++k)
      CHECK(run.exponents[k] < run.exponents[k + 1]);
    CHECK(run.exponents.back() == Rational(4));
  }
}

TEST_CASE("hypothesis guards: p < 2 and alpha <= 0 are rejected") {
  CHECK_THROWS_AS(bootstrap_exponents(Rational(3, 2), Rational(1, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_exponents(Rational(2), Rational(0)),
                  std::invalid_argument);
}

TEST_CASE("propagated envelope coefficients for the worked step are exact") {
  // C = C_A = 1, eps = alpha = 1/2
  const PropagatedEnvelopes env = propagate_envelopes(
      1.0, 1.0, Rational(1, 2), Rational(1, 2), 1.0, 0.0);
  CHECK(env.minus_coeff_over_CCA == Rational(2));
  CHECK(env.plus_coeff_over_CCA == Rational(4, 3));
  CHECK_FALSE(env.plus_resonant);
  // growth exponent 4 - eps - alpha = 3: bound at r = 2 is (4/3)(2^3 - 1)
  CHECK(env.plus_bound(2.0) == doctest::Approx((4.0 / 3.0) * 7.0).epsilon(1e-14));
  CHECK(env.minus_bound(2.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("resonant branch 4 - eps - alpha = 0 switches to the log form") {
  const PropagatedEnvelopes env = propagate_envelopes(
      2.0, 3.0, Rational(2), Rational(2), 1.5, 7.0);
  CHECK(env.plus_resonant);
  CHECK(env.plus_bound(1.5) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(env.plus_bound(3.0) ==
        doctest::Approx(4.0 * 6.0 * std::log(2.0) + 7.0).epsilon(1e-13));
}

TEST_CASE("propagate_envelopes rejects eps + alpha <= 0") {
  CHECK_THROWS_AS(
      propagate_envelopes(1.0, 1.0, Rational(-1), Rational(1, 2), 1.0, 0.0),
      std::invalid_argument);
}
