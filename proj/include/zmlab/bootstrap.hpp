#pragma once

#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace zmlab {

using Rational = boost::rational<long long>;

// Parses "3", "3/4", "0.5", "-1.25" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

// Exponent iteration for the squared sphere norms: eps_0 = 3/p,
// eps_{k+1} = min(eps_k + alpha, 4), carried out in exact rationals until the
// cap 4 is reached (squared-norm exponent 4 == norm exponent 2).
struct BootstrapRun {
  std::vector<Rational> exponents;  // eps_0 .. eps_final = 4
  int steps = 0;                    // number of iterations to reach 4
};

BootstrapRun bootstrap_exponents(const Rational& p, const Rational& alpha);

// One refinement step of the envelope inequalities. Given
//   ||g_pm||^2(s) <= C s^{-eps} and ||sigma_A(s w)|| <= C_A s^{-1-alpha},
// the outward integral gives (with gbar_+ = g_+ r^2)
//   ||gbar_+||^2(r) <= 4 C C_A/(4-eps-alpha) (r^{4-eps-alpha} - 1) + C1,
// switching to 4 C C_A ln(r/r1) + C1 at the 4-eps-alpha = 0 resonance, and
// the inward integral gives
//   ||g_-||^2(r) <= (2 C C_A/(eps+alpha)) r^{-eps-alpha}.
struct PropagatedEnvelopes {
  // exact rational parts of the coefficients, for C = C_A = 1
  Rational plus_coeff_over_CCA;   // 4/(4-eps-alpha); 4 at the resonance
  Rational minus_coeff_over_CCA;  // 2/(eps+alpha)
  bool plus_resonant = false;     // eps + alpha == 4
  double C = 1.0, C_A = 1.0, C1 = 0.0, r1 = 1.0;
  Rational eps, alpha;

  double plus_bound(double r) const;   // bound on ||gbar_+||^2(r)
  double minus_bound(double r) const;  // bound on ||g_-||^2(r)
};

PropagatedEnvelopes propagate_envelopes(double C, double C_A, const Rational& eps,
                                        const Rational& alpha, double r1,
                                        double C1);

}  // namespace zmlab
