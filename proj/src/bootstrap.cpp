#include "zmlab/bootstrap.hpp"

#include <cmath>
#include <stdexcept>

namespace zmlab {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const long long num = std::stoll(text.substr(0, slash));
    const long long den = std::stoll(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  const bool negative = text.front() == '-';
  std::string digits = text;
  digits.erase(dot, 1);
  if (negative) digits.erase(0, 1);
  if (digits.empty()) throw std::invalid_argument("parse_rational: bad number");
  long long den = 1;
  for (std::size_t k = dot; k < text.size() - 1; ++k) {
    if (den > (1LL << 60) / 10)
      throw std::invalid_argument("parse_rational: too many decimals");
    den *= 10;
  }
  const long long num = std::stoll(digits);
  return Rational(negative ? -num : num, den);
}

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

BootstrapRun bootstrap_exponents(const Rational& p, const Rational& alpha) {
  if (p < Rational(2))
    throw std::invalid_argument("bootstrap_exponents: requires p >= 2");
  if (alpha <= Rational(0))
    throw std::invalid_argument("bootstrap_exponents: requires alpha > 0");
  BootstrapRun run;
  const Rational cap(4);
  Rational eps = Rational(3) / p;
  run.exponents.push_back(eps);
  while (eps < cap) {
    eps = std::min(eps + alpha, cap);
    run.exponents.push_back(eps);
    ++run.steps;
  }
  return run;
}

double PropagatedEnvelopes::plus_bound(double r) const {
  const double cca = C * C_A;
  if (plus_resonant) return 4.0 * cca * std::log(r / r1) + C1;
  const double growth = 4.0 - to_double(eps) - to_double(alpha);
  return to_double(plus_coeff_over_CCA) * cca * (std::pow(r, growth) - 1.0) + C1;
}

double PropagatedEnvelopes::minus_bound(double r) const {
  const double fall = to_double(eps) + to_double(alpha);
  return to_double(minus_coeff_over_CCA) * C * C_A * std::pow(r, -fall);
}

PropagatedEnvelopes propagate_envelopes(double C, double C_A, const Rational& eps,
                                        const Rational& alpha, double r1,
                                        double C1) {
  if (eps + alpha <= Rational(0))
    throw std::invalid_argument("propagate_envelopes: eps + alpha must be > 0");
  if (!(C >= 0.0) || !(C_A >= 0.0))
    throw std::invalid_argument("propagate_envelopes: C, C_A must be >= 0");

  PropagatedEnvelopes out;
  out.C = C;
  out.C_A = C_A;
  out.C1 = C1;
  out.r1 = r1;
  out.eps = eps;
  out.alpha = alpha;
  out.minus_coeff_over_CCA = Rational(2) / (eps + alpha);
  const Rational gap = Rational(4) - eps - alpha;
  if (gap == Rational(0)) {
    out.plus_resonant = true;
    out.plus_coeff_over_CCA = Rational(4);
  } else {
    out.plus_coeff_over_CCA = Rational(4) / gap;
  }
  return out;
}

}  // namespace zmlab
