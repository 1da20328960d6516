#pragma once

#include <functional>
#include <optional>
#include <string>

#include "zmlab/pauli.hpp"

namespace zmlab {

// Pointwise envelope |B(x)| <= C_B * |x|^(-2-beta) for |x| >= r0.
struct FieldDecay {
  double C_B = 0.0;
  double beta = 0.0;
  double r0 = 0.0;
};

// Divergence-free vector field model. All builtins are constructed as curls
// of explicit potentials, so div B = 0 holds exactly in the continuum.
struct MagneticField {
  std::string label;
  std::function<Vec3(const Vec3&)> eval;
  std::optional<FieldDecay> decay;
  // Azimuthal models have an undefined direction on the z-axis; samplers
  // that differentiate the field must stay away from it.
  bool axis_singular = false;

  Vec3 operator()(const Vec3& x) const { return eval(x); }
};

// Pointwise envelope |A(x)| <= C_A * |x|^(-1-alpha) for |x| >= r1.
struct PotentialDecay {
  double C_A = 0.0;
  double alpha = 0.0;
  double r1 = 0.0;
};

enum class GaugeTag { biot_savart, closed_form };

struct GaugePotential {
  std::string label;
  GaugeTag gauge = GaugeTag::closed_form;
  std::function<Vec3(const Vec3&)> eval;
  std::optional<PotentialDecay> decay;

  Vec3 operator()(const Vec3& x) const { return eval(x); }
};

using SpinorEvaluator = std::function<Spinor(const Vec3&)>;
// Gradient oracle: returns (d_x psi, d_y psi, d_z psi).
using SpinorGradient = std::function<std::array<Spinor, 3>(const Vec3&)>;

}  // namespace zmlab
