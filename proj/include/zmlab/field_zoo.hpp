#pragma once

#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zmlab/fields.hpp"
#include "zmlab/quadrature.hpp"

namespace zmlab {

// Integration controls for lp_norm.
struct LpNormSpec {
  int n_polar = 24;
  int n_azimuth = 48;
  double rel_tol = 1e-9;
  double r_max = 0.0;  // 0 = choose from decay metadata / probing
};

struct LpNormResult {
  double value = 0.0;        // (integral)^(1/p)
  double integral = 0.0;     // integral of |B|^p
  double error = 0.0;        // quadrature error + tail bound, on the integral
  double tail = 0.0;         // contribution bounded beyond r_max
  double r_max = 0.0;
};

// Raised when an integral's tail (at the origin or at infinity) is not
// summable, i.e. the field violates the integrability hypothesis.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ||B||_p via radial-shell quadrature with a power-law tail bound beyond
// the last shell.
LpNormResult lp_norm(const MagneticField& field, double p, const LpNormSpec& spec = {});

struct DecayReportRow {
  double r = 0.0;
  double max_ratio = 0.0;  // max over directions of |B(r w)| * r^(2+beta)
  int argmax_direction = 0;
  bool pass = false;
};

struct DecayReport {
  std::vector<DecayReportRow> rows;
  bool pass = false;
  FieldDecay claimed;
};

// Checks |B(x)| * |x|^(2+beta) <= C_B at the sampled radii/directions.
DecayReport decay_report(const MagneticField& field, std::span<const double> radii,
                         std::span<const Vec3> directions);

// A vector potential, its curl, and a spinor annihilated by sigma.(p - A),
// together with the unit reference spinor the construction was seeded with.
struct ZeroModeTriple {
  GaugePotential potential;
  MagneticField field;
  SpinorEvaluator spinor;
  SpinorGradient gradient;
  Spinor seed;
};

// Builds a triple from a smooth nowhere-vanishing spinor: the potential is
// pinned by A_j = Re< psi, sigma_j (sigma.p) psi > / |psi|^2 and the field is
// its curl (Richardson-extrapolated differences). The construction gives
// sigma.(p - A) psi = 0 whenever <psi, sigma.p psi> is real pointwise;
// callers get a residual check for free via zero_mode_residual.
// Throws if psi (nearly) vanishes at a probe point.
ZeroModeTriple derive_pair_from_spinor(SpinorEvaluator psi, SpinorGradient grad,
                                       const Spinor& seed);

// The classic nowhere-vanishing zero mode
//   psi(x) = (1+|x|^2)^(-3/2) (I + i sigma.x) seed,  |seed| = 1,
// with closed-form potential and field. eval routes use the exact formulas:
//   A(x) = 3 u^-2 [ (1-r^2) n + 2 (n.x) x + 2 n cross x ],  u = 1 + r^2,
//   B(x) = 12 u^-3 [ (1-r^2) n + 2 (n.x) x + 2 n cross x ],  n = <seed, sigma seed>,
// so |A| = 3/u and |B| = 12/u^2.
ZeroModeTriple loss_yau_triple(const Spinor& seed = Spinor(1.0, 0.0));

// Residual max over probe points of |sigma.(-i grad - A) psi| / |psi|.
double triple_residual(const ZeroModeTriple& triple, std::span<const Vec3> probes);

// Builtin registry ---------------------------------------------------------

// A field plus, when the model is derived from a spinor, the whole triple,
// and a closed-form Coulomb-gauge potential when one is known.
struct FieldBundle {
  MagneticField field;
  std::optional<ZeroModeTriple> triple;
  std::optional<GaugePotential> potential;
};

// Labels: "zero", "gaussian-swirl", "loss-yau-derived", "isotropic-swirl".
FieldBundle field_bundle(const std::string& label);
MagneticField builtin_field(const std::string& label);
MagneticField power_swirl_field(double C, double exponent,
                                std::optional<FieldDecay> decay = std::nullopt);
std::vector<std::string> builtin_field_labels();

// JSON document: {label, kind: "builtin"|"derived", params, decay:{C_B,beta,r0}}.
FieldBundle field_bundle_from_json(const nlohmann::json& doc);
MagneticField field_from_json(const nlohmann::json& doc);

// The gaussian-swirl test potential A_t(x) = e^{-|x|^2} (-y, x, 0) and its
// exact curl; shared by the gauge round-trip checks.
Vec3 gaussian_swirl_potential(const Vec3& x);
Vec3 gaussian_swirl_curl(const Vec3& x);

}  // namespace zmlab
