// zmlab: batch laboratory for magnetic zero-mode diagnostics.
//
// Subcommands: field, gauge, quotient, verify, decay, bootstrap.
// Exit codes: 0 success, 1 hypothesis/validation failure, 2 usage/config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "zmlab/bootstrap.hpp"
#include "zmlab/eigensolver.hpp"
#include "zmlab/field_zoo.hpp"
#include "zmlab/forms.hpp"
#include "zmlab/gauge.hpp"
#include "zmlab/io.hpp"
#include "zmlab/radial_ode.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace zmlab;

namespace {

struct CommonOpts {
  std::string field_spec = "loss-yau-derived";
  std::string output = "out";
  int threads = 1;
};

FieldBundle resolve_field(const std::string& spec) {
  for (const auto& label : builtin_field_labels())
    if (spec == label) return field_bundle(label);
  const fs::path path(spec);
  if (!fs::exists(path))
    throw CLI::ValidationError("--field", "no builtin or file named '" + spec + "'");
  std::ifstream in(path);
  nlohmann::json doc;
  in >> doc;
  return field_bundle_from_json(doc);
}

fs::path output_dir(const CommonOpts& opts) {
  fs::path dir = opts.output;
  if (const char* env = std::getenv("ZMLAB_OUTPUT_DIR")) dir = env;
  fs::create_directories(dir);
  return dir;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_field = true) {
  if (with_field)
    cmd->add_option("--field", opts.field_spec,
                    "builtin field label or JSON field file");
  cmd->add_option("--output", opts.output,
                  "artifact directory (env ZMLAB_OUTPUT_DIR overrides)");
  cmd->add_option("--threads", opts.threads, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);
}

int run_field(const CommonOpts& opts, double p) {
  FieldBundle bundle = resolve_field(opts.field_spec);
  const MagneticField& B = bundle.field;

  ordered_json config{{"command", "field"},
                      {"field", opts.field_spec},
                      {"p", p},
                      {"threads", opts.threads}};
  const fs::path dir = output_dir(opts);

  ordered_json payload;
  payload["field_label"] = B.label;
  bool ok = true;

  try {
    const LpNormResult norm = lp_norm(B, p);
    payload["lp_norm"] = {{"p", p},
                          {"value", norm.value},
                          {"integral", norm.integral},
                          {"error", norm.error},
                          {"tail", norm.tail},
                          {"r_max", norm.r_max}};
  } catch (const HypothesisError& e) {
    payload["lp_norm"] = {{"p", p}, {"hypothesis_failure", e.what()}};
    ok = false;
  }

  if (B.decay) {
    const double r_lo = std::max(B.decay->r0, 1.0);
    std::vector<double> radii;
    for (int k = 0; k < 8; ++k)
      radii.push_back(r_lo * 1.5 * std::pow(20.0 / 1.5, k / 7.0));
    const std::vector<Vec3> dirs = fibonacci_directions(16);
    const DecayReport rep = decay_report(B, radii, dirs);
    ok = ok && rep.pass;
    payload["decay_report"] = {{"pass", rep.pass},
                               {"C_B", rep.claimed.C_B},
                               {"beta", rep.claimed.beta},
                               {"r0", rep.claimed.r0}};
    io::CsvWriter csv(dir / "decay_report.csv", "zmlab.field.decay", config,
                      {"r", "max_ratio", "argmax_direction", "pass"});
    for (const auto& row : rep.rows)
      csv.row({io::CsvWriter::cell(row.r), io::CsvWriter::cell(row.max_ratio),
               std::to_string(row.argmax_direction), row.pass ? "1" : "0"});
  } else {
    payload["decay_report"] = {{"skipped", "no decay metadata"}};
  }

  io::write_json(dir / "field_report.json", io::artifact(config, payload));
  return ok ? 0 : 1;
}

int run_gauge(const CommonOpts& opts, int radii_count, int directions_count,
              double r_hi_factor) {
  FieldBundle bundle = resolve_field(opts.field_spec);
  const MagneticField& B = bundle.field;
  if (!B.decay) {
    std::cerr << "gauge: field has no decay metadata\n";
    return 2;
  }

  ordered_json config{{"command", "gauge"},        {"field", opts.field_spec},
                      {"radii_count", radii_count}, {"directions_count", directions_count},
                      {"r_hi_factor", r_hi_factor}, {"threads", opts.threads}};
  const fs::path dir = output_dir(opts);

  const LpNormResult norm32 = lp_norm(B, 1.5);
  const PotentialEnvelope env =
      potential_envelope(B.decay->C_B, B.decay->beta, B.decay->r0, norm32.value);

  std::vector<double> radii;
  for (int k = 0; k < radii_count; ++k)
    radii.push_back(env.r1 *
                    std::pow(r_hi_factor, k / std::max(1.0, radii_count - 1.0)));
  const std::vector<Vec3> dirs = fibonacci_directions(directions_count);

  const std::vector<EnvelopeSample> samples =
      envelope_samples(B, env, radii, dirs);

  bool ok = true;
  {
    io::CsvWriter csv(dir / "gauge_envelope.csv", "zmlab.gauge.envelope", config,
                      {"r", "direction_index", "A_mag", "envelope", "pass"});
    for (const auto& s : samples) {
      ok = ok && s.pass;
      csv.row({io::CsvWriter::cell(s.r), std::to_string(s.direction_index),
               io::CsvWriter::cell(s.A_mag), io::CsvWriter::cell(s.envelope),
               s.pass ? "1" : "0"});
    }
  }

  // decay fit over [r1, 8 r1] using the per-radius max of |A|
  std::vector<std::pair<double, double>> fit_samples;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] > 8.0 * env.r1 * (1.0 + 1e-12)) continue;
    double a_max = 0.0;
    for (int d = 0; d < directions_count; ++d)
      a_max = std::max(a_max,
                       samples[k * directions_count + d].A_mag);
    if (a_max > 0.0) fit_samples.emplace_back(radii[k], a_max);
  }
  ordered_json payload;
  payload["field_label"] = B.label;
  payload["norm_B_3_2"] = norm32.value;
  payload["envelope"] = {{"r1", env.r1},   {"alpha", env.alpha}, {"C1", env.C1},
                         {"C2", env.C2},   {"C_B", env.C_B},     {"beta", env.beta},
                         {"pass", ok}};
  if (fit_samples.size() >= 3) {
    const PowerLawFit fit = fit_decay_exponent(fit_samples);
    payload["decay_fit"] = {{"exponent", fit.exponent},
                            {"constant", fit.constant},
                            {"residual", fit.residual}};
  }

  // curl consistency at a few probes, when a closed-form potential is known
  if (bundle.potential) {
    ordered_json rows = ordered_json::array();
    for (const Vec3& d : fibonacci_directions(5)) {
      const Vec3 x = 1.3 * d;
      rows.push_back({{"x", {x.x(), x.y(), x.z()}},
                      {"residual", curl_residual(*bundle.potential, B, x, 1e-3)}});
    }
    payload["curl_residuals"] = rows;
  }

  io::write_json(dir / "gauge_report.json", io::artifact(config, payload));
  return ok ? 0 : 1;
}

int run_quotient(const CommonOpts& opts, const GridSpec& grid, double tol,
                 int max_iter, const std::string& dump_path) {
  FieldBundle bundle = resolve_field(opts.field_spec);
  if (!bundle.potential) {
    std::cerr << "quotient: field '" << bundle.field.label
              << "' has no closed-form potential\n";
    return 2;
  }

  ordered_json config{{"command", "quotient"}, {"field", opts.field_spec},
                      {"h", grid.h},           {"L", grid.L},
                      {"tol", tol},            {"max_iter", max_iter},
                      {"threads", opts.threads}};
  const fs::path dir = output_dir(opts);

  EigenOptions eopts;
  eopts.tol = tol;
  eopts.max_iter = max_iter;
  eopts.threads = opts.threads;

  RayleighResult result;
  try {
    result = minimize_quotient_multilevel(*bundle.potential, bundle.field, grid, eopts);
  } catch (const std::runtime_error& e) {
    std::cerr << "quotient: " << e.what() << "\n";
    return 1;
  }
  if (result.box_warning)
    std::cerr << "quotient: warning: an estimated " << result.weight_tail_fraction
              << " fraction of the |B| mass lies outside the box\n";

  ordered_json payload;
  payload["lambda_min"] = result.lambda_min;
  payload["delta_surrogate"] = result.delta_surrogate;
  payload["grid"] = {{"h", result.grid.h}, {"L", result.grid.L}, {"n", result.n}};
  payload["iterations"] = result.iterations;
  payload["residual"] = result.residual_history.empty()
                            ? 0.0
                            : result.residual_history.back();
  payload["field_label"] = result.field_label;
  payload["converged"] = result.converged;
  payload["weight_tail_fraction"] = result.weight_tail_fraction;
  io::write_json(dir / "quotient_result.json", io::artifact(config, payload));

  if (!dump_path.empty()) {
    // self-describing binary: magic, version, n, h, L, dtype, layout, data
    std::ofstream bin(dir / dump_path, std::ios::binary);
    bin.write("ZMSP", 4);
    const std::uint32_t version = 1, n = result.n, dtype = 1, layout = 0;
    const double h = result.grid.h, L = result.grid.L;
    bin.write(reinterpret_cast<const char*>(&version), 4);
    bin.write(reinterpret_cast<const char*>(&n), 4);
    bin.write(reinterpret_cast<const char*>(&dtype), 4);
    bin.write(reinterpret_cast<const char*>(&layout), 4);
    bin.write(reinterpret_cast<const char*>(&h), 8);
    bin.write(reinterpret_cast<const char*>(&L), 8);
    bin.write(reinterpret_cast<const char*>(result.minimizer.data()),
              static_cast<std::streamsize>(sizeof(cplx) * result.minimizer.size()));
  }
  return result.converged ? 0 : 1;
}

int run_verify(const CommonOpts& opts, const GridSpec& grid, int fd_order,
               double max_residual) {
  FieldBundle bundle = resolve_field(opts.field_spec);
  if (!bundle.triple) {
    std::cerr << "verify: field '" << opts.field_spec
              << "' does not carry a derived spinor\n";
    return 2;
  }

  ordered_json config{{"command", "verify"}, {"field", opts.field_spec},
                      {"h", grid.h},         {"L", grid.L},
                      {"fd_order", fd_order}, {"max_residual", max_residual},
                      {"threads", opts.threads}};
  const fs::path dir = output_dir(opts);

  const double residual = zero_mode_residual(bundle.triple->potential,
                                             bundle.triple->spinor, grid, fd_order);
  ordered_json payload;
  payload["field_label"] = bundle.field.label;
  payload["residual"] = residual;
  payload["grid"] = {{"h", grid.h}, {"L", grid.L}};
  if (max_residual > 0.0) payload["max_residual"] = max_residual;
  io::write_json(dir / "verify_report.json", io::artifact(config, payload));
  return (max_residual > 0.0 && residual > max_residual) ? 1 : 0;
}

int run_decay(const CommonOpts& opts, int kappa_max, double r_start, double r_end,
              int sample_count, const std::string& p_text) {
  FieldBundle bundle = resolve_field(opts.field_spec);
  if (!bundle.triple) {
    std::cerr << "decay: field '" << opts.field_spec
              << "' does not carry a derived spinor\n";
    return 2;
  }
  const ZeroModeTriple& triple = *bundle.triple;

  ordered_json config{{"command", "decay"},   {"field", opts.field_spec},
                      {"kappa_max", kappa_max}, {"r_start", r_start},
                      {"r_end", r_end},       {"samples", sample_count},
                      {"p", p_text},          {"threads", opts.threads}};
  const fs::path dir = output_dir(opts);

  std::vector<double> radii;
  for (int k = 0; k < sample_count; ++k)
    radii.push_back(r_start +
                    (r_end - r_start) * k / std::max(1, sample_count - 1));

  const SphereQuadrature quad =
      SphereQuadrature::gauss(2 * kappa_max + 4, 2 * (2 * kappa_max + 4));

  // integrate the channel system from the projected initial data
  const std::vector<double> start_radius{radii.front()};
  RadialChannelTable init =
      partial_wave_project(triple.spinor, kappa_max, start_radius, quad);
  RadialSolution sol = integrate_radial_system(
      triple.potential, kappa_max, radii, init.amplitudes.row(0).transpose());

  // envelope seeded at r_start: ||g_pm||^2 <= C r^{-eps}, eps = 3/p
  const Rational p = parse_rational(p_text);
  const Rational eps = Rational(3) / p;
  double alpha = 0.5;
  double C_A = 1.0;
  if (triple.potential.decay) {
    alpha = triple.potential.decay->alpha;
    C_A = triple.potential.decay->C_A;
  }
  const double n2_start = std::max(std::pow(sol.norm_plus.front(), 2),
                                   std::pow(sol.norm_minus.front(), 2));
  const double C = n2_start * std::pow(r_start, to_double(eps));
  const double C1 = std::pow(sol.norm_plus.front() * r_start * r_start, 2);
  const PropagatedEnvelopes env = propagate_envelopes(
      C, C_A, eps, parse_rational(std::to_string(alpha)), r_start, C1);

  {
    io::CsvWriter csv(dir / "decay_profile.csv", "zmlab.decay.profile", config,
                      {"r", "norm_plus", "norm_minus", "envelope_plus",
                       "envelope_minus"});
    for (std::size_t i = 0; i < sol.radii.size(); ++i) {
      const double r = sol.radii[i];
      csv.row({io::CsvWriter::cell(r), io::CsvWriter::cell(sol.norm_plus[i]),
               io::CsvWriter::cell(sol.norm_minus[i]),
               io::CsvWriter::cell(std::sqrt(env.plus_bound(r)) / (r * r)),
               io::CsvWriter::cell(std::sqrt(env.minus_bound(r)))});
    }
  }

  SphereNormDecay fits = fit_sphere_norm_decay(triple.spinor, radii, kappa_max, quad);
  ordered_json payload;
  payload["field_label"] = bundle.field.label;
  payload["fit_plus"] = {{"exponent", fits.plus.exponent},
                         {"constant", fits.plus.constant},
                         {"residual", fits.plus.residual},
                         {"superpolynomial", fits.plus_superpolynomial}};
  payload["fit_minus"] = {{"exponent", fits.minus.exponent},
                          {"constant", fits.minus.constant},
                          {"residual", fits.minus.residual},
                          {"superpolynomial", fits.minus_superpolynomial}};

  {
    io::CsvWriter csv(dir / "channels.csv", "zmlab.decay.channels", config,
                      {"r", "kappa", "m", "re", "im", "amplitude"});
    for (std::size_t i = 0; i < fits.table.radii.size(); ++i)
      for (std::size_t c = 0; c < fits.table.channels.size(); ++c) {
        const cplx a = fits.table.amplitudes(i, c);
        csv.row({io::CsvWriter::cell(fits.table.radii[i]),
                 std::to_string(fits.table.channels[c].kappa),
                 io::CsvWriter::cell(fits.table.channels[c].m()),
                 io::CsvWriter::cell(a.real()), io::CsvWriter::cell(a.imag()),
                 io::CsvWriter::cell(std::abs(a))});
      }
  }

  io::write_json(dir / "decay_report.json", io::artifact(config, payload));
  return 0;
}

int run_bootstrap(const CommonOpts& opts, const std::string& p_text,
                  const std::string& alpha_text) {
  Rational p, alpha;
  try {
    p = parse_rational(p_text);
    alpha = parse_rational(alpha_text);
  } catch (const std::exception& e) {
    std::cerr << "bootstrap: " << e.what() << "\n";
    return 2;
  }

  ordered_json config{
      {"command", "bootstrap"}, {"p", p_text}, {"alpha", alpha_text}};
  const fs::path dir = output_dir(opts);

  BootstrapRun run;
  try {
    run = bootstrap_exponents(p, alpha);
  } catch (const std::invalid_argument& e) {
    std::cerr << "bootstrap: " << e.what() << "\n";
    return 2;
  }

  io::CsvWriter csv(dir / "bootstrap.csv", "zmlab.bootstrap", config,
                    {"step", "eps_exact", "eps_decimal"});
  for (std::size_t k = 0; k < run.exponents.size(); ++k) {
    csv.row({std::to_string(k), to_string(run.exponents[k]),
             io::CsvWriter::cell(to_double(run.exponents[k]))});
    std::cout << k << "\t" << to_string(run.exponents[k]) << "\t"
              << to_double(run.exponents[k]) << "\n";
  }
  std::cout << "steps to reach 4: " << run.steps << "\n";

  ordered_json payload;
  payload["steps"] = run.steps;
  ordered_json seq = ordered_json::array();
  for (const auto& e : run.exponents) seq.push_back(to_string(e));
  payload["exponents"] = seq;
  io::write_json(dir / "bootstrap.json", io::artifact(config, payload));
  return 0;
}

// --config file.json: its entries are appended as flags, overriding the
// command line.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    const fs::path path = args[i + 1];
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config file not found: " + path.string());
    nlohmann::json doc;
    in >> doc;
    args.erase(args.begin() + i, args.begin() + i + 2);
    for (const auto& [key, value] : doc.items()) {
      args.push_back("--" + key);
      args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    break;
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magnetic zero-mode laboratory"};
  app.require_subcommand(1);

  CommonOpts opts;
  double lp_p = 1.5;
  auto* field_cmd = app.add_subcommand("field", "decay report and L^p norm");
  add_common(field_cmd, opts);
  field_cmd->add_option("--p", lp_p, "exponent for the L^p norm");

  int radii_count = 10, directions_count = 4;
  double r_hi_factor = 10.0;
  auto* gauge_cmd =
      app.add_subcommand("gauge", "Biot-Savart sampling against the decay bound");
  add_common(gauge_cmd, opts);
  gauge_cmd->add_option("--radii-count", radii_count);
  gauge_cmd->add_option("--directions", directions_count);
  gauge_cmd->add_option("--r-hi-factor", r_hi_factor);

  GridSpec grid;
  double tol = 1e-8;
  int max_iter = 4000;
  std::string dump_path;
  auto* quotient_cmd =
      app.add_subcommand("quotient", "minimize the weighted Rayleigh quotient");
  add_common(quotient_cmd, opts);
  quotient_cmd->add_option("--h", grid.h, "grid spacing");
  quotient_cmd->add_option("--L", grid.L, "box half-width");
  quotient_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);
  quotient_cmd->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
  quotient_cmd->add_option("--dump-minimizer", dump_path,
                           "binary minimizer dump file name");

  int fd_order = 4;
  double max_residual = 0.0;
  auto* verify_cmd =
      app.add_subcommand("verify", "zero-mode residual of a derived triple");
  add_common(verify_cmd, opts);
  verify_cmd->add_option("--h", grid.h, "grid spacing");
  verify_cmd->add_option("--L", grid.L, "box half-width");
  verify_cmd->add_option("--fd-order", fd_order)->check(CLI::IsMember({2, 4}));
  verify_cmd->add_option("--max-residual", max_residual,
                         "fail (exit 1) above this residual");

  int kappa_max = 4, sample_count = 25;
  double r_start = 2.0, r_end = 20.0;
  std::string p_text = "6", alpha_text = "0.5";
  auto* decay_cmd =
      app.add_subcommand("decay", "radial channel integration and decay fits");
  add_common(decay_cmd, opts);
  decay_cmd->add_option("--kappa-max", kappa_max)->check(CLI::PositiveNumber);
  decay_cmd->add_option("--r-start", r_start)->check(CLI::PositiveNumber);
  decay_cmd->add_option("--r-end", r_end)->check(CLI::PositiveNumber);
  decay_cmd->add_option("--samples", sample_count)->check(CLI::PositiveNumber);
  decay_cmd->add_option("--p", p_text, "L^p membership exponent (rational)");

  auto* bootstrap_cmd =
      app.add_subcommand("bootstrap", "exact exponent iteration table");
  add_common(bootstrap_cmd, opts, /*with_field=*/false);
  bootstrap_cmd->add_option("--p", p_text, "rational p >= 2");
  bootstrap_cmd->add_option("--alpha", alpha_text, "rational alpha > 0");

  try {
    const std::vector<std::string> args = expand_config(argc, argv);
    std::vector<const char*> cargs{argv[0]};
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (field_cmd->parsed()) return run_field(opts, lp_p);
    if (gauge_cmd->parsed())
      return run_gauge(opts, radii_count, directions_count, r_hi_factor);
    if (quotient_cmd->parsed())
      return run_quotient(opts, grid, tol, max_iter, dump_path);
    if (verify_cmd->parsed()) return run_verify(opts, grid, fd_order, max_residual);
    if (decay_cmd->parsed())
      return run_decay(opts, kappa_max, r_start, r_end, sample_count, p_text);
    if (bootstrap_cmd->parsed()) return run_bootstrap(opts, p_text, alpha_text);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
