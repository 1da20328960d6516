#pragma once

#include <optional>
#include <vector>

#include "zmlab/grid.hpp"

namespace zmlab {

// D = sigma.(-i grad_h - A) with centered differences and zero (Dirichlet-like)
// exterior values. Hermitian on the grid, so the kinetic form is ||D g||^2.
struct DiracOperator {
  CartesianGrid grid;
  std::vector<double> Ax, Ay, Az;
  // Test hook: replaces the Pauli triple (slow generic path); used to check
  // invariance under a consistent spin-basis change.
  std::optional<std::array<Mat2c, 3>> sigma_override;

  void apply(const cplx* in, cplx* out, int threads = 1) const;
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out,
             int threads = 1) const;
  // Jacobi diagonal of D*D: 3/(2h^2) + |A(x)|^2 per site.
  std::vector<double> quadratic_diagonal() const;
};

struct FormPair {
  DiracOperator D;
  std::vector<double> weight;  // |B| per site
  std::string field_label;
  double weight_tail_fraction = 0.0;  // estimated |B| mass outside the box
  bool box_warning = false;

  const CartesianGrid& grid() const { return D.grid; }
  // (g, D*D g) h^3 and (g, |B| g) h^3
  double p_form(const Eigen::VectorXcd& g, int threads = 1) const;
  double b_form(const Eigen::VectorXcd& g) const;
};

FormPair assemble_forms(const GaugePotential& A, const MagneticField& B,
                        const GridSpec& spec, double tail_warn_fraction = 0.05);
FormPair assemble_forms(const std::function<Vec3(const Vec3&)>& A,
                        const std::function<double(const Vec3&)>& weight,
                        const GridSpec& spec);

// || D psi || / || psi || over the grid. The evaluator path samples psi on a
// ghost-padded lattice (exterior values are exact, not zero) and defaults to
// fourth-order centered differences; fd_order 2 selects the plain stencil.
double zero_mode_residual(const GaugePotential& A, const SpinorEvaluator& psi,
                          const GridSpec& spec, int fd_order = 4);
// Grid-sampled variant: zero exterior values, second-order stencil.
double zero_mode_residual(const GaugePotential& A, const SpinorGrid& psi);

}  // namespace zmlab
