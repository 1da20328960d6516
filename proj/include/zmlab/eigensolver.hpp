#pragma once

#include "zmlab/forms.hpp"

namespace zmlab {

struct EigenOptions {
  double tol = 1e-8;          // relative eigen-residual target
  int max_iter = 4000;
  int threads = 1;
  double support_threshold = 0.0;  // weight > threshold defines supp W
  bool nested_initial_guess = true;
  int min_nested_n = 24;
  double inner_cg_tol = 1e-10;  // for the supp-W restriction solve
  int inner_cg_max_iter = 2000;
};

struct RayleighResult {
  double lambda_min = 0.0;
  double delta_surrogate = 0.0;
  Eigen::VectorXcd minimizer;  // full grid vector, (g, |B| g) = 1
  int iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  GridSpec grid;
  int n = 0;
  std::string field_label;
  bool box_warning = false;
  double weight_tail_fraction = 0.0;
};

// delta-hat = lambda/(1+lambda); 0 exactly at lambda = 0, increasing to 1.
double delta_surrogate(double lambda_min);

// Smallest lambda of D*D g = lambda W g restricted to supp W, by LOBPCG with
// a Jacobi preconditioner. Where W vanishes the complementary components are
// eliminated through an inner conjugate-gradient solve (Schur reduction), so
// the reported pair refers to the quotient form on supp W.
// Throws HypothesisError when W is identically zero on the grid.
RayleighResult minimize_quotient(const FormPair& forms, const EigenOptions& opts = {},
                                 const Eigen::VectorXcd* initial = nullptr);

// Assembles on a coarsened hierarchy and prolongs the coarse minimizer as the
// fine initial guess.
RayleighResult minimize_quotient_multilevel(const GaugePotential& A,
                                            const MagneticField& B,
                                            const GridSpec& spec,
                                            const EigenOptions& opts = {});

// Dense oracle for instances with at most max_values unknowns: assembles
// D*D as a dense matrix, applies the same supp-W Schur reduction directly,
// and solves the generalized symmetric eigenproblem.
double dense_lambda_min(const FormPair& forms, double support_threshold = 0.0,
                        std::size_t max_values = 8192);

}  // namespace zmlab
