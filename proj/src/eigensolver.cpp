#include "zmlab/eigensolver.hpp"

#include <cmath>

#include "zmlab/field_zoo.hpp"

namespace zmlab {

double delta_surrogate(double lambda_min) {
  if (!(lambda_min >= 0.0))
    throw std::invalid_argument("delta_surrogate: lambda_min must be >= 0");
  return lambda_min / (1.0 + lambda_min);
}

namespace {

// The pencil (P, W) on supp W. With full support P is just D*D; otherwise the
// complement components are eliminated by an inner CG solve with P_ff.
class QuotientOperator {
 public:
  QuotientOperator(const FormPair& forms, const EigenOptions& opts)
      : forms_(forms), opts_(opts) {
    const std::size_t ns = forms.grid().num_sites();
    support_.resize(ns);
    std::size_t count = 0;
    for (std::size_t s = 0; s < ns; ++s) {
      support_[s] = forms.weight[s] > opts.support_threshold;
      count += support_[s];
    }
    if (count == 0)
      throw HypothesisError("minimize_quotient: weight vanishes on the grid");
    full_support_ = count == ns;
    diag_ = forms.D.quadratic_diagonal();
    scratch_a_.resize(2 * ns);
    scratch_b_.resize(2 * ns);
  }

  bool full_support() const { return full_support_; }
  std::size_t size() const { return 2 * forms_.grid().num_sites(); }

  // y = P x restricted to the support (x must vanish off-support unless the
  // support is full); the off-support part of x is overwritten with the
  // harmonic extension when restriction is active.
  void apply(Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    if (full_support_) {
      forms_.D.apply(x, scratch_a_, opts_.threads);
      forms_.D.apply(scratch_a_, y, opts_.threads);
      return;
    }
    // inner solve: P_ff u = -(P x)|_f
    forms_.D.apply(x, scratch_a_, opts_.threads);
    forms_.D.apply(scratch_a_, scratch_b_, opts_.threads);
    Eigen::VectorXcd rhs = -mask(scratch_b_, false);
    Eigen::VectorXcd u = cg_ff(rhs);
    x += u;  // harmonic extension stored back into x
    forms_.D.apply(x, scratch_a_, opts_.threads);
    forms_.D.apply(scratch_a_, y, opts_.threads);
    zero_off_support(y);
  }

  void zero_off_support(Eigen::VectorXcd& v) const {
    if (full_support_) return;
    for (std::size_t s = 0; s < support_.size(); ++s)
      if (!support_[s]) v(2 * s) = v(2 * s + 1) = 0.0;
  }

  Eigen::VectorXcd mask(const Eigen::VectorXcd& v, bool on_support) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (std::size_t s = 0; s < support_.size(); ++s)
      if (support_[s] == on_support) {
        out(2 * s) = v(2 * s);
        out(2 * s + 1) = v(2 * s + 1);
      }
    return out;
  }

  void precondition(const Eigen::VectorXcd& r, Eigen::VectorXcd& z) const {
    z.resize(r.size());
    for (std::size_t s = 0; s < diag_.size(); ++s) {
      z(2 * s) = r(2 * s) / diag_[s];
      z(2 * s + 1) = r(2 * s + 1) / diag_[s];
    }
    zero_off_support(z);
  }

  double w_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const {
    cplx acc = 0.0;
    for (std::size_t s = 0; s < forms_.weight.size(); ++s)
      acc += forms_.weight[s] * (std::conj(a(2 * s)) * b(2 * s) +
                                 std::conj(a(2 * s + 1)) * b(2 * s + 1));
    const double h = forms_.grid().h;
    return (h * h * h * acc).real();
  }

  void w_apply(const Eigen::VectorXcd& a, Eigen::VectorXcd& out) const {
    out.resize(a.size());
    const double h3 = std::pow(forms_.grid().h, 3);
    for (std::size_t s = 0; s < forms_.weight.size(); ++s) {
      out(2 * s) = h3 * forms_.weight[s] * a(2 * s);
      out(2 * s + 1) = h3 * forms_.weight[s] * a(2 * s + 1);
    }
  }

  double h3() const { return std::pow(forms_.grid().h, 3); }

 private:
  // CG on the off-support block of P with Jacobi preconditioning.
  Eigen::VectorXcd cg_ff(const Eigen::VectorXcd& rhs) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(rhs.size());
    Eigen::VectorXcd r = rhs;
    Eigen::VectorXcd z(rhs.size()), p(rhs.size()), ap(rhs.size());
    jacobi_f(r, z);
    p = z;
    cplx rz = r.dot(z);
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) return x;
    for (int it = 0; it < opts_.inner_cg_max_iter; ++it) {
      apply_ff(p, ap);
      const cplx pap = p.dot(ap);
      if (std::abs(pap) < 1e-300) break;
      const cplx alpha = rz / pap;
      x += alpha * p;
      r -= alpha * ap;
      if (r.norm() <= opts_.inner_cg_tol * rhs_norm) break;
      jacobi_f(r, z);
      const cplx rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    return x;
  }

  void apply_ff(const Eigen::VectorXcd& v, Eigen::VectorXcd& out) {
    forms_.D.apply(v, scratch_a_, opts_.threads);
    forms_.D.apply(scratch_a_, out, opts_.threads);
    for (std::size_t s = 0; s < support_.size(); ++s)
      if (support_[s]) out(2 * s) = out(2 * s + 1) = 0.0;
  }

  void jacobi_f(const Eigen::VectorXcd& r, Eigen::VectorXcd& z) const {
    for (std::size_t s = 0; s < diag_.size(); ++s) {
      const double d = support_[s] ? 1.0 : diag_[s];
      z(2 * s) = support_[s] ? 0.0 : r(2 * s) / d;
      z(2 * s + 1) = support_[s] ? 0.0 : r(2 * s + 1) / d;
    }
  }

  const FormPair& forms_;
  EigenOptions opts_;
  std::vector<char> support_;
  bool full_support_ = false;
  std::vector<double> diag_;
  Eigen::VectorXcd scratch_a_, scratch_b_;
};

Eigen::VectorXcd default_seed(const CartesianGrid& g) {
  Eigen::VectorXcd x(g.num_values());
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) {
        const Vec3 p = g.point(ix, iy, iz);
        const std::size_t v = 2 * g.site(ix, iy, iz);
        x(v) = std::exp(-0.5 * p.squaredNorm());
        x(v + 1) = 0.0;
      }
  return x;
}

}  // namespace

RayleighResult minimize_quotient(const FormPair& forms, const EigenOptions& opts,
                                 const Eigen::VectorXcd* initial) {
  QuotientOperator op(forms, opts);
  const std::size_t N = op.size();

  Eigen::VectorXcd x = initial ? *initial : default_seed(forms.grid());
  if (x.size() != static_cast<Eigen::Index>(N))
    throw std::invalid_argument("minimize_quotient: initial guess size mismatch");
  op.zero_off_support(x);
  {
    const double wn = op.w_inner(x, x);
    if (!(wn > 0.0)) throw HypothesisError("minimize_quotient: seed has zero weight norm");
    x /= std::sqrt(wn);
  }

  const double h3 = op.h3();
  Eigen::VectorXcd px(N), wx(N), r(N), z(N), p;
  op.apply(x, px);
  double lambda = h3 * x.dot(px).real();

  RayleighResult result;
  result.grid = GridSpec{forms.grid().h, forms.grid().L};
  result.n = forms.grid().n;
  result.field_label = forms.field_label;
  result.box_warning = forms.box_warning;
  result.weight_tail_fraction = forms.weight_tail_fraction;

  int it = 0;
  for (; it < opts.max_iter; ++it) {
    op.w_apply(x, wx);
    r = h3 * px - lambda * wx;
    const double denom = h3 * px.norm() + std::abs(lambda) * wx.norm();
    const double res = denom > 0.0 ? r.norm() / denom : 0.0;
    result.residual_history.push_back(res);
    if (res < opts.tol) {
      result.converged = true;
      break;
    }

    op.precondition(r, z);

    // Rayleigh-Ritz over span{x, z, p} in the W metric
    std::vector<Eigen::VectorXcd> basis;
    basis.push_back(x);
    basis.push_back(std::move(z));
    if (p.size() == static_cast<Eigen::Index>(N)) basis.push_back(p);

    std::vector<Eigen::VectorXcd> V;
    for (auto& b : basis) {
      Eigen::VectorXcd v = b;
      for (const auto& q : V) v -= op.w_inner(q, v) * q;
      for (const auto& q : V) v -= op.w_inner(q, v) * q;  // re-orthogonalize
      const double nn = op.w_inner(v, v);
      if (nn > 1e-24) V.push_back(v / std::sqrt(nn));
    }
    const int k = static_cast<int>(V.size());
    if (k < 2) break;  // basis collapsed; x is (numerically) converged

    std::vector<Eigen::VectorXcd> PV(k);
    Eigen::MatrixXcd G(k, k);
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXcd vi = V[i];
      PV[i].resize(N);
      op.apply(vi, PV[i]);
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) G(i, j) = h3 * V[i].dot(PV[j]);
    G = 0.5 * (G + G.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    const Eigen::VectorXcd c = es.eigenvectors().col(0);
    lambda = es.eigenvalues()(0);

    Eigen::VectorXcd x_new = Eigen::VectorXcd::Zero(N);
    Eigen::VectorXcd px_new = Eigen::VectorXcd::Zero(N);
    for (int i = 0; i < k; ++i) {
      x_new += c(i) * V[i];
      px_new += c(i) * PV[i];
    }
    // implicit p: the component of the update orthogonal to the previous x
    p = x_new - op.w_inner(x, x_new) * x;
    x = std::move(x_new);
    px = std::move(px_new);
    const double wn = op.w_inner(x, x);
    x /= std::sqrt(wn);
    px /= std::sqrt(wn);
  }

  result.iterations = it;
  if (!result.converged && !result.residual_history.empty() &&
      result.residual_history.back() > 100.0 * opts.tol &&
      result.residual_history.back() > 1e-4)
    throw std::runtime_error("minimize_quotient: no convergence after " +
                             std::to_string(it) + " iterations (residual " +
                             std::to_string(result.residual_history.back()) + ")");

  result.lambda_min = std::max(0.0, lambda);
  result.delta_surrogate = delta_surrogate(result.lambda_min);
  result.minimizer = std::move(x);
  return result;
}

RayleighResult minimize_quotient_multilevel(const GaugePotential& A,
                                            const MagneticField& B,
                                            const GridSpec& spec,
                                            const EigenOptions& opts) {
  const CartesianGrid fine = CartesianGrid::make(spec);
  FormPair forms = assemble_forms(A, B, spec);
  if (opts.nested_initial_guess && fine.n >= opts.min_nested_n &&
      fine.n % 2 == 0) {
    GridSpec coarse_spec{2.0 * spec.L / (fine.n / 2), spec.L};
    EigenOptions coarse_opts = opts;
    coarse_opts.tol = std::max(opts.tol, 1e-8);
    RayleighResult coarse =
        minimize_quotient_multilevel(A, B, coarse_spec, coarse_opts);
    const Eigen::VectorXcd guess =
        prolong(coarse.minimizer, CartesianGrid::make(coarse.grid), fine);
    return minimize_quotient(forms, opts, &guess);
  }
  return minimize_quotient(forms, opts);
}

double dense_lambda_min(const FormPair& forms, double support_threshold,
                        std::size_t max_values) {
  const std::size_t N = forms.grid().num_values();
  if (N > max_values)
    throw std::invalid_argument("dense_lambda_min: instance too large");

  Eigen::MatrixXcd P(N, N);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(N), col(N), tmp(N);
  for (std::size_t j = 0; j < N; ++j) {
    e(j) = 1.0;
    forms.D.apply(e, tmp);
    forms.D.apply(tmp, col);
    P.col(j) = col;
    e(j) = 0.0;
  }
  const double h3 = std::pow(forms.grid().h, 3);
  P *= h3;

  std::vector<std::size_t> supp, comp;
  for (std::size_t s = 0; s < forms.weight.size(); ++s) {
    const bool on = forms.weight[s] > support_threshold;
    for (int c = 0; c < 2; ++c)
      (on ? supp : comp).push_back(2 * s + c);
  }
  if (supp.empty())
    throw HypothesisError("dense_lambda_min: weight vanishes on the grid");

  Eigen::MatrixXcd Pss(supp.size(), supp.size());
  for (std::size_t i = 0; i < supp.size(); ++i)
    for (std::size_t j = 0; j < supp.size(); ++j) Pss(i, j) = P(supp[i], supp[j]);

  if (!comp.empty()) {
    Eigen::MatrixXcd Pff(comp.size(), comp.size()),
        Pfs(comp.size(), supp.size());
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (std::size_t j = 0; j < comp.size(); ++j) Pff(i, j) = P(comp[i], comp[j]);
      for (std::size_t j = 0; j < supp.size(); ++j) Pfs(i, j) = P(comp[i], supp[j]);
    }
    Pss -= Pfs.adjoint() * Pff.ldlt().solve(Pfs);
  }

  Eigen::VectorXd wsqrt(supp.size());
  for (std::size_t i = 0; i < supp.size(); ++i)
    wsqrt(i) = 1.0 / std::sqrt(h3 * forms.weight[supp[i] / 2]);
  Eigen::MatrixXcd M =
      wsqrt.asDiagonal() * Pss * wsqrt.asDiagonal();
  M = 0.5 * (M + M.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  return std::max(0.0, es.eigenvalues()(0));
}

}  // namespace zmlab
