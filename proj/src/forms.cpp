#include "zmlab/forms.hpp"

#include <cmath>
#include <numbers>
#include <thread>

namespace zmlab {

namespace {

// D on one x-slab [x_begin, x_end). Zero exterior values.
void apply_slab(const DiracOperator& op, const cplx* in, cplx* out, int x_begin,
                int x_end) {
  const int n = op.grid.n;
  const std::size_t sy = static_cast<std::size_t>(n);        // site stride in y
  const std::size_t sx = static_cast<std::size_t>(n) * n;    // site stride in x
  const double inv2h = 1.0 / (2.0 * op.grid.h);
  const cplx zero{0.0, 0.0};

  for (int ix = x_begin; ix < x_end; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      std::size_t site = (static_cast<std::size_t>(ix) * n + iy) * n;
      for (int iz = 0; iz < n; ++iz, ++site) {
        const std::size_t v = 2 * site;
        auto nb = [&](std::size_t stride, bool ok_up, bool ok_dn, cplx& du,
                      cplx& dd) {
          const cplx up0 = ok_up ? in[v + 2 * stride] : zero;
          const cplx up1 = ok_up ? in[v + 2 * stride + 1] : zero;
          const cplx dn0 = ok_dn ? in[v - 2 * stride] : zero;
          const cplx dn1 = ok_dn ? in[v - 2 * stride + 1] : zero;
          du = (up0 - dn0) * inv2h;
          dd = (up1 - dn1) * inv2h;
        };
        cplx gxu, gxd, gyu, gyd, gzu, gzd;
        nb(sx, ix + 1 < n, ix > 0, gxu, gxd);
        nb(sy, iy + 1 < n, iy > 0, gyu, gyd);
        nb(1, iz + 1 < n, iz > 0, gzu, gzd);

        const cplx in_u = in[v], in_d = in[v + 1];
        // sigma.grad: up picks (gx_d - i gy_d + gz_u), dn (gx_u + i gy_u - gz_d)
        const cplx sg_u = gxd - I * gyd + gzu;
        const cplx sg_d = gxu + I * gyu - gzd;
        const double ax = op.Ax[site], ay = op.Ay[site], az = op.Az[site];
        out[v] = -I * sg_u - (az * in_u + cplx(ax, -ay) * in_d);
        out[v + 1] = -I * sg_d - (cplx(ax, ay) * in_u - az * in_d);
      }
    }
  }
}

// generic-sigma variant, only used when sigma_override is set (tests)
void apply_slab_generic(const DiracOperator& op, const cplx* in, cplx* out,
                        int x_begin, int x_end) {
  const auto& sig = *op.sigma_override;
  const int n = op.grid.n;
  const std::size_t strides[3] = {static_cast<std::size_t>(n) * n,
                                  static_cast<std::size_t>(n), 1};
  const double inv2h = 1.0 / (2.0 * op.grid.h);

  for (int ix = x_begin; ix < x_end; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const int idx[3] = {ix, iy, iz};
        const std::size_t site = op.grid.site(ix, iy, iz);
        const std::size_t v = 2 * site;
        const Spinor s_in(in[v], in[v + 1]);
        Spinor acc = Spinor::Zero();
        const double a[3] = {op.Ax[site], op.Ay[site], op.Az[site]};
        for (int axis = 0; axis < 3; ++axis) {
          Spinor diff = Spinor::Zero();
          if (idx[axis] + 1 < n) {
            const std::size_t u = v + 2 * strides[axis];
            diff += Spinor(in[u], in[u + 1]);
          }
          if (idx[axis] > 0) {
            const std::size_t d = v - 2 * strides[axis];
            diff -= Spinor(in[d], in[d + 1]);
          }
          acc += sig[axis] * (-I * inv2h * diff - a[axis] * s_in);
        }
        out[v] = acc(0);
        out[v + 1] = acc(1);
      }
}

}  // namespace

void DiracOperator::apply(const cplx* in, cplx* out, int threads) const {
  const int n = grid.n;
  auto run = sigma_override ? apply_slab_generic : apply_slab;
  if (threads <= 1 || n < 2 * threads) {
    run(*this, in, out, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int b = t * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, b, e] { run(*this, in, out, b, e); });
  }
  for (auto& th : pool) th.join();
}

void DiracOperator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out,
                          int threads) const {
  out.resize(in.size());
  apply(in.data(), out.data(), threads);
}

std::vector<double> DiracOperator::quadratic_diagonal() const {
  std::vector<double> diag(grid.num_sites());
  const double kin = 1.5 / (grid.h * grid.h);
  for (std::size_t s = 0; s < diag.size(); ++s) {
    const double a2 = Ax[s] * Ax[s] + Ay[s] * Ay[s] + Az[s] * Az[s];
    diag[s] = kin + a2;
  }
  return diag;
}

double FormPair::p_form(const Eigen::VectorXcd& g, int threads) const {
  Eigen::VectorXcd dg(g.size());
  D.apply(g, dg, threads);
  const double h = grid().h;
  return h * h * h * dg.squaredNorm();
}

double FormPair::b_form(const Eigen::VectorXcd& g) const {
  double acc = 0.0;
  for (std::size_t s = 0; s < weight.size(); ++s)
    acc += weight[s] * (std::norm(g(2 * s)) + std::norm(g(2 * s + 1)));
  const double h = grid().h;
  return h * h * h * acc;
}

FormPair assemble_forms(const std::function<Vec3(const Vec3&)>& A,
                        const std::function<double(const Vec3&)>& weight,
                        const GridSpec& spec) {
  FormPair fp;
  fp.D.grid = CartesianGrid::make(spec);
  const CartesianGrid& g = fp.D.grid;
  const std::size_t ns = g.num_sites();
  fp.D.Ax.resize(ns);
  fp.D.Ay.resize(ns);
  fp.D.Az.resize(ns);
  fp.weight.resize(ns);
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) {
        const std::size_t s = g.site(ix, iy, iz);
        const Vec3 x = g.point(ix, iy, iz);
        const Vec3 a = A(x);
        fp.D.Ax[s] = a.x();
        fp.D.Ay[s] = a.y();
        fp.D.Az[s] = a.z();
        fp.weight[s] = weight(x);
      }
  return fp;
}

FormPair assemble_forms(const GaugePotential& A, const MagneticField& B,
                        const GridSpec& spec, double tail_warn_fraction) {
  FormPair fp = assemble_forms(
      A.eval, [&B](const Vec3& x) { return B(x).norm(); }, spec);
  fp.field_label = B.label;

  // estimate the |B| mass the box truncates away
  if (B.decay) {
    const FieldDecay& d = *B.decay;
    double tail = std::numeric_limits<double>::infinity();
    const double L = fp.grid().L;
    if (d.beta > 1.0 && L >= d.r0)
      tail = 4.0 * std::numbers::pi * d.C_B * std::pow(L, 1.0 - d.beta) /
             (d.beta - 1.0);
    double interior = 0.0;
    const double h3 = std::pow(fp.grid().h, 3);
    for (double w : fp.weight) interior += w;
    interior *= h3;
    fp.weight_tail_fraction =
        std::isfinite(tail) ? tail / (tail + interior) : 1.0;
    fp.box_warning = fp.weight_tail_fraction > tail_warn_fraction;
  }
  return fp;
}

namespace {

// Streamed fourth/second-order residual over a ghost-padded lattice: keeps a
// rolling window of 2*pad+1 x-planes of exact samples.
double residual_streamed(const std::function<Vec3(const Vec3&)>& A,
                         const SpinorEvaluator& psi, const CartesianGrid& g,
                         int fd_order) {
  const int pad = fd_order == 4 ? 2 : 1;
  const int n = g.n;
  const int np = n + 2 * pad;
  const std::size_t plane = static_cast<std::size_t>(np) * np;
  const int window = 2 * pad + 1;

  std::vector<Eigen::VectorXcd> planes(window);
  auto fill_plane = [&](Eigen::VectorXcd& buf, int ix) {
    buf.resize(2 * plane);
    for (int jy = 0; jy < np; ++jy)
      for (int jz = 0; jz < np; ++jz) {
        const Vec3 x(g.coord(ix), g.coord(jy - pad), g.coord(jz - pad));
        const Spinor v = psi(x);
        const std::size_t at = 2 * (static_cast<std::size_t>(jy) * np + jz);
        buf(at) = v(0);
        buf(at + 1) = v(1);
      }
  };
  for (int w = 0; w < window; ++w) fill_plane(planes[w], w - pad);

  const double inv2h = 1.0 / (2.0 * g.h);
  const double inv12h = 1.0 / (12.0 * g.h);
  double num = 0.0, den = 0.0;

  for (int ix = 0; ix < n; ++ix) {
    auto at = [&](int w, int jy, int jz, int comp) -> cplx {
      return planes[w](2 * (static_cast<std::size_t>(jy + pad) * np + jz + pad) +
                       comp);
    };
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        Spinor grad[3];
        if (fd_order == 4) {
          for (int c = 0; c < 2; ++c) {
            grad[0](c) = (8.0 * (at(pad + 1, iy, iz, c) - at(pad - 1, iy, iz, c)) -
                          (at(pad + 2, iy, iz, c) - at(pad - 2, iy, iz, c))) *
                         inv12h;
            grad[1](c) = (8.0 * (at(pad, iy + 1, iz, c) - at(pad, iy - 1, iz, c)) -
                          (at(pad, iy + 2, iz, c) - at(pad, iy - 2, iz, c))) *
                         inv12h;
            grad[2](c) = (8.0 * (at(pad, iy, iz + 1, c) - at(pad, iy, iz - 1, c)) -
                          (at(pad, iy, iz + 2, c) - at(pad, iy, iz - 2, c))) *
                         inv12h;
          }
        } else {
          for (int c = 0; c < 2; ++c) {
            grad[0](c) = (at(pad + 1, iy, iz, c) - at(pad - 1, iy, iz, c)) * inv2h;
            grad[1](c) = (at(pad, iy + 1, iz, c) - at(pad, iy - 1, iz, c)) * inv2h;
            grad[2](c) = (at(pad, iy, iz + 1, c) - at(pad, iy, iz - 1, c)) * inv2h;
          }
        }
        const Spinor v(at(pad, iy, iz, 0), at(pad, iy, iz, 1));
        const Vec3 x = g.point(ix, iy, iz);
        const Vec3 a = A(x);
        Spinor d;
        d(0) = -I * (grad[0](1) - I * grad[1](1) + grad[2](0));
        d(1) = -I * (grad[0](0) + I * grad[1](0) - grad[2](1));
        d -= sigma_apply(a, v);
        num += d.squaredNorm();
        den += v.squaredNorm();
      }
    // slide the window one x-plane forward
    if (ix + 1 < n) {
      std::rotate(planes.begin(), planes.begin() + 1, planes.end());
      fill_plane(planes.back(), ix + 1 + pad);
    }
  }
  if (den == 0.0) throw std::invalid_argument("zero_mode_residual: psi vanishes");
  return std::sqrt(num / den);
}

}  // namespace

double zero_mode_residual(const GaugePotential& A, const SpinorEvaluator& psi,
                          const GridSpec& spec, int fd_order) {
  if (fd_order != 2 && fd_order != 4)
    throw std::invalid_argument("zero_mode_residual: fd_order must be 2 or 4");
  return residual_streamed(A.eval, psi, CartesianGrid::make(spec), fd_order);
}

double zero_mode_residual(const GaugePotential& A, const SpinorGrid& psi) {
  DiracOperator D;
  D.grid = psi.grid;
  const std::size_t ns = psi.grid.num_sites();
  D.Ax.resize(ns);
  D.Ay.resize(ns);
  D.Az.resize(ns);
  const CartesianGrid& g = psi.grid;
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) {
        const std::size_t s = g.site(ix, iy, iz);
        const Vec3 a = A(g.point(ix, iy, iz));
        D.Ax[s] = a.x();
        D.Ay[s] = a.y();
        D.Az[s] = a.z();
      }
  Eigen::VectorXcd out(psi.values.size());
  D.apply(psi.values, out);
  const double den = psi.values.norm();
  if (den == 0.0) throw std::invalid_argument("zero_mode_residual: psi vanishes");
  return out.norm() / den;
}

}  // namespace zmlab
