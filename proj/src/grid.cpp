#include "zmlab/grid.hpp"

namespace zmlab {

SpinorGrid SpinorGrid::sample(const CartesianGrid& g, const SpinorEvaluator& psi) {
  SpinorGrid out;
  out.grid = g;
  out.values.resize(g.num_values());
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) {
        const Spinor v = psi(g.point(ix, iy, iz));
        const std::size_t s = 2 * g.site(ix, iy, iz);
        out.values(s) = v(0);
        out.values(s + 1) = v(1);
      }
  return out;
}

Eigen::VectorXcd prolong(const Eigen::VectorXcd& coarse, const CartesianGrid& from,
                         const CartesianGrid& to) {
  if (coarse.size() != static_cast<Eigen::Index>(from.num_values()))
    throw std::invalid_argument("prolong: size mismatch");
  Eigen::VectorXcd fine(to.num_values());

  auto clamp_cell = [&](double x, int& i0, double& t) {
    // locate x between coarse midpoints, clamped (constant extrapolation)
    const double u = (x - from.coord(0)) / from.h;
    const double fl = std::floor(u);
    i0 = static_cast<int>(fl);
    t = u - fl;
    if (i0 < 0) {
      i0 = 0;
      t = 0.0;
    }
    if (i0 >= from.n - 1) {
      i0 = from.n - 2;
      t = 1.0;
    }
  };

  for (int ix = 0; ix < to.n; ++ix)
    for (int iy = 0; iy < to.n; ++iy)
      for (int iz = 0; iz < to.n; ++iz) {
        int x0, y0, z0;
        double tx, ty, tz;
        clamp_cell(to.coord(ix), x0, tx);
        clamp_cell(to.coord(iy), y0, ty);
        clamp_cell(to.coord(iz), z0, tz);
        for (int comp = 0; comp < 2; ++comp) {
          cplx acc = 0.0;
          for (int dx = 0; dx < 2; ++dx)
            for (int dy = 0; dy < 2; ++dy)
              for (int dz = 0; dz < 2; ++dz) {
                const double w = (dx ? tx : 1.0 - tx) * (dy ? ty : 1.0 - ty) *
                                 (dz ? tz : 1.0 - tz);
                if (w == 0.0) continue;
                acc += w * coarse(2 * from.site(x0 + dx, y0 + dy, z0 + dz) + comp);
              }
          fine(2 * to.site(ix, iy, iz) + comp) = acc;
        }
      }
  return fine;
}

}  // namespace zmlab
