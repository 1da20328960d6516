#pragma once

#include <cstdint>

#include "zmlab/fields.hpp"

namespace zmlab {

struct GridSpec {
  double h = 0.25;
  double L = 6.0;
};

// Cube [-L, L]^3 sampled at cell midpoints x_i = -L + (i + 1/2) h. The
// half-step shift keeps the origin off the grid (the radial machinery works
// on r > 0) and the resulting even point counts avoid the checkerboard null
// vectors a node-centered centered-difference stencil would admit.
struct CartesianGrid {
  double h = 0.0;
  double L = 0.0;
  int n = 0;

  static CartesianGrid make(const GridSpec& spec) {
    if (!(spec.h > 0.0) || !(spec.L > 0.0))
      throw std::invalid_argument("grid: h and L must be positive");
    CartesianGrid g;
    g.n = static_cast<int>(std::llround(2.0 * spec.L / spec.h));
    if (g.n < 2) throw std::invalid_argument("grid: fewer than 2 points per axis");
    g.L = spec.L;
    g.h = 2.0 * spec.L / g.n;  // make the box size exact
    return g;
  }

  double coord(int i) const { return -L + (i + 0.5) * h; }
  Vec3 point(int ix, int iy, int iz) const {
    return Vec3(coord(ix), coord(iy), coord(iz));
  }
  std::size_t site(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n + iy) * n + iz;
  }
  std::size_t num_sites() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  std::size_t num_values() const { return 2 * num_sites(); }
};

// Two-component samples, interleaved: value index = 2*site + component.
struct SpinorGrid {
  CartesianGrid grid;
  Eigen::VectorXcd values;

  static SpinorGrid sample(const CartesianGrid& g, const SpinorEvaluator& psi);
};

// Trilinear prolongation between two midpoint grids over the same box.
Eigen::VectorXcd prolong(const Eigen::VectorXcd& coarse, const CartesianGrid& from,
                         const CartesianGrid& to);

}  // namespace zmlab
