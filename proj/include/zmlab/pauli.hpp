#pragma once

#include <complex>

#include <Eigen/Dense>

namespace zmlab {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Spinor = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;

inline constexpr cplx I{0.0, 1.0};

// Pauli matrix sigma_j, axis in {0,1,2}.
inline Mat2c pauli(int axis) {
  Mat2c m;
  switch (axis) {
    case 0: m << 0, 1, 1, 0; break;
    case 1: m << 0, -I, I, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat2c sigma_dot(const Vec3& v) {
  Mat2c m;
  m << v.z(), cplx(v.x(), -v.y()),
       cplx(v.x(), v.y()), -v.z();
  return m;
}

inline Mat2c sigma_dot(const CVec3& v) {
  Mat2c m;
  m << v.z(), v.x() - I * v.y(),
       v.x() + I * v.y(), -v.z();
  return m;
}

// (sigma.v) s without forming the matrix; the hot loops use these.
inline void sigma_apply(double vx, double vy, double vz,
                        cplx s_up, cplx s_dn, cplx& out_up, cplx& out_dn) {
  out_up = vz * s_up + cplx(vx, -vy) * s_dn;
  out_dn = cplx(vx, vy) * s_up - vz * s_dn;
}

inline Spinor sigma_apply(const Vec3& v, const Spinor& s) {
  Spinor out;
  sigma_apply(v.x(), v.y(), v.z(), s(0), s(1), out(0), out(1));
  return out;
}

}  // namespace zmlab
