#pragma once

#include <Eigen/Dense>

#include "dvortex/specfun.hpp"

namespace dvx {

using Spinor = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

inline Mat2 outer(const Spinor& a, const Spinor& b) { return a * b.transpose(); }
inline cplx det2(const Spinor& a, const Spinor& b) { return a(0) * b(1) - a(1) * b(0); }

inline Mat2 sigma_x() { return (Mat2() << 0, 1, 1, 0).finished(); }
inline Mat2 sigma_y() { return (Mat2() << 0, -kI, kI, 0).finished(); }
inline Mat2 sigma_z() { return (Mat2() << 1, 0, 0, -1).finished(); }

}  // namespace dvx
