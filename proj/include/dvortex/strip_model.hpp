#pragma once

#include <utility>

#include "dvortex/disk_model.hpp"

namespace dvx {

struct StripPoint {
  double xi_x = 0;
  double xi_y = 0;  // |xi_y| < pi/4
};

inline cplx disk_to_strip(cplx z) { return std::atanh(z); }
inline cplx strip_to_disk(cplx xi) { return std::tanh(xi); }

double chi(double p, const DerivedParams& d);

// Phi^(+-)(p, xi_y); Phi^(+) is square integrable at xi_y = pi/4, Phi^(-) at -pi/4.
Spinor phi(int sign, double p, double xi_y, const DerivedParams& d);

Mat2 q_matrix(int sign, double p, double xi_y0, const DerivedParams& d);
Spinor q_project(int sign, double p, double xi_y0, const Spinor& g, const DerivedParams& d);

// (g_+, g_-) with g = g_+ Phi^(+) + g_- Phi^(-)
std::pair<cplx, cplx> strip_coords(double p, double xi_y0, const Spinor& g, const DerivedParams& d);

Mat2 partial_green_strip(double p, double xi_y, double xi_yp, const DerivedParams& d);

// Diagonal gauge factor relating the strip and disk hamiltonians.
Mat2 unitrans2(cplx xi, const DerivedParams& d);

}  // namespace dvx
