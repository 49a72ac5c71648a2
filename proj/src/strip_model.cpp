#include "dvortex/strip_model.hpp"

#include <cmath>

namespace dvx {

namespace {

void check_strip(double xi_y, const char* who) {
  if (!(std::abs(xi_y) < 0.25 * kPi)) throw DomainError(std::string(who) + ": need |xi_y| < pi/4");
}

}  // namespace

double chi(double p, const DerivedParams& d) {
  const double mu = d.mu, b = d.b;
  double lg = ln_gamma(mu - b + 1.0) + ln_gamma(mu + b + 1.0) + 2.0 * ln_gamma(cplx(mu + 0.5, 0.5 * p)).real() -
              2.0 * ln_gamma(1.0 + 2.0 * mu);
  return std::exp(lg) / (4.0 * kPi);
}

Spinor phi(int sign, double p, double xi_y, const DerivedParams& d) {
  if (sign != 1 && sign != -1) throw DomainError("phi: sign must be +1 or -1");
  check_strip(xi_y, "phi");
  const double s = sign, mu = d.mu, b = d.b, C = d.c_plus;
  const double pre = std::pow(2.0 * std::cos(2.0 * xi_y), 0.5 + mu) * std::sqrt(chi(p, d));
  const cplx x = 1.0 + std::exp(s * 4.0 * kI * xi_y);
  const double sh = xi_y - s * 0.25 * kPi;
  const cplx ip(0.0, p);
  Spinor out;
  out(0) = pre / C * std::exp(s * kI * (2.0 * mu + 2.0 * b + s * ip) * sh) *
           gauss_2f1(mu + b, mu + 0.5 + s * 0.5 * ip, 1.0 + 2.0 * mu, x, Branch::UpperCut);
  out(1) = s * kI * C * pre * std::exp(s * kI * (2.0 * mu - 2.0 * b - s * ip) * sh) *
           gauss_2f1(mu - b, mu + 0.5 - s * 0.5 * ip, 1.0 + 2.0 * mu, x, Branch::UpperCut);
  return out;
}

Mat2 q_matrix(int sign, double p, double xi_y0, const DerivedParams& d) {
  const Spinor a = phi(sign, p, xi_y0, d), b = phi(-sign, p, xi_y0, d);
  return -double(sign) * kI / std::cos(2.0 * xi_y0) * a * (b.adjoint() * sigma_x());
}

Spinor q_project(int sign, double p, double xi_y0, const Spinor& g, const DerivedParams& d) {
  return q_matrix(sign, p, xi_y0, d) * g;
}

std::pair<cplx, cplx> strip_coords(double p, double xi_y0, const Spinor& g, const DerivedParams& d) {
  const double c = std::cos(2.0 * xi_y0);
  const Spinor pp = phi(+1, p, xi_y0, d), pm = phi(-1, p, xi_y0, d);
  cplx gp = -kI / c * (pm.adjoint() * sigma_x() * g)(0);
  cplx gm = kI / c * (pp.adjoint() * sigma_x() * g)(0);
  return {gp, gm};
}

Mat2 partial_green_strip(double p, double xi_y, double xi_yp, const DerivedParams& d) {
  check_strip(xi_y, "partial_green_strip");
  check_strip(xi_yp, "partial_green_strip");
  if (xi_y == xi_yp) throw DomainError("partial_green_strip: coincident points");
  if (xi_y < xi_yp) return phi(-1, p, xi_y, d) * phi(+1, p, xi_yp, d).adjoint() / d.R;
  return phi(+1, p, xi_y, d) * phi(-1, p, xi_yp, d).adjoint() / d.R;
}

Mat2 unitrans2(cplx xi, const DerivedParams& d) {
  check_strip(xi.imag(), "unitrans2");
  const double a = std::arg(std::cosh(xi));  // cosh(xi)/cosh(conj xi) = e^{2ia}
  Mat2 U = Mat2::Zero();
  U(0, 0) = std::exp(-kI * (1.0 - 2.0 * d.b) * a);
  U(1, 1) = std::exp(kI * (1.0 + 2.0 * d.b) * a);
  return U;
}

}  // namespace dvx
