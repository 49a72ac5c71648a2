#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dvortex/specfun.hpp"

namespace dvx {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre on [a, b]
Rule gauss_legendre(int n, double a, double b);

// Trapezoid on the real line after the map x = sinh(t), |t| <= tmax, step h.
Rule sinh_trapezoid(double h, double tmax);

// Adaptive Gauss-Kronrod for complex-valued integrands on a finite interval.
cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-12,
               double* err = nullptr);
// Integral over the whole real line (sinh-sinh rule).
cplx integrate_line(const std::function<cplx(double)>& f, double tol = 1e-12, double* err = nullptr);

// tanh-sinh rule on [a, b]; dl/dr are the node distances to a and b, computed without cancellation.
struct EndpointRule {
  std::vector<double> nodes, weights, dl, dr;
};
EndpointRule tanh_sinh_rule(double a, double b, double h, double smax = 4.0);

// Vector-valued integral over the real line: x = sinh(t), trapezoid in t, step halved until
// successive sums differ by less than tol (max-norm). Throws ConvergenceError.
Eigen::VectorXcd integrate_line_vec(const std::function<Eigen::VectorXcd(double)>& f, double tol = 1e-10,
                                    double tmax = 6.0, double* err = nullptr);

// Polynomial (Neville) extrapolation of samples y(h_i) to h = 0.
cplx richardson(const std::vector<double>& h, const std::vector<cplx>& y, double* err = nullptr);

// Fixed-order pairwise summation.
double pairwise_sum(const double* x, std::size_t n);

}  // namespace dvx
