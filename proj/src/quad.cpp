#include "dvortex/quad.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <gsl/gsl_integration.h>

namespace dvx {

Rule gauss_legendre(int n, double a, double b) {
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, i, &r.nodes[i], &r.weights[i], t);
  gsl_integration_glfixed_table_free(t);
  return r;
}

Rule sinh_trapezoid(double h, double tmax) {
  Rule r;
  int k = int(std::ceil(tmax / h));
  for (int i = -k; i <= k; ++i) {
    double t = i * h;
    r.nodes.push_back(std::sinh(t));
    r.weights.push_back(h * std::cosh(t));
  }
  return r;
}

cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol, double* err) {
  double e = 0.0;
  cplx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &e);
  if (err) *err = e;
  return v;
}

cplx integrate_line(const std::function<cplx(double)>& f, double tol, double* err) {
  boost::math::quadrature::sinh_sinh<double> integrator;
  double e = 0.0;
  cplx v = integrator.integrate(f, tol, &e);
  if (err) *err = e;
  return v;
}

EndpointRule tanh_sinh_rule(double a, double b, double h, double smax) {
  EndpointRule r;
  const double c = 0.5 * (a + b), half = 0.5 * (b - a);
  int k = int(std::ceil(smax / h));
  for (int i = -k; i <= k; ++i) {
    double s = i * h, u = 0.5 * kPi * std::sinh(s);
    double ch = std::cosh(u);
    double dl = 2.0 * half / (1.0 + std::exp(-2.0 * u));
    double dr = 2.0 * half / (1.0 + std::exp(2.0 * u));
    if (dl <= 0.0 || dr <= 0.0) continue;
    r.nodes.push_back(c + half * std::tanh(u));
    r.weights.push_back(h * half * 0.5 * kPi * std::cosh(s) / (ch * ch));
    r.dl.push_back(dl);
    r.dr.push_back(dr);
  }
  return r;
}

Eigen::VectorXcd integrate_line_vec(const std::function<Eigen::VectorXcd(double)>& f, double tol, double tmax,
                                    double* err) {
  double h = 0.5;
  auto term = [&](double t) -> Eigen::VectorXcd { return f(std::sinh(t)) * std::cosh(t); };
  Eigen::VectorXcd sum = term(0.0);
  for (int i = 1; i * h <= tmax; ++i) sum += term(i * h) + term(-i * h);
  Eigen::VectorXcd prev = sum * h;
  for (int level = 0; level < 9; ++level) {
    h *= 0.5;
    for (int i = 1; i * h <= tmax; i += 2) sum += term(i * h) + term(-i * h);
    Eigen::VectorXcd cur = sum * h;
    double diff = (cur - prev).cwiseAbs().maxCoeff();
    if (err) *err = diff;
    if (diff < tol && level >= 1) return cur;
    prev = cur;
  }
  throw ConvergenceError("integrate_line_vec: no convergence");
}

cplx richardson(const std::vector<double>& h, const std::vector<cplx>& y, double* err) {
  std::vector<cplx> p(y);
  const std::size_t n = y.size();
  cplx prev = p[0];
  for (std::size_t m = 1; m < n; ++m) {
    prev = p[0];
    for (std::size_t i = 0; i + m < n; ++i) p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
  }
  if (err) *err = std::abs(p[0] - prev);
  return p[0];
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t m = n / 2;
  return pairwise_sum(x, m) + pairwise_sum(x + m, n - m);
}

}  // namespace dvx
