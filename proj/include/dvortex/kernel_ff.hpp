#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "dvortex/specfun.hpp"

namespace dvx {

// theta is the SAE angle: -pi/2 or +pi/2. The +pi/2 extension enters as nu -> nu - 1.
struct FFParams {
  double nu = -0.5;
  double b = 0.25;
  double mu = 0.5590169943749474;
  double theta = -kPi / 2;

  double effective_nu() const { return theta > 0 ? nu - 1.0 : nu; }
  void validate() const;
};

double rho(double p, double mu);
cplx rho(cplx p, double mu);

// Prefactor sin(pi nu)/(2 pi^2) * prod Gamma(mu + 1/2 +- i p/2) Gamma(mu + 1/2 +- i q/2) / Gamma(1+2mu)^2
cplx ff_gamma_prefactor(cplx p, cplx q, double nu, double mu);

// Discretized triple integral. The x, y integrals use tan x = e^u with a trapezoid rule in u;
// the theta line is shifted by i*phi/2 so that the integrand is non-oscillatory.
class TripleKernel {
 public:
  struct Options {
    double h_u = 0.25;
    double h_t = 0.25;
    double u_lo = 0.0;  // 0: choose from the decay rate
    double u_hi = 0.0;
  };
  TripleKernel(double nu, double b, double mu, Options opt);
  TripleKernel(double nu, double b, double mu) : TripleKernel(nu, b, mu, Options{}) {}

  cplx F(cplx p, cplx q) const;
  // coarse-grid (every other node) value, for an error estimate
  cplx F_coarse(cplx p, cplx q) const;
  Eigen::MatrixXcd F_matrix(const std::vector<cplx>& p, const std::vector<cplx>& q) const;

  double nu() const { return nu_; }
  int size() const { return int(u_.size()); }

 private:
  Eigen::VectorXcd weights(cplx p, int sign, int stride) const;
  double nu_, b_, mu_, h_;
  std::vector<double> u_;
  Eigen::MatrixXcd G_;
};

// Shared, lazily built kernel for (nu, b, mu); thread-safe.
std::shared_ptr<const TripleKernel> triple_kernel(double nu, double b, double mu);

// Lower-level access: g(phi), the contour-shifted theta integral at fixed phi = 2(x - y).
cplx theta_integral(double phi, double nu, double b, double mu, double h_t = 0.25);

struct FFValue {
  double p, q, value, err;
};

FFValue f_nu_triple(double p, double q, const FFParams& ff);
double f_nu_series(double p, double q, const FFParams& ff);

// Raw representations with an explicit nu (no SAE mapping), complex arguments allowed.
cplx f_series_raw(cplx p, cplx q, double nu, double b, double mu, int nterms = 256);

enum class Side { Minus, Plus };
// R * Delta-dot_{+-}(p, q); the dimensionless kernel of the boundary projection operators.
double form_factor(Side side, double p, double q, const FFParams& ff);

struct ResidueReport {
  double analytic;
  double numeric;      // eps^2 F(p0 - i eps, q0 + i eps), eps -> 0 by Richardson
  double numeric_err;  // extrapolation error estimate
  double lattice;      // from the continued series at the pole lattice point
  bool diverged;
};
ResidueReport residue_f(const FFParams& ff, bool with_numeric = true);
double residue_analytic(double nu, double b, double mu);

// Regularized ff02 sums on the pole lattice p_n = i(1+2mu+2n), q_m = -i(1+2mu+2m):
// S(n, m) such that the double residue of F_nu at (p_n, q_m) is
// 4 C (-1)^{n+m} (1+2mu)_n (1+2mu)_m / (n! m!) S(n, m), C = sin(pi nu)/(2 pi^2).
Eigen::MatrixXcd pole_lattice_sums(double nu, double b, double mu, int N);

}  // namespace dvx
