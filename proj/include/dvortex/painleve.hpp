#pragma once

#include <stdexcept>
#include <vector>

namespace dvx {

struct PVIParams {
  double alpha = 0, beta = 0, gamma = 0, delta = 0;
  double lambda_ = 0;        // nu2 - nu1
  double lambda_tilde = 0;   // 2 + nu1 + nu2 - 2b
  double mu = 0;
};

PVIParams pvi_params(double nu1, double nu2, double b, double mu);
// Shifting nu1, nu2 and b by the same c leaves alpha..delta unchanged.
PVIParams pvi_params_gauge(double nu1, double nu2, double b, double mu, double c);

struct ODEState {
  double s = 0;  // s for PVI, t for PV
  double w = 0;  // w for PVI, y for PV
  double wprime = 0;
};

struct SingularityError : std::runtime_error {
  ODEState last;
  SingularityError(const char* what, ODEState st) : std::runtime_error(what), last(st) {}
};

// w'' from the PVI equation, written in w and s.
double pvi_rhs(const ODEState& st, const PVIParams& p);
// Same equation in v = 1 - w, x = 1 - s (returns d^2v/dx^2); independent assembly used by the solver.
double pvi_rhs_reflected(double x, double v, double vp, const PVIParams& p);

struct PVISolveOptions {
  double one_minus_s0 = 1e-3;
  double tol = 1e-10;
  bool subleading_seed = true;  // include the first correction A x^k (1 + a1 x)
};

// Integrates from the s -> 1 asymptotics 1 - w ~ A (1-s)^{1+2mu} down to s_end.
// Returns states at s_out (any order, each in [s_end, s0]); all accepted steps when s_out is empty.
std::vector<ODEState> pvi_solve_from_one(const PVIParams& p, double A, double s_end,
                                         const std::vector<double>& s_out = {}, PVISolveOptions opt = {});

double sigma_pvi(const ODEState& st, const PVIParams& p);

struct PVParams {
  double alpha_p = 0, beta_p = 0, gamma_p = 0, delta_p = 0;
  double eta = 0;
  double theta_ok = 0;   // NaN when eta = 0
  double eta_theta = 0;  // eta * theta = gamma' - eta, finite at B = 0
  double lambda_ = 0;    // nu2 - nu1
  double lambda_hat = 0; // sqrt(m^2 - E^2)
};

PVParams pv_params(double nu1, double nu2, double m, double E, double B);

// y'' in t = squared distance.
double pv_rhs(const ODEState& st, const PVParams& p);
double sigma_pv(const ODEState& st, const PVParams& p);

// Linear solution y = C^2 K_{|lambda|}(lambda_hat sqrt t)^2 (B = 0); returns (y, y') at t.
ODEState pv_linear_seed(double t, double C2, const PVParams& p);

// Integrates PV from the seed at t0 towards smaller t; outputs at t_out.
std::vector<ODEState> pv_solve_from_infinity(const PVParams& p, double C2, double t0,
                                             const std::vector<double>& t_out, double tol = 1e-12);

}  // namespace dvx
