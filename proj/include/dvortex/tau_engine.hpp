#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dvortex/kernel_ff.hpp"
#include "dvortex/painleve.hpp"

namespace dvx {

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  double cutoff = 0.0;
  const char* rule = "gauss-legendre";
};

Quadrature build_quadrature(int n, double cutoff);
double default_cutoff(double mu);

inline double geodesic_l(double s) { return std::atanh(std::sqrt(s)); }

// Real-axis Nystrom discretization of L_{nu2,s} L'_{nu1,s}: sqrt(W) L2 W L1' sqrt(W).
Eigen::MatrixXcd kernel_matrix(double s, const FFParams& ff1, const FFParams& ff2, const Quadrature& quad);
// Hermitian factor sqrt(W) L sqrt(W) for one vortex (sign +1: L, sign -1: L').
Eigen::MatrixXcd kernel_factor(double s, const FFParams& ff, const Quadrature& quad, int sign);
double tau_nystrom(double s, const FFParams& ff1, const FFParams& ff2, const Quadrature& quad);
// Direct 2-D quadrature of int int rho rho F_{nu2}(p,q) F_{nu1}(-p,-q) e^{i(p-q) l} dp dq.
double trace_quadrature(double s, const FFParams& ff1, const FFParams& ff2, const Quadrature& quad);

struct TauPoint {
  double s = 0, l_s = 0, tau = 1, dlntau_ds = 0, det_cond = 1;
  double trace1 = 0;  // Tr(L L')
  int n_levels = 0;
  double cutoff = 0;
  double est_err = 0;
};

struct TauCurve {
  std::vector<TauPoint> points;
  FFParams ff1, ff2;
};

// tau(s) = det(1 - L L') with every rapidity contour closed onto the poles of rho F at
// p_n = i(1+2mu+2n), q_m = -i(1+2mu+2m). The operator becomes the finite matrix X Y over
// pole levels; entries fall off like e^{-(1+2mu+2n) l_s}.
class TauEngine {
 public:
  TauEngine(const FFParams& ff1, const FFParams& ff2, int max_levels = 40);

  TauPoint tau(double s) const;
  double trace_leading(double s) const;  // Tr(L L') on the pole lattice
  TauCurve curve(const std::vector<double>& s_grid) const;
  int levels_for(double l) const;

  // lattice matrices at separation l with n levels: tau = det(1 - X Y)
  void lattice(double l, int n, Eigen::MatrixXcd& X, Eigen::MatrixXcd& Y) const;

 private:
  FFParams ff1_, ff2_;
  int max_levels_;
  Eigen::MatrixXcd A2_, A1_;  // l-independent parts of X and Y
};

struct ATau {
  double a_tau;  // 1 - tau ~ a_tau (1-s)^{1+2mu}
  double a_pvi;  // 1 - w ~ a_pvi (1-s)^{1+2mu}
};
ATau a_tau(const FFParams& ff1, const FFParams& ff2);

struct PVICheckRow {
  double s, w, wprime, sigma, dlntau_ds, rel_err;
};
struct PVICheck {
  double A = 0;  // seed amplitude a_pvi
  std::vector<PVICheckRow> rows;
};

// Integrates PVI from s -> 1 with the a_pvi seed and compares sigma_pvi with d ln tau/ds.
PVICheck pvi_sigma_check(const FFParams& ff1, const FFParams& ff2, const std::vector<double>& s_grid,
                         PVISolveOptions opt = {});

}  // namespace dvx
