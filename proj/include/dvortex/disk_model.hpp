#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dvortex/types.hpp"

namespace dvx {

struct ModelParams {
  double R = 1.0;
  double m = 1.0;
  double E = 0.0;
  double b = 0.25;
  double nu = -0.5;
  double theta = -kPi / 2;

  void validate() const;
};

struct DerivedParams {
  double mu = 0, c_plus = 1, c_minus = 1;
  double R = 1, m = 1, E = 0, b = 0;
  double lambda() const { return std::sqrt(m * m - E * E); }
};

DerivedParams derive(const ModelParams& p);

struct RadialBasis {
  Spinor wI;
  Spinor wI_alt;  // second printed form, argument r^l F(.., 1 - r^2)
  std::optional<Spinor> wII_plus;   // l > -1
  std::optional<Spinor> wII_minus;  // l < 0
};

RadialBasis radial_basis(double l, double r, const DerivedParams& d);

// -(1/sqrt(mu^2 - b^2)) (1 - r^2)/r
double radial_wronskian(double r, const DerivedParams& d);

// Mixing angle of w^(gamma) = cos(eta) w^(II,+) + sin(eta) w^(II,-), l in (-1, 0).
double eta_of_theta(double theta, double l, const DerivedParams& d);

// Experimental: Theta from the deficiency-space parameter gamma.
double theta_of_gamma(double gamma, double l, const DerivedParams& d);

// Radial resolvent kernel; theta is used only for l in (-1, 0).
Mat2 radial_green(double l, double r, double rp, const DerivedParams& d, double theta);

struct LandauLevel {
  int n;
  double E2;
  std::string l0;  // allowed angular momenta
};
struct VortexLevel {
  int n;
  double E2;
  int b_sign;
  std::string l0;
};
struct L0Root {
  double E;
  double residual;
};
struct SpectrumReport {
  double continuum_edge = 0;  // m^2 + 4 b^2 / R^2
  std::vector<LandauLevel> landau;
  std::vector<VortexLevel> vortex_levels;
  std::vector<L0Root> l0_roots;
};

// LHS + A(Theta, nu) of the l0 = 0 bound-state condition.
double l0_condition(double E, const ModelParams& p);
SpectrumReport spectrum(const ModelParams& p);

// Psi_{+-}(z, theta) (hat = false) or the conjugates hat Psi_{+-} (hat = true).
Spinor horocyclic(int sign, bool hat, cplx z, cplx theta, const DerivedParams& d);

enum class RadialKind { I, IIplus, IIminus };

// Contour integrals of horocyclic waves producing the phase-dressed radial solutions.
Spinor contour_radial(double l, cplx z, RadialKind kind, bool hat, const DerivedParams& d);
// Right-hand side: phase factors times radial_basis.
Spinor contour_radial_expected(double l, cplx z, RadialKind kind, bool hat, const DerivedParams& d);

double u_invariant(cplx z, cplx zp);
// z -> (alpha z + beta) / (conj(beta) z + conj(alpha)), |alpha|^2 - |beta|^2 = 1
cplx su11_map(cplx alpha, cplx beta, cplx z);

// e^{-i nu (phi - phi')} with phi - phi' reduced to (-pi, pi).
cplx vortex_phase(cplx z, cplx zp, double nu);

// Full one-vortex Green function for Theta = -pi/2 or +pi/2: vortex_phase * G0 + Delta.
Mat2 green_disk(cplx z, cplx zp, const ModelParams& p);
// G0 from the hypergeometric closed form.
Mat2 green_disk_free(cplx z, cplx zp, const DerivedParams& d);
// Delta from the one-dimensional theta integral.
Mat2 green_disk_delta(cplx z, cplx zp, const ModelParams& p);

// Contour representations: version 1 integrates over C0(z), version 2 over C0(z').
Mat2 green_disk_free_contour(cplx z, cplx zp, const DerivedParams& d, int version);
Mat2 green_disk_delta_contour(cplx z, cplx zp, const ModelParams& p, int version);

}  // namespace dvx
