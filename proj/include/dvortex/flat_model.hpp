#pragma once

#include <optional>
#include <vector>

#include "dvortex/painleve.hpp"
#include "dvortex/types.hpp"

namespace dvx {

struct PlaneParams {
  double m = 1.0;
  double E = 0.0;
  double B = 0.0;
  double nu = -0.5;
  double theta = -kPi / 2;

  double lambda_hat() const;
  // C_+ of the B > 0, B < 0 and B = 0 partial waves respectively
  double c_plus() const;
  double effective_nu() const { return theta > 0 ? nu - 1.0 : nu; }
  void validate() const;
};

inline double rapidity(double p, double lambda_hat) { return std::asinh(p / lambda_hat); }
inline double momentum(double theta_p, double lambda_hat) { return lambda_hat * std::sinh(theta_p); }

struct PlaneRadialBasis {
  Spinor wI;
  Spinor wI_alt;  // second printed form (B > 0); equals wI otherwise
  std::optional<Spinor> wII_plus, wII_minus;
};

// Radial solutions of (H_l - E) w = 0 on the plane. B > 0: Kummer forms; B = 0: Bessel K/I;
// B < 0: from B > 0 via (f, g; l, B, E) -> (g, f; -l-1, -B, -E).
PlaneRadialBasis flat_radial_basis(double l, double r, const PlaneParams& pp);

// lambda/2 * w^(II,sign)(r_<) (x) w^(I)(r_>), ordered as in the radial Green function.
Mat2 flat_radial_green(double l, double r, double rp, const PlaneParams& pp, int sign);

// Phi^(+-)(p, y), solutions of the partial Dirac equation in the translation gauge.
Spinor flat_partial_wave(int sign, double p, double y, const PlaneParams& pp);

// One-vortex Green function G0 + Delta (sums the three phase branches).
Mat2 flat_green(cplx z, cplx zp, const PlaneParams& pp);
Mat2 flat_green_free(cplx z, cplx zp, const PlaneParams& pp);  // G0 without the vortex phase
Mat2 flat_green_delta(cplx z, cplx zp, const PlaneParams& pp);
// B = 0, 0 < arg z, arg z' < pi: the double rapidity integral for Delta (oracle).
Mat2 flat_green_delta_double(cplx z, cplx zp, const PlaneParams& pp);

enum class PlaneSide { Minus, Plus };
// B = 0: closed form. B > 0, p, q > 0, side Plus: triple integral.
double flat_form_factor(PlaneSide side, double p, double q, const PlaneParams& pp);

struct PlaneTauPoint {
  double d = 0, tau = 1, dlntau_dd = 0, trace1 = 0;
  int n_nodes = 0;
};

struct PlaneTauOptions {
  double h = 0.1;          // rapidity step
  double decay = 40.0;     // truncate where lambda_hat d cosh(theta) exceeds this
};

// tau(d) = det(1 - alpha(a2) delta(a1)) at distance d, B = 0.
PlaneTauPoint tau_plane(double d, const PlaneParams& pp1, const PlaneParams& pp2, PlaneTauOptions opt = {});

struct PVCheckRow {
  double d, t, y, yprime, sigma, t_dlntau_dt, rel_err;
};
struct PVCheck {
  double C2 = 0;  // seed amplitude matched at d_seed
  double d_seed = 0;
  std::vector<PVCheckRow> rows;
};

// Integrates PV (t = d^2) from a Bessel seed at d_seed and compares sigma_pv with t d ln tau/dt.
PVCheck pv_sigma_check(const PlaneParams& pp1, const PlaneParams& pp2, const std::vector<double>& d_grid,
                       double d_seed = 9.0);

}  // namespace dvx
