#include "dvortex/flat_model.hpp"

#include <algorithm>
#include <cmath>

#include "dvortex/parallel.hpp"
#include "dvortex/quad.hpp"

namespace dvx {

double PlaneParams::lambda_hat() const { return std::sqrt(m * m - E * E); }

double PlaneParams::c_plus() const {
  const double base = std::pow((m - E) / (m + E), 0.25);
  const double l2 = m * m - E * E;
  if (B > 0) return base * std::pow(2.0 * B / l2, 0.25);
  if (B < 0) return base * std::pow(l2 / (2.0 * std::abs(B)), 0.25);
  return base;
}

void PlaneParams::validate() const {
  if (!(m > 0.0)) throw DomainError("PlaneParams: m must be positive");
  if (!(std::abs(E) < m)) throw DomainError("PlaneParams: need |E| < m");
  if (!(nu > -1.0 && nu <= 0.0)) throw DomainError("PlaneParams: nu must lie in (-1, 0]");
  if (std::abs(std::abs(theta) - kPi / 2) > 1e-12) throw DomainError("PlaneParams: theta must be +-pi/2");
  if (!std::isfinite(B)) throw DomainError("PlaneParams: B must be finite");
}

namespace {

double rgam(double x) { return std::real(rgamma(cplx(x))); }

PlaneRadialBasis radial_positive_b(double l, double r, double lam, double B, double cp) {
  const double a = lam * lam / (2.0 * B), X = 0.5 * B * r * r, rho = std::sqrt(0.5 * B) * r;
  const double ls = std::log(lam / std::sqrt(2.0 * B)) + std::lgamma(a) - 0.5 * X;
  const double lr = std::log(rho);
  PlaneRadialBasis out;
  out.wI = Spinor(kummer_u_scaled(a + 1.0, 1.0 - l, X, ls - l * lr) / cp,
                  kummer_u_scaled(a, -l, X, ls - (l + 1.0) * lr) * cp);
  out.wI_alt = Spinor(kummer_u_scaled(a + 1.0 + l, 1.0 + l, X, ls + l * lr) / cp,
                      kummer_u_scaled(a + 1.0 + l, 2.0 + l, X, ls + (l + 1.0) * lr) * cp);
  const double e = std::exp(-0.5 * X);
  if (l > -1.0) {
    double g = std::exp(std::lgamma(a + 1.0 + l) - std::lgamma(a + 1.0));
    double g2 = std::exp(std::lgamma(a + 1.0 + l) - std::lgamma(a));
    out.wII_plus = Spinor(g * rgam(1.0 + l) / cp * e * std::pow(rho, l) * kummer(KummerKind::M, a + 1.0 + l, 1.0 + l, X),
                          -g2 * rgam(2.0 + l) * cp * e * std::pow(rho, l + 1.0) *
                              kummer(KummerKind::M, a + 1.0 + l, 2.0 + l, X));
  }
  if (l < 0.0) {
    out.wII_minus = Spinor(rgam(1.0 - l) / cp * e * std::pow(rho, -l) * kummer(KummerKind::M, a + 1.0, 1.0 - l, X),
                           -rgam(-l) * cp * e * std::pow(rho, -l - 1.0) * kummer(KummerKind::M, a, -l, X));
  }
  return out;
}

double bessel_i(double nu, double z);

PlaneRadialBasis radial_zero_b(double l, double r, double lam, double cp) {
  const double z = lam * r;
  PlaneRadialBasis out;
  out.wI = 2.0 * Spinor(bessel_k(l, z) / cp, bessel_k(l + 1.0, z) * cp);
  out.wI_alt = out.wI;
  if (l > -1.0) out.wII_plus = Spinor(bessel_i(l, z) / cp, -bessel_i(l + 1.0, z) * cp);
  if (l < 0.0) out.wII_minus = Spinor(bessel_i(-l, z) / cp, -bessel_i(-l - 1.0, z) * cp);
  return out;
}

// I_nu for any real order: I_{-v} = I_v + (2/pi) sin(v pi) K_v
double bessel_i(double nu, double z) {
  if (nu >= 0.0) return std::cyl_bessel_i(nu, z);
  return std::cyl_bessel_i(-nu, z) + 2.0 / kPi * std::sin(-nu * kPi) * std::cyl_bessel_k(-nu, z);
}

Spinor swap(const Spinor& w) { return Spinor(w(1), w(0)); }

}  // namespace

PlaneRadialBasis flat_radial_basis(double l, double r, const PlaneParams& pp) {
  pp.validate();
  if (!(r > 0.0)) throw DomainError("flat_radial_basis: r must be positive");
  const double lam = pp.lambda_hat();
  if (pp.B > 0) return radial_positive_b(l, r, lam, pp.B, pp.c_plus());
  if (pp.B == 0) return radial_zero_b(l, r, lam, pp.c_plus());
  PlaneParams q = pp;
  q.B = -pp.B;
  q.E = -pp.E;
  PlaneRadialBasis t = radial_positive_b(-l - 1.0, r, lam, q.B, q.c_plus());
  PlaneRadialBasis out;
  out.wI = swap(t.wI);
  out.wI_alt = swap(t.wI_alt);
  if (t.wII_minus) out.wII_plus = Spinor(-swap(*t.wII_minus));
  if (t.wII_plus) out.wII_minus = Spinor(-swap(*t.wII_plus));
  return out;
}

Mat2 flat_radial_green(double l, double r, double rp, const PlaneParams& pp, int sign) {
  if (r == rp) throw DomainError("flat_radial_green: r = r' is the jump point");
  const double lam = pp.lambda_hat();
  auto pick = [&](const PlaneRadialBasis& w) {
    const auto& v = sign > 0 ? w.wII_plus : w.wII_minus;
    if (!v) throw DomainError("flat_radial_green: w^(II) not defined for this l");
    return *v;
  };
  PlaneRadialBasis a = flat_radial_basis(l, r, pp), b = flat_radial_basis(l, rp, pp);
  if (r < rp) return 0.5 * lam * outer(pick(a), b.wI);
  return 0.5 * lam * outer(a.wI, pick(b));
}

Spinor flat_partial_wave(int sign, double p, double y, const PlaneParams& pp) {
  pp.validate();
  const double lam = pp.lambda_hat(), cp = pp.c_plus(), s = sign > 0 ? 1.0 : -1.0;
  if (pp.B == 0.0) {
    const double om = std::hypot(lam, p);
    const double e = std::exp(-s * om * y) / std::sqrt(2.0);
    return Spinor(e / cp * std::sqrt(1.0 + s * p / om), s * kI * cp * e * std::sqrt(1.0 - s * p / om));
  }
  const double aB = std::abs(pp.B), a = lam * lam / (2.0 * aB);
  const double n = std::sqrt(std::exp(std::lgamma(a + 1.0)) / std::sqrt(2.0 * kPi));
  if (pp.B > 0) {
    const double x = s * std::sqrt(2.0 * aB) * (y - p / aB);
    return n * Spinor(parabolic_d(-a - 1.0, x) / cp, s * kI * cp * parabolic_d(-a, x));
  }
  const double x = s * std::sqrt(2.0 * aB) * (y + p / aB);
  return n * Spinor(parabolic_d(-a, x) / cp, s * kI * cp * parabolic_d(-a - 1.0, x));
}

namespace {

// zeta(u) without its exp(-|B| u / 4) factor
Eigen::Matrix2d zeta_core(double u, const PlaneParams& pp) {
  const double lam = pp.lambda_hat(), cp = pp.c_plus();
  Eigen::Matrix2d z;
  if (pp.B == 0.0) {
    const double x = lam * std::sqrt(u);
    if (x > 700.0) return Eigen::Matrix2d::Zero();
    const double k0 = bessel_k(0, x), k1 = bessel_k(1, x);
    z << k0 / (cp * cp), k1, k1, cp * cp * k0;
    return lam / (2.0 * kPi) * z;
  }
  const double aB = std::abs(pp.B), a = lam * lam / (2.0 * aB), X = 0.5 * aB * u;
  const double ls = std::log(std::sqrt(0.5 * aB) / (2.0 * kPi)) + std::lgamma(a + 1.0);
  const double off = std::sqrt(X) * kummer_u_scaled(a + 1.0, 2.0, X, ls);
  if (pp.B > 0)
    z << kummer_u_scaled(a + 1.0, 1.0, X, ls) / (cp * cp), off, off, cp * cp * kummer_u_scaled(a, 1.0, X, ls);
  else
    z << kummer_u_scaled(a, 1.0, X, ls) / (cp * cp), off, off, cp * cp * kummer_u_scaled(a + 1.0, 1.0, X, ls);
  return z;
}

double branch_dphi(cplx z, cplx zp) {
  double dphi = std::arg(z) - std::arg(zp);
  if (std::abs(std::abs(dphi) - kPi) < 1e-6) throw DomainError("flat_green: phi - phi' too close to +-pi");
  return dphi;
}

}  // namespace

Mat2 flat_green_free(cplx z, cplx zp, const PlaneParams& pp) {
  pp.validate();
  if (z == zp) throw DomainError("flat_green: coincident points");
  const double u = std::norm(z - zp);
  Eigen::Matrix2d zt = zeta_core(u, pp) * std::exp(-0.25 * std::abs(pp.B) * u);
  const double su = std::sqrt(u);
  Mat2 g;
  g << zt(0, 0), su / (zp - z) * zt(0, 1), -su / (std::conj(zp) - std::conj(z)) * zt(1, 0), -zt(1, 1);
  return std::exp(0.25 * pp.B * (std::conj(z) * zp - z * std::conj(zp))) * g;
}

Mat2 flat_green_delta(cplx z, cplx zp, const PlaneParams& pp) {
  pp.validate();
  if (pp.nu == 0.0) return Mat2::Zero();
  const double r = std::abs(z), rp = std::abs(zp), dphi = branch_dphi(z, zp);
  if (r == 0.0 || rp == 0.0) throw DomainError("flat_green: points must avoid the vortex");
  const double phi = std::arg(z), phip = std::arg(zp), aB = std::abs(pp.B);
  const bool plus = pp.theta > 0;
  const double pre = std::sin(kPi * pp.nu) / kPi;
  auto entry = [&](double th) -> Mat2 {
    const double v = r * r + rp * rp + 2.0 * r * rp * std::cosh(th);
    // -|B| v / 4 - B r r' sinh(th) / 2, with cosh +- sinh combined so that no inf - inf occurs
    const double ex = -0.25 * aB * (r * r + rp * rp) - 0.5 * aB * r * rp * std::exp(pp.B > 0 ? th : -th);
    // v overflows only where the theta weight has already decayed
    if (ex < -700.0 || !std::isfinite(v)) return Mat2::Zero();
    Eigen::Matrix2d zt = zeta_core(v, pp);
    const cplx den = std::exp(cplx(th, dphi)) + 1.0;
    const cplx num = plus ? -std::exp(pp.nu * th) : std::exp(cplx((1.0 + pp.nu) * th, dphi));
    const double sv = std::sqrt(v);
    Mat2 m;
    m << zt(0, 0), std::exp(cplx(0, -phip)) * sv / (r * std::exp(-th) + rp) * zt(0, 1),
        std::exp(cplx(th, phi)) * sv / (r * std::exp(th) + rp) * zt(1, 0), std::exp(cplx(th, dphi)) * zt(1, 1);
    return pre * num / den * std::exp(ex) * m;
  };
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = integrate_line([&](double th) { return entry(th)(i, j); }, 1e-11);
  return out;
}

Mat2 flat_green(cplx z, cplx zp, const PlaneParams& pp) {
  const double dphi = branch_dphi(z, zp);
  double shift = 0.0;
  if (dphi < -kPi) shift = 2.0 * kPi;
  if (dphi > kPi) shift = -2.0 * kPi;
  return std::exp(-kI * pp.nu * (dphi + shift)) * flat_green_free(z, zp, pp) + flat_green_delta(z, zp, pp);
}

Mat2 flat_green_delta_double(cplx z, cplx zp, const PlaneParams& pp) {
  pp.validate();
  if (pp.B != 0.0 || pp.theta > 0) throw DomainError("flat_green_delta_double: B = 0, Theta = -pi/2 only");
  const double x = z.real(), y = z.imag(), xp = zp.real(), yp = zp.imag();
  if (!(y > 0.0 && yp > 0.0)) throw DomainError("flat_green_delta_double: needs 0 < arg z, arg z' < pi");
  const double lam = pp.lambda_hat(), cp = pp.c_plus(), nu = pp.nu;
  const double h = 0.04;
  auto range = [&](double yy) { return std::acosh(std::max(1.0, 45.0 / (lam * yy))) + 1.0; };
  const double T1 = range(y), T2 = range(yp);
  const int n1 = int(std::ceil(T1 / h)), n2 = int(std::ceil(T2 / h));
  std::vector<cplx> e1(2 * n1 + 1), e2(2 * n2 + 1);
  for (int i = -n1; i <= n1; ++i) {
    double t = i * h;
    e1[i + n1] = std::exp(-lam * cplx(y * std::cosh(t), x * std::sinh(t)));
  }
  for (int j = -n2; j <= n2; ++j) {
    double t = j * h;
    e2[j + n2] = std::exp(-lam * cplx(yp * std::cosh(t), xp * std::sinh(t)));
  }
  std::vector<Mat2> rows(2 * n1 + 1, Mat2::Zero());
  parallel_for(rows.size(), [&](std::size_t ii) {
    const double t1 = (int(ii) - n1) * h;
    Spinor a(std::exp(-0.5 * t1) / cp, kI * cp * std::exp(0.5 * t1));
    Mat2 acc = Mat2::Zero();
    for (int j = -n2; j <= n2; ++j) {
      const double t2 = j * h, sg = t1 - t2;
      const double k = std::exp((1.5 + nu) * sg - std::log1p(std::exp(sg)));
      Spinor b(std::exp(0.5 * t2) / cp, -kI * cp * std::exp(-0.5 * t2));
      acc += (e1[ii] * e2[j + n2] * k) * outer(a, b);
    }
    rows[ii] = acc;
  });
  Mat2 s = Mat2::Zero();
  for (auto& m : rows) s += m;
  const double dphi = std::arg(z) - std::arg(zp);
  return std::exp(-kI * nu * dphi) * lam * std::sin(kPi * nu) / (4.0 * kPi * kPi) * h * h * s;
}

double flat_form_factor(PlaneSide side, double p, double q, const PlaneParams& pp) {
  pp.validate();
  const double lam = pp.lambda_hat();
  if (pp.B == 0.0) {
    const double nu = pp.effective_nu();
    const double tp = rapidity(p, lam), tq = rapidity(q, lam), sg = tp + tq;
    const double sgn = side == PlaneSide::Plus ? -1.0 : 1.0;
    return 1.0 / (lam * std::sqrt(std::cosh(tp) * std::cosh(tq))) * std::sin(kPi * nu) / kPi *
           std::exp(sgn * (1.0 + nu) * sg) / (2.0 * std::cosh(0.5 * sg));
  }
  if (!(pp.B > 0.0 && p > 0.0 && q > 0.0 && side == PlaneSide::Plus && pp.theta < 0))
    throw DomainError("flat_form_factor: B != 0 supported only for B > 0, p, q > 0, side +, Theta = -pi/2");
  const double B = pp.B, nu = pp.nu, a = lam * lam / (2.0 * B);
  const double lpre = 0.5 * std::log(2.0 * B) + std::log(p * q / (B * B)) + (1.0 + a) * std::log(2.0) +
                      2.0 * std::lgamma(0.5 * a + 1.0) - 2.5 * std::log(2.0 * kPi);
  // phi, phi' in (0, pi): trapezoid (integrand vanishes to all orders at the ends); theta: trapezoid
  const int nphi = 96;
  const double hp = kPi / nphi, ht = 0.05;
  std::vector<double> acc_re(nphi - 1), acc_im(nphi - 1);
  parallel_for(nphi - 1, [&](std::size_t i) {
    const double f1 = (i + 1) * hp, s1 = std::sin(f1);
    cplx acc = 0.0;
    for (int j = 1; j < nphi; ++j) {
      const double f2 = j * hp, s2 = std::sin(f2), dphi = f1 - f2;
      const double A = p * p / (s1 * s1) + q * q / (s2 * s2), C = p * q / (s1 * s2);
      const double osc = -(p * p / std::tan(f1) - q * q / std::tan(f2)) / (2.0 * B);
      cplx sum = 0.0;
      for (double th = -80.0; th < 12.0; th += ht) {
        const double e = -(A + 2.0 * C * std::exp(th)) / (4.0 * B);
        if (e < -700.0) break;
        const double X = (A + 2.0 * C * std::cosh(th)) / (2.0 * B);
        const cplx w = std::exp(cplx((1.0 + nu) * th, (1.0 + nu) * dphi)) / (std::exp(cplx(th, dphi)) + 1.0);
        sum += w * kummer_u_scaled(a + 1.0, 1.0, X, e + lpre);
      }
      acc += sum * ht * std::exp(cplx(0.0, osc)) / (s1 * s1 * s2 * s2);
    }
    acc_re[i] = acc.real();
    acc_im[i] = acc.imag();
  });
  const double re = pairwise_sum(acc_re.data(), acc_re.size());
  return std::sin(kPi * nu) / kPi * re * hp * hp;
}

PlaneTauPoint tau_plane(double d, const PlaneParams& pp1, const PlaneParams& pp2, PlaneTauOptions opt) {
  pp1.validate();
  pp2.validate();
  if (pp1.B != 0.0 || pp2.B != 0.0) throw DomainError("tau_plane: only B = 0 is supported");
  if (pp1.m != pp2.m || pp1.E != pp2.E) throw DomainError("tau_plane: both vortices share m and E");
  if (!(d > 0.0)) throw DomainError("tau_plane: distance must be positive");
  const double lam = pp1.lambda_hat(), h = opt.h;
  const double tmax = std::acosh(std::max(1.0, opt.decay / (lam * d))) + 1.0;
  const int half = int(std::ceil(tmax / h)), n = 2 * half + 1;
  Eigen::VectorXd th(n), D(n), dD(n);
  for (int i = 0; i < n; ++i) {
    th(i) = (i - half) * h;
    D(i) = std::exp(-lam * d * std::cosh(th(i)));
    dD(i) = -lam * std::cosh(th(i)) * D(i);
  }
  const double n1 = pp1.effective_nu(), n2 = pp2.effective_nu();
  const double c1 = std::sin(kPi * n1) / kPi, c2 = std::sin(kPi * n2) / kPi;
  Eigen::MatrixXd a(n, n), b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double sg = th(i) + th(j), den = 2.0 * std::cosh(0.5 * sg);
      a(i, j) = h * c2 * std::exp((1.0 + n2) * sg) / den;
      b(i, j) = h * c1 * std::exp(-(1.0 + n1) * sg) / den;
    }
  Eigen::MatrixXd DaD = D.asDiagonal() * a * D.asDiagonal();
  Eigen::MatrixXd M = DaD * b;
  Eigen::MatrixXd dM = (dD.asDiagonal() * a * D.asDiagonal() + D.asDiagonal() * a * dD.asDiagonal()) * b;
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  auto lu = (I - M).partialPivLu();
  PlaneTauPoint pt;
  pt.d = d;
  pt.tau = lu.determinant();
  pt.dlntau_dd = -lu.solve(dM).trace();
  pt.trace1 = M.trace();
  pt.n_nodes = n;
  return pt;
}

PVCheck pv_sigma_check(const PlaneParams& pp1, const PlaneParams& pp2, const std::vector<double>& d_grid,
                       double d_seed) {
  for (double d : d_grid)
    if (!(d > 0.0 && d < d_seed)) throw DomainError("pv_sigma_check: grid must lie in (0, d_seed)");
  PVParams pv = pv_params(pp1.effective_nu(), pp2.effective_nu(), pp1.m, pp1.E, 0.0);
  PVCheck out;
  out.d_seed = d_seed;
  const double t0 = d_seed * d_seed;
  PlaneTauPoint s0 = tau_plane(d_seed, pp1, pp2);
  const double target = 0.5 * d_seed * s0.dlntau_dd;
  out.C2 = target / sigma_pv(pv_linear_seed(t0, 1.0, pv), pv);
  std::vector<double> ts;
  for (double d : d_grid) ts.push_back(d * d);
  std::vector<ODEState> st = pv_solve_from_infinity(pv, out.C2, t0, ts);
  std::vector<PlaneTauPoint> tp(d_grid.size());
  parallel_for(d_grid.size(), [&](std::size_t i) { tp[i] = tau_plane(d_grid[i], pp1, pp2); });
  for (std::size_t i = 0; i < d_grid.size(); ++i) {
    PVCheckRow r;
    r.d = d_grid[i];
    r.t = ts[i];
    r.y = st[i].w;
    r.yprime = st[i].wprime;
    r.sigma = sigma_pv(st[i], pv);
    r.t_dlntau_dt = 0.5 * r.d * tp[i].dlntau_dd;
    r.rel_err = std::abs(r.sigma - r.t_dlntau_dt) / std::abs(r.t_dlntau_dt);
    out.rows.push_back(r);
  }
  return out;
}

}  // namespace dvx
