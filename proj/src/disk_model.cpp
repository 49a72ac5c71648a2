#include "dvortex/disk_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "dvortex/quad.hpp"

namespace dvx {

namespace {

double f21(double a, double b, double c, double x) { return gauss_2f1(a, b, c, x).real(); }
double rgam(double x) { return rgamma(cplx(x, 0.0)).real(); }

// Psi_s with L1 = log(1 + z e^{-theta}), L2 = log(1 + zbar e^{theta}) supplied by the caller,
// lpre = log(1 - |z|^2), extra = log of a scalar prefactor.
Spinor horo_core(int s, bool hat, cplx L1, cplx L2, cplx theta, double lpre, cplx extra, const DerivedParams& d) {
  const double mu = s * d.mu, b = d.b;
  const double C = s > 0 ? d.c_plus : d.c_minus;
  const cplx base = extra + 0.5 * (1.0 + 2.0 * mu) * lpre;
  const cplx A = hat ? L2 : L1, B = hat ? L1 : L2;
  const cplx half = hat ? -0.5 * theta : 0.5 * theta;
  Spinor out;
  out(0) = std::exp(base - half - (1.0 + mu - b) * A - (mu + b) * B) / C;
  out(1) = double(s) * C * std::exp(base + half - (mu - b) * A - (1.0 + mu + b) * B);
  return out;
}

Spinor horo_generic(int s, bool hat, cplx z, cplx theta, cplx extra, const DerivedParams& d) {
  const cplx L1 = std::log(1.0 + z * std::exp(-theta));
  const cplx L2 = std::log(1.0 + std::conj(z) * std::exp(theta));
  return horo_core(s, hat, L1, L2, theta, std::log1p(-std::norm(z)), extra, d);
}

struct C0Node {
  cplx theta;
  double w;
  cplx L1, L2;
};

// Nodes on C0(z): theta = t + i(phi + pi), t from ln r to -ln r; 1 + z e^{-theta} and
// 1 + zbar e^{theta} are 1 - e^{-dl} and 1 - e^{-dr} there.
std::vector<C0Node> c0_nodes(cplx z, double h) {
  const double r = std::abs(z), phi = std::arg(z), a = std::log(r);
  EndpointRule rule = tanh_sinh_rule(a, -a, h, 4.5);
  std::vector<C0Node> nodes;
  nodes.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double l1 = std::log(-std::expm1(-rule.dl[i])), l2 = std::log(-std::expm1(-rule.dr[i]));
    nodes.push_back({cplx(rule.nodes[i], phi + kPi), rule.weights[i], cplx(l1, 0.0), cplx(l2, 0.0)});
  }
  return nodes;
}

template <class F>
auto refine_h(F&& eval, double rel_tol) {
  double h = 1.0 / 8;
  auto prev = eval(h);
  for (int k = 0; k < 5; ++k) {
    h *= 0.5;
    auto cur = eval(h);
    double scale = std::max(1e-300, cur.cwiseAbs().maxCoeff());
    if ((cur - prev).cwiseAbs().maxCoeff() < rel_tol * scale) return cur;
    prev = cur;
  }
  throw ConvergenceError("contour quadrature did not converge");
}

void check_disk_point(cplx z, const char* who) {
  double r = std::abs(z);
  if (!(r > 0.0 && r < 1.0)) throw DomainError(std::string(who) + ": need 0 < |z| < 1");
}

}  // namespace

void ModelParams::validate() const {
  if (!(R > 0.0)) throw DomainError("ModelParams: R must be positive");
  if (!(m > 0.0)) throw DomainError("ModelParams: m must be positive");
  if (!(std::abs(E) < m)) throw DomainError("ModelParams: need |E| < m");
  if (!(nu > -1.0 && nu <= 0.0)) throw DomainError("ModelParams: need -1 < nu <= 0");
  if (!std::isfinite(b) || !std::isfinite(theta)) throw DomainError("ModelParams: non-finite b or theta");
}

DerivedParams derive(const ModelParams& p) {
  p.validate();
  DerivedParams d;
  d.R = p.R;
  d.m = p.m;
  d.E = p.E;
  d.b = p.b;
  d.mu = 0.5 * std::sqrt((p.m * p.m - p.E * p.E) * p.R * p.R + 4.0 * p.b * p.b);
  double e = std::pow((p.m - p.E) / (p.m + p.E), 0.25);
  double q = std::pow((d.mu + p.b) / (d.mu - p.b), 0.25);
  d.c_plus = e * q;
  d.c_minus = e / q;
  return d;
}

RadialBasis radial_basis(double l, double r, const DerivedParams& d) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("radial_basis: need 0 < r < 1");
  const double mu = d.mu, b = d.b, C = d.c_plus, x = 1.0 - r * r, c = 1.0 + 2.0 * mu;
  const double pre = std::pow(x, 0.5 * c);
  const double N = std::sqrt(mu * mu - b * b) / (2.0 * mu) *
                   std::exp(ln_gamma(mu - b) + ln_gamma(mu + b) - ln_gamma(2.0 * mu)) * pre;
  RadialBasis w;
  w.wI << N / C * std::pow(r, -l) * f21(mu - b + 1.0, mu + b - l, c, x),
      N * C * std::pow(r, -l - 1.0) * f21(mu - b, mu + b - l, c, x);
  w.wI_alt << N / C * std::pow(r, l) * f21(mu + b, mu - b + 1.0 + l, c, x),
      N * C * std::pow(r, l + 1.0) * f21(mu + b + 1.0, mu - b + 1.0 + l, c, x);
  const double y = r * r;
  if (l > -1.0) {
    double g = ln_gamma(mu - b + 1.0 + l);
    double d1 = std::exp(g - ln_gamma(1.0 + l) - ln_gamma(mu - b + 1.0));
    double d2 = -std::exp(g - ln_gamma(2.0 + l) - ln_gamma(mu - b));
    Spinor v;
    v << d1 * pre / C * std::pow(r, l) * f21(mu + b, mu - b + 1.0 + l, 1.0 + l, y),
        d2 * pre * C * std::pow(r, l + 1.0) * f21(mu + b + 1.0, mu - b + 1.0 + l, 2.0 + l, y);
    w.wII_plus = v;
  }
  if (l < 0.0) {
    double g = ln_gamma(mu + b - l);
    double d1 = std::exp(g - ln_gamma(1.0 - l) - ln_gamma(mu + b));
    double d2 = -std::exp(g - ln_gamma(-l) - ln_gamma(mu + b + 1.0));
    Spinor v;
    v << d1 * pre / C * std::pow(r, -l) * f21(mu - b + 1.0, mu + b - l, 1.0 - l, y),
        d2 * pre * C * std::pow(r, -l - 1.0) * f21(mu - b, mu + b - l, -l, y);
    w.wII_minus = v;
  }
  return w;
}

double radial_wronskian(double r, const DerivedParams& d) {
  return -(1.0 - r * r) / (r * std::sqrt(d.mu * d.mu - d.b * d.b));
}

double eta_of_theta(double theta, double l, const DerivedParams& d) {
  if (!(l > -1.0 && l < 0.0)) throw DomainError("eta_of_theta: need l in (-1, 0)");
  const double mu = d.mu, b = d.b, X = 0.5 * theta + 0.25 * kPi;
  // w^(II,+) ~ a_p C^{-1} r^l (upper), w^(II,-) ~ -a_m C r^{-l-1} (lower) as r -> 0
  double ratio = std::exp(ln_gamma(mu - b + 1.0 + l) + ln_gamma(-l) + ln_gamma(mu + b + 1.0) -
                          ln_gamma(1.0 + l) - ln_gamma(mu - b + 1.0) - ln_gamma(mu + b - l));
  double num = std::cos(X) * std::pow(d.m * d.R, -1.0 - 2.0 * l) * ratio;
  double den = std::sin(X) * d.c_plus * d.c_plus;
  return std::atan2(num, den);
}

double theta_of_gamma(double gamma, double l, const DerivedParams& d) {
  if (!(l > -1.0 && l < 0.0)) throw DomainError("theta_of_gamma: need l in (-1, 0)");
  const double b = d.b, mR = d.m * d.R;
  const double mt = 0.5 * std::sqrt(2.0 * mR * mR + 4.0 * b * b);
  double g = std::exp(ln_gamma(-l) - ln_gamma(1.0 + l) + ln_gamma(mt + b + 1.0) + ln_gamma(mt - b + l + 1.0) -
                      ln_gamma(mt - b + 1.0) - ln_gamma(mt + b - l));
  double rhs = std::pow(2.0, -l) / (std::tan(0.5 * gamma - kPi / 8) - 1.0) * g * std::sqrt((mt - b) / (mt + b)) *
               std::pow(mR / std::sqrt(2.0), -1.0 - 2.0 * l);
  return 2.0 * std::atan(rhs) - 0.5 * kPi;
}

Mat2 radial_green(double l, double r, double rp, const DerivedParams& d, double theta) {
  if (r == rp) throw DomainError("radial_green: r = r' is the jump point");
  if (!(rp > 0.0 && rp < 1.0)) throw DomainError("radial_green: need 0 < r' < 1");
  RadialBasis w1 = radial_basis(l, r, d), w2 = radial_basis(l, rp, d);
  double A = 0.5 * d.lambda();
  Spinor a, ap;
  if (l > -1.0 && l < 0.0) {
    double eta = eta_of_theta(theta, l, d);
    a = std::cos(eta) * *w1.wII_plus + std::sin(eta) * *w1.wII_minus;
    ap = std::cos(eta) * *w2.wII_plus + std::sin(eta) * *w2.wII_minus;
    A /= std::sqrt(2.0) * std::sin(eta + 0.25 * kPi);
  } else if (l >= 0.0) {
    a = *w1.wII_plus;
    ap = *w2.wII_plus;
  } else {
    a = *w1.wII_minus;
    ap = *w2.wII_minus;
  }
  return r < rp ? Mat2(A * outer(a, w2.wI)) : Mat2(A * outer(w1.wI, ap));
}

double l0_condition(double E, const ModelParams& p) {
  const double R = p.R, m = p.m, b = p.b, nu = p.nu;
  const double mu = 0.5 * std::sqrt((m * m - E * E) * R * R + 4.0 * b * b);
  const double X = 0.5 * p.theta + 0.25 * kPi;
  const double G = std::tgamma(nu + 1.0) * rgam(-nu) * std::pow(2.0, 1.0 + 2.0 * nu);
  // multiplied through by cos X / Gamma(mu - b + nu + 1): finite at Theta = pi/2 and at the
  // poles of the printed left-hand side
  double lhs = 0.5 * (m + E) * R * std::pow(2.0 / (m * R), 1.0 + 2.0 * nu) * std::tgamma(mu + b) *
               rgam(mu - b + 1.0) * rgam(mu + b - nu);
  return std::cos(X) * lhs + std::sin(X) * G * rgam(mu - b + nu + 1.0);
}

SpectrumReport spectrum(const ModelParams& p) {
  p.validate();
  SpectrumReport rep;
  const double R = p.R, m = p.m, b = p.b, ab = std::abs(b), nu = p.nu, k = 4.0 / (R * R);
  rep.continuum_edge = m * m + k * b * b;
  for (int n = 1; n < ab; ++n)
    rep.landau.push_back({n, m * m + k * (b * b - (ab - n) * (ab - n)), b > 0 ? "-1,-2,..." : "1,2,..."});
  if (b > 0) {
    std::vector<int> ns;
    for (int n = 1; n < b - (1.0 + nu); ++n) ns.push_back(n);
    std::string l0 = ns.empty() ? "" : "1.." + std::to_string(ns.back());
    for (int n : ns) {
      double s = b - n - (1.0 + nu);
      rep.vortex_levels.push_back({n, m * m + k * (b * b - s * s), +1, l0});
    }
  } else if (b < 0) {
    std::vector<int> ns;
    for (int n = 1; n < ab + nu; ++n) ns.push_back(n);
    std::string l0 = ns.empty() ? "" : "-1..-" + std::to_string(ns.back());
    for (int n : ns) {
      double s = ab - n + nu;
      rep.vortex_levels.push_back({n, m * m + k * (b * b - s * s), -1, l0});
    }
  }

  const double Emax = std::sqrt(rep.continuum_edge);
  const int N = 4000;
  auto f = [&](double E) { return l0_condition(E, p); };
  double e0 = -Emax * (1.0 - 1e-9), f0 = f(e0);
  for (int i = 1; i <= N; ++i) {
    double e1 = -Emax * (1.0 - 1e-9) + 2.0 * Emax * (1.0 - 1e-9) * i / N, f1 = f(e1);
    if (std::isfinite(f0) && std::isfinite(f1)) {
      if (f0 == 0.0) {
        rep.l0_roots.push_back({e0, 0.0});
      } else if (f0 * f1 < 0.0) {
        boost::uintmax_t it = 200;
        auto br = boost::math::tools::toms748_solve(f, e0, e1, f0, f1, boost::math::tools::eps_tolerance<double>(52),
                                                    it);
        double E = 0.5 * (br.first + br.second);
        double res = std::abs(f(E));
        if (res < 1e-6) rep.l0_roots.push_back({E, res});
      }
    }
    e0 = e1;
    f0 = f1;
  }
  return rep;
}

Spinor horocyclic(int sign, bool hat, cplx z, cplx theta, const DerivedParams& d) {
  if (sign != 1 && sign != -1) throw DomainError("horocyclic: sign must be +1 or -1");
  if (!(std::abs(z) < 1.0)) throw DomainError("horocyclic: need |z| < 1");
  return horo_generic(sign, hat, z, theta, 0.0, d);
}

Spinor contour_radial(double l, cplx z, RadialKind kind, bool hat, const DerivedParams& d) {
  check_disk_point(z, "contour_radial");
  const double lh = hat ? -(l + 0.5) : (l + 0.5);
  if (kind == RadialKind::I) {
    auto eval = [&](double h) {
      Spinor s = Spinor::Zero();
      for (const auto& n : c0_nodes(z, h))
        s += n.w * horo_core(-1, hat, n.L1, n.L2, n.theta, std::log1p(-std::norm(z)), lh * n.theta, d);
      return s;
    };
    return refine_h(eval, 1e-12);
  }
  // loops around the left cut (C+) or right cut (C-), squeezed to Im theta = phi + pi -+ delta
  const bool plus = kind == RadialKind::IIplus;
  const bool left = hat ? !plus : plus;
  const double sgn = plus ? (hat ? -1.0 : 1.0) : (hat ? 1.0 : -1.0);
  const double r = std::abs(z), phi = std::arg(z), delta = 0.5 * kPi;
  const double mu = d.mu, b = d.b;
  double kappa = (left != hat) ? l + 1.0 + mu - b : mu + b - l;
  if (!(kappa > 0.0)) throw DomainError("contour_radial: loop integral diverges for this l");
  const double T = std::min(40.0 / kappa + 2.0 * std::abs(std::log(r)), 400.0);
  auto f = [&](cplx th) { return horo_generic(+1, hat, z, th, lh * th, d); };
  Spinor out;
  for (int c = 0; c < 2; ++c) {
    auto lower = [&](double t) { return f(cplx(t, phi + kPi - delta))(c); };
    auto upper = [&](double t) { return f(cplx(t, phi + kPi + delta))(c); };
    auto vert = [&](double tau) { return kI * f(cplx(0.0, phi + kPi + tau))(c); };
    cplx v;
    if (left)
      v = integrate(lower, -T, 0.0, 1e-13) + integrate(vert, -delta, delta, 1e-13) - integrate(upper, -T, 0.0, 1e-13);
    else
      v = integrate(lower, 0.0, T, 1e-13) - integrate(upper, 0.0, T, 1e-13) - integrate(vert, -delta, delta, 1e-13);
    out(c) = sgn * v;
  }
  return out;
}

Spinor contour_radial_expected(double l, cplx z, RadialKind kind, bool hat, const DerivedParams& d) {
  check_disk_point(z, "contour_radial_expected");
  const double r = std::abs(z), phi = std::arg(z), s = hat ? -1.0 : 1.0;
  RadialBasis w = radial_basis(l, r, d);
  Spinor v;
  cplx pre = std::exp(s * kI * kPi * l);
  if (kind == RadialKind::I) {
    v = w.wI;
  } else {
    auto& o = kind == RadialKind::IIplus ? w.wII_plus : w.wII_minus;
    if (!o) throw DomainError("contour_radial_expected: w^(II) not defined for this l");
    v = *o;
    pre *= 2.0 * kPi * kI;
  }
  v(0) *= pre * std::exp(s * kI * l * phi);
  v(1) *= pre * std::exp(s * kI * (l + 1.0) * phi);
  return v;
}

double u_invariant(cplx z, cplx zp) { return std::norm(zp - z) / std::norm(1.0 - std::conj(z) * zp); }

cplx su11_map(cplx alpha, cplx beta, cplx z) { return (alpha * z + beta) / (std::conj(beta) * z + std::conj(alpha)); }

namespace {

// zeta(u) without the 1/(2 pi R) prefactor's dependence on the point pair
Mat2 zeta_disk(double u, const DerivedParams& d) {
  const double mu = d.mu, b = d.b, C2 = d.c_plus * d.c_plus, x = 1.0 - u, c = 1.0 + 2.0 * mu;
  const double pre = std::exp(ln_gamma(mu - b + 1.0) + ln_gamma(mu + b + 1.0) - ln_gamma(c)) / (2.0 * kPi * d.R) *
                     std::pow(x, 0.5 * c);
  const double off = f21(mu - b, mu + b, c, x);
  Mat2 z;
  z << f21(mu - b + 1.0, mu + b, c, x) / C2, off, off, C2 * f21(mu - b, mu + b + 1.0, c, x);
  return pre * z;
}

double branch_dphi(cplx z, cplx zp) {
  double dphi = std::arg(z) - std::arg(zp);
  if (std::abs(std::abs(dphi) - kPi) < 1e-6) throw DomainError("green_disk: phi - phi' too close to +-pi");
  return dphi;
}

// e^{(3/2 + nu) w} / (e^w - 1)
cplx delta_kernel(cplx w, double nu) {
  if (w.real() > 0.0) return std::exp((0.5 + nu) * w) / (1.0 - std::exp(-w));
  return std::exp((1.5 + nu) * w) / (std::exp(w) - 1.0);
}

}  // namespace

Mat2 green_disk_free(cplx z, cplx zp, const DerivedParams& d) {
  if (!(std::abs(z) < 1.0 && std::abs(zp) < 1.0)) throw DomainError("green_disk_free: points must lie in the disk");
  if (z == zp) throw DomainError("green_disk_free: coincident points");
  const cplx w = 1.0 - std::conj(z) * zp;
  const double aw = std::arg(w), mw = std::abs(w);
  Mat2 zt = zeta_disk(u_invariant(z, zp), d);
  const cplx rb = std::exp(-2.0 * kI * d.b * aw), rh = std::exp(kI * aw);
  Mat2 G;
  G << rh * zt(0, 0), mw / (zp - z) * zt(0, 1), -mw / (std::conj(zp) - std::conj(z)) * zt(1, 0), -zt(1, 1) / rh;
  return rb * G;
}

Mat2 green_disk_delta(cplx z, cplx zp, const ModelParams& p) {
  check_disk_point(z, "green_disk_delta");
  check_disk_point(zp, "green_disk_delta");
  const DerivedParams d = derive(p);
  if (p.nu == 0.0) return Mat2::Zero();
  const double dphi = branch_dphi(z, zp);
  const double r = std::abs(z), rp = std::abs(zp), phi = std::arg(z), phip = std::arg(zp), rr = r * rp;
  const bool plus = p.theta > 0.0;
  const double nu = p.nu;
  const cplx eph = std::exp(kI * dphi);
  auto f = [&](double th) -> Eigen::VectorXcd {
    // weight e^{(1+nu) th + i dphi}/(e^{th + i dphi} + 1), or -e^{nu th}/(...) for Theta = +pi/2
    cplx wgt;
    if (th > 0.0) {
      cplx den = 1.0 + std::exp(-th) / eph;
      wgt = plus ? -std::exp((nu - 1.0) * th) / eph / den : std::exp(nu * th) / den;
    } else {
      cplx den = std::exp(th) * eph + 1.0;
      wgt = plus ? -std::exp(nu * th) / den : std::exp((1.0 + nu) * th) * eph / den;
    }
    const double ch = std::cosh(th);
    const double D = 1.0 + rr * rr + 2.0 * rr * ch;
    const double v = (r * r + rp * rp + 2.0 * rr * ch) / D;
    const double lq = std::log1p(rr * std::exp(th)) - std::log1p(rr * std::exp(-th));
    const double S = std::sqrt(D);
    Mat2 zt = zeta_disk(v, d);
    Eigen::VectorXcd out(4);
    const double qb = std::exp(-p.b * lq);
    out(0) = qb * std::exp(0.5 * lq) * zt(0, 0);
    out(1) = qb * S / (r * std::exp(-th) + rp) * std::exp(-kI * phip) * zt(0, 1);
    out(2) = qb * S / (r * std::exp(th) + rp) * std::exp(th + kI * phi) * zt(1, 0);
    out(3) = qb * std::exp(th - 0.5 * lq) * eph * zt(1, 1);
    return wgt * out;
  };
  Eigen::VectorXcd I = integrate_line_vec(f, 1e-11, 6.0);
  Mat2 M;
  M << I(0), I(1), I(2), I(3);
  return std::sin(kPi * nu) / kPi * M;
}

Mat2 green_disk(cplx z, cplx zp, const ModelParams& p) {
  const DerivedParams d = derive(p);
  if (!(p.theta == -0.5 * kPi || p.theta == 0.5 * kPi))
    throw DomainError("green_disk: only Theta = -pi/2 and +pi/2 are supported");
  return vortex_phase(z, zp, p.nu) * green_disk_free(z, zp, d) + green_disk_delta(z, zp, p);
}

cplx vortex_phase(cplx z, cplx zp, double nu) {
  const double dphi = branch_dphi(z, zp);
  double shift = 0.0;
  if (dphi > kPi) shift = -2.0 * kPi;
  if (dphi < -kPi) shift = 2.0 * kPi;
  return std::exp(-kI * nu * (dphi + shift));
}

Mat2 green_disk_free_contour(cplx z, cplx zp, const DerivedParams& d, int version) {
  check_disk_point(z, "green_disk_free_contour");
  check_disk_point(zp, "green_disk_free_contour");
  if (version != 1 && version != 2) throw DomainError("green_disk_free_contour: version must be 1 or 2");
  const cplx zc = version == 1 ? z : zp;  // point whose C0 carries the endpoint singularities
  const double lz = std::log1p(-std::norm(zc));
  auto eval = [&](double h) {
    Mat2 G = Mat2::Zero();
    for (const auto& n : c0_nodes(zc, h)) {
      if (version == 1)
        G += n.w * outer(horo_core(-1, false, n.L1, n.L2, n.theta, lz, 0.0, d), horocyclic(+1, true, zp, n.theta, d));
      else
        G += n.w * outer(horocyclic(+1, false, z, n.theta, d), horo_core(-1, true, n.L1, n.L2, n.theta, lz, 0.0, d));
    }
    return G;
  };
  return d.lambda() / (4.0 * kPi) * refine_h(eval, 1e-12);
}

Mat2 green_disk_delta_contour(cplx z, cplx zp, const ModelParams& p, int version) {
  check_disk_point(z, "green_disk_delta_contour");
  check_disk_point(zp, "green_disk_delta_contour");
  if (version != 1 && version != 2) throw DomainError("green_disk_delta_contour: version must be 1 or 2");
  const DerivedParams d = derive(p);
  if (p.nu == 0.0) return Mat2::Zero();
  const double dphi = branch_dphi(z, zp);
  // Theta = +pi/2: nu -> nu - 1 inside the double integral
  const double nk = p.theta > 0.0 ? p.nu - 1.0 : p.nu;
  const double mu = d.mu, b = d.b;
  const cplx zc = version == 1 ? z : zp;   // carries C0
  const cplx zl = version == 1 ? zp : z;   // carries the line Im theta_2 = arg(zl)
  const double lz = std::log1p(-std::norm(zc));
  const double ln_r = std::abs(std::log(std::abs(zc))) + std::abs(std::log(std::abs(zl)));
  // decay of the line integrand: rate mu + b - nu on one side, 2 + mu - b + nu on the other
  const double k1 = mu + b - nk, k2 = 2.0 + mu - b + nk;
  if (!(k1 > 0.0 && k2 > 0.0)) throw DomainError("green_disk_delta_contour: line integral diverges");
  const double S = 40.0 / std::min(k1, k2) + ln_r;
  auto eval = [&](double h) {
    const double hs = std::min(0.1, h);
    std::vector<cplx> th2;
    std::vector<Spinor> psi2;
    for (double s = -S; s <= S; s += hs) {
      cplx t2(s, std::arg(zl));
      th2.push_back(t2);
      psi2.push_back(version == 1 ? horocyclic(+1, true, zl, t2, d) : horocyclic(+1, false, zl, t2, d));
    }
    Mat2 G = Mat2::Zero();
    for (const auto& n : c0_nodes(zc, h)) {
      Spinor inner = Spinor::Zero();
      for (std::size_t j = 0; j < th2.size(); ++j) {
        cplx k = version == 1 ? delta_kernel(n.theta - th2[j], nk) : -delta_kernel(th2[j] - n.theta, nk);
        inner += hs * k * psi2[j];
      }
      Spinor pc = horo_core(-1, version == 2, n.L1, n.L2, n.theta, lz, 0.0, d);
      G += version == 1 ? Mat2(n.w * outer(pc, inner)) : Mat2(n.w * outer(inner, pc));
    }
    return G;
  };
  const cplx pre = version == 1 ? (1.0 - std::exp(-2.0 * kPi * kI * nk)) : (1.0 - std::exp(2.0 * kPi * kI * nk));
  return d.lambda() * std::exp(-kI * p.nu * dphi) * pre / (8.0 * kI * kPi * kPi) * refine_h(eval, 1e-10);
}

}  // namespace dvx
