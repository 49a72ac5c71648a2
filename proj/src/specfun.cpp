#include "dvortex/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_hyperg.h>

namespace dvx {

namespace {

bool is_nonpos_int(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// distance of a complex number from the nearest integer
double int_distance(cplx z) {
  return std::abs(z - std::round(z.real()));
}

struct GslInit {
  GslInit() { gsl_set_error_handler_off(); }
};
const GslInit gsl_init;

// Stirling series for Re w >= 12 or |w| >= 17.
cplx stirling(cplx w) {
  static const double coef[] = {1.0 / 12.0,   -1.0 / 360.0,         1.0 / 1260.0,    -1.0 / 1680.0,
                                1.0 / 1188.0, -691.0 / 360360.0,    1.0 / 156.0,     -3617.0 / 122400.0};
  cplx lw = std::log(w);
  cplx res = (w - 0.5) * lw - w + 0.5 * std::log(2.0 * kPi);
  cplx winv = 1.0 / w, w2 = winv * winv, pw = winv;
  for (double c : coef) {
    res += c * pw;
    pw *= w2;
  }
  return res;
}

cplx gamma_ratio(std::initializer_list<cplx> num, std::initializer_list<cplx> den) {
  cplx acc = 0.0;
  for (cplx d : den) {
    if (is_nonpos_int(d)) return 0.0;
    acc -= ln_gamma(d);
  }
  for (cplx n : num) acc += ln_gamma(n);
  return std::exp(acc);
}

using State = std::array<double, 4>;

}  // namespace

cplx ln_gamma(cplx z) {
  if (is_nonpos_int(z)) throw PoleError("ln_gamma: pole at non-positive integer");
  cplx w = z, shift = 0.0;
  while (w.real() < 12.0 && std::abs(w) < 17.0) {
    shift += std::log(w);
    w += 1.0;
  }
  while (w.real() < 0.5) {
    shift += std::log(w);
    w += 1.0;
  }
  return stirling(w) - shift;
}

double ln_gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw PoleError("ln_gamma: pole at non-positive integer");
  return std::lgamma(x);
}

cplx rgamma(cplx z) {
  if (is_nonpos_int(z)) return 0.0;
  return std::exp(-ln_gamma(z));
}

cplx gauss_2f1_series(cplx a, cplx b, cplx c, cplx z) {
  if (is_nonpos_int(c)) throw PoleError("gauss_2f1: c is a non-positive integer");
  cplx s = 1.0, t = 1.0;
  const double kmin = std::abs(a) + std::abs(b) + std::abs(c);
  int small = 0;
  for (int k = 0; k < 40000; ++k) {
    cplx num = (a + double(k)) * (b + double(k));
    if (num == 0.0) return s;
    t *= num / ((c + double(k)) * double(k + 1)) * z;
    s += t;
    if (std::abs(t) <= 1e-17 * std::abs(s) && k > kmin) {
      if (++small >= 2) return s;
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("gauss_2f1: series did not converge");
}

Hyp2f1Path gauss_2f1_path(cplx a, cplx b, cplx c, const std::vector<cplx>& path, double tol) {
  namespace ode = boost::numeric::odeint;
  if (path.empty() || std::abs(path.front()) > 0.5 + 1e-12)
    throw DomainError("gauss_2f1_path: path must start inside |z| <= 1/2");
  cplx z0 = path.front();
  cplx f = gauss_2f1_series(a, b, c, z0);
  cplx df = a * b / c * gauss_2f1_series(a + 1.0, b + 1.0, c + 1.0, z0);
  for (std::size_t seg = 1; seg < path.size(); ++seg) {
    cplx za = path[seg - 1], dz = path[seg] - za;
    auto rhs = [&](const State& y, State& dy, double t) {
      cplx z = za + t * dz;
      cplx F{y[0], y[1]}, D{y[2], y[3]};
      cplx D2 = (a * b * F - (c - (a + b + 1.0) * z) * D) / (z * (1.0 - z));
      cplx dF = D * dz, dD = D2 * dz;
      dy = {dF.real(), dF.imag(), dD.real(), dD.imag()};
    };
    State y{f.real(), f.imag(), df.real(), df.imag()};
    auto stepper = ode::make_controlled(tol * 1e-3, tol, ode::runge_kutta_fehlberg78<State>());
    ode::integrate_adaptive(stepper, rhs, y, 0.0, 1.0, 1e-3);
    f = {y[0], y[1]};
    df = {y[2], y[3]};
  }
  return {f, df};
}

namespace {

cplx principal_by_ode(cplx a, cplx b, cplx c, cplx z) {
  std::vector<cplx> path;
  if (z.imag() == 0.0 && z.real() > 1.0) {
    double side = std::signbit(z.imag()) ? -1.0 : 1.0;
    path = {0.4, cplx(1.0, 0.5 * side), z};
  } else {
    path = {0.4 * z / std::abs(z), z};
  }
  return gauss_2f1_path(a, b, c, path).value;
}

cplx principal(cplx a, cplx b, cplx c, cplx z) {
  if (is_nonpos_int(c)) throw PoleError("gauss_2f1: c is a non-positive integer");
  if (z == 0.0) return 1.0;
  if (is_nonpos_int(a) || is_nonpos_int(b)) return gauss_2f1_series(a, b, c, z);

  const double deg = 1e-4;
  const bool ok_cab = int_distance(c - a - b) > deg;
  const bool ok_ab = int_distance(a - b) > deg;
  const double inf = std::numeric_limits<double>::infinity();
  double r[6] = {std::abs(z),
                 std::abs(z / (z - 1.0)),
                 ok_cab ? std::abs(1.0 - z) : inf,
                 ok_ab ? 1.0 / std::abs(z) : inf,
                 ok_ab ? 1.0 / std::abs(1.0 - z) : inf,
                 ok_cab ? std::abs(1.0 - 1.0 / z) : inf};
  int best = 0;
  for (int i = 1; i < 6; ++i)
    if (r[i] < r[best]) best = i;
  if (r[best] > 0.75) return principal_by_ode(a, b, c, z);

  switch (best) {
    case 0:
      return gauss_2f1_series(a, b, c, z);
    case 1:
      return std::pow(1.0 - z, -a) * gauss_2f1_series(a, c - b, c, z / (z - 1.0));
    case 2: {
      cplx w = 1.0 - z;
      cplx t1 = gamma_ratio({c, c - a - b}, {c - a, c - b}) * gauss_2f1_series(a, b, a + b - c + 1.0, w);
      cplx t2 = std::pow(w, c - a - b) * gamma_ratio({c, a + b - c}, {a, b}) *
                gauss_2f1_series(c - a, c - b, c - a - b + 1.0, w);
      return t1 + t2;
    }
    case 3: {
      cplx mz = -z, w = 1.0 / z;
      cplx t1 = gamma_ratio({c, b - a}, {b, c - a}) * std::pow(mz, -a) *
                gauss_2f1_series(a, a - c + 1.0, a - b + 1.0, w);
      cplx t2 = gamma_ratio({c, a - b}, {a, c - b}) * std::pow(mz, -b) *
                gauss_2f1_series(b, b - c + 1.0, b - a + 1.0, w);
      return t1 + t2;
    }
    case 4: {
      cplx omz = 1.0 - z, w = 1.0 / omz;
      cplx t1 = gamma_ratio({c, b - a}, {b, c - a}) * std::pow(omz, -a) *
                gauss_2f1_series(a, c - b, a - b + 1.0, w);
      cplx t2 = gamma_ratio({c, a - b}, {a, c - b}) * std::pow(omz, -b) *
                gauss_2f1_series(b, c - a, b - a + 1.0, w);
      return t1 + t2;
    }
    default: {
      cplx w = 1.0 - 1.0 / z;
      cplx t1 = gamma_ratio({c, c - a - b}, {c - a, c - b}) * std::pow(z, -a) *
                gauss_2f1_series(a, a - c + 1.0, a + b - c + 1.0, w);
      cplx t2 = gamma_ratio({c, a + b - c}, {a, b}) * std::pow(1.0 - z, c - a - b) * std::pow(z, a - c) *
                gauss_2f1_series(c - a, 1.0 - a, c - a - b + 1.0, w);
      return t1 + t2;
    }
  }
}

}  // namespace

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z, Branch branch) {
  if (branch == Branch::Principal) return principal(a, b, c, z);

  if (z.imag() > 0.0 || (z.imag() == 0.0 && z.real() > 1.0)) return principal(a, b, c, cplx(z.real(), std::abs(z.imag())));
  if (z.imag() == 0.0 && !std::signbit(z.imag())) return principal(a, b, c, z);

  // lower half plane: add the continued discontinuity across (1, inf)
  cplx cab = c - a - b;
  if (is_nonpos_int(1.0 + cab)) {
    return gauss_2f1_path(a, b, c, {cplx(0.0, 0.4), cplx(1.5, 0.5), cplx(1.5, -0.5), z}).value;
  }
  cplx jump = 2.0 * kPi * kI * std::exp(ln_gamma(c)) * rgamma(a) * rgamma(b) * rgamma(1.0 + cab) *
              std::pow(z - 1.0, cab) * principal(c - a, c - b, 1.0 + cab, 1.0 - z);
  return principal(a, b, c, z) + jump;
}

cplx gauss_2f1_side(cplx a, cplx b, cplx c, double x, int side) {
  if (x <= 1.0) throw DomainError("gauss_2f1_side: x must exceed 1");
  return principal(a, b, c, cplx(x, side > 0 ? 0.0 : -0.0));
}

double kummer(KummerKind kind, double a, double b, double x) {
  if (x < 0.0) throw DomainError("kummer: x < 0");
  gsl_sf_result r;
  int status;
  if (kind == KummerKind::M) {
    if (b <= 0.0 && b == std::floor(b)) throw PoleError("kummer: b is a non-positive integer");
    if (x == 0.0) return 1.0;
    status = gsl_sf_hyperg_1F1_e(a, b, x, &r);
  } else {
    if (x == 0.0) {
      if (b >= 1.0) throw DomainError("kummer: U(a,b,0) diverges for b >= 1");
      return std::exp(ln_gamma(1.0 - b) - ln_gamma(a - b + 1.0));
    }
    status = gsl_sf_hyperg_U_e(a, b, x, &r);
  }
  if (status == GSL_EOVRFLW) throw std::overflow_error("kummer: overflow");
  if (status != GSL_SUCCESS) throw ConvergenceError(std::string("kummer: ") + gsl_strerror(status));
  return r.val;
}

namespace {

// U(a, b, x) e^{log_scale} from Gamma(a) U = int e^{-x t} t^{a-1} (1+t)^{b-a-1} dt, t = e^s.
// For b <= a + 1 the exponent is concave in s, so a trapezoid rule around the peak converges fast.
double kummer_u_integral(double a, double b, double x, double log_scale) {
  const double c = b - a - 1.0;
  auto phi = [&](double s) { return -x * std::exp(s) + a * s + c * std::log1p(std::exp(s)); };
  auto dphi = [&](double s) { return -x * std::exp(s) + a + c / (1.0 + std::exp(-s)); };
  double lo = -50.0, hi = 50.0;
  while (dphi(lo) < 0.0) lo *= 2.0;
  while (dphi(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    (dphi(mid) > 0.0 ? lo : hi) = mid;
  }
  const double s0 = 0.5 * (lo + hi), p0 = phi(s0), e0 = std::exp(s0);
  const double curv = x * e0 - c * e0 / ((1.0 + e0) * (1.0 + e0));
  const double h = 0.125 / std::sqrt(std::max(curv, 1e-300));
  double sum = 1.0;
  for (int dir : {-1, 1})
    for (int k = 1; k < 100000; ++k) {
      double d = phi(s0 + dir * k * h) - p0;
      if (d < -45.0) break;
      sum += std::exp(d);
    }
  return std::exp(p0 + std::log(sum * h) - std::lgamma(a) + log_scale);
}

}  // namespace

double kummer_u_scaled(double a, double b, double x, double log_scale) {
  if (!(x > 0.0)) throw DomainError("kummer_u_scaled: x must be positive");
  // far asymptotic region, where the GSL iteration can stall: x^{-a} sum (a)_n (a-b+1)_n / n! (-x)^{-n}
  const double c = a - b + 1.0;
  if (x > 1e6 * (1.0 + std::abs(a * c))) {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 3; ++n) {
      term *= -(a + n) * (c + n) / ((n + 1) * x);
      sum += term;
    }
    return std::copysign(std::exp(-a * std::log(x) + std::log(std::abs(sum)) + log_scale), sum);
  }
  gsl_sf_result_e10 r;
  int status = gsl_sf_hyperg_U_e10_e(a, b, x, &r);
  if (status != GSL_SUCCESS && a > 0.0 && b <= a + 1.0) return kummer_u_integral(a, b, x, log_scale);
  if (status != GSL_SUCCESS) throw ConvergenceError(std::string("kummer_u_scaled: ") + gsl_strerror(status));
  if (r.val == 0.0) return 0.0;
  double lv = std::log(std::abs(r.val)) + r.e10 * std::log(10.0) + log_scale;
  return std::copysign(std::exp(lv), r.val);
}

double parabolic_d(double nu, double x) {
  if (std::abs(nu) > 50.0 || std::abs(x) > 50.0) throw DomainError("parabolic_d: outside |order|,|x| <= 50");
  const double h = 0.5 * x * x;
  if (x == 0.0) return std::pow(2.0, 0.5 * nu) * std::sqrt(kPi) * std::real(rgamma(0.5 * (1.0 - nu)));
  if (x > 0.0) return std::pow(2.0, 0.5 * nu) * std::exp(-0.25 * x * x) * kummer(KummerKind::U, -0.5 * nu, 0.5, h);
  // x < 0: Kummer-transformed even/odd decomposition, growing factor kept explicit
  gsl_sf_result m1, m2;
  if (gsl_sf_hyperg_1F1_e(0.5 + 0.5 * nu, 0.5, -h, &m1) != GSL_SUCCESS ||
      gsl_sf_hyperg_1F1_e(1.0 + 0.5 * nu, 1.5, -h, &m2) != GSL_SUCCESS)
    throw ConvergenceError("parabolic_d: Kummer evaluation failed");
  double even = std::sqrt(kPi) * std::real(rgamma(0.5 * (1.0 - nu))) * m1.val;
  double odd = std::sqrt(2.0 * kPi) * x * std::real(rgamma(-0.5 * nu)) * m2.val;
  double v = std::pow(2.0, 0.5 * nu) * std::exp(0.25 * x * x) * (even - odd);
  if (!std::isfinite(v)) throw DomainError("parabolic_d: overflow");
  return v;
}

double bessel_k(double order, double x) {
  if (x <= 0.0) throw DomainError("bessel_k: x must be positive");
  return std::cyl_bessel_k(std::abs(order), x);
}

}  // namespace dvx
