#include "dvortex/painleve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "dvortex/specfun.hpp"

namespace odeint = boost::numeric::odeint;

namespace dvx {

namespace {

using State = std::array<double, 2>;
constexpr double kGuard = 1e-10;

}  // namespace

PVIParams pvi_params(double nu1, double nu2, double b, double mu) {
  PVIParams p;
  p.lambda_ = nu2 - nu1;
  p.lambda_tilde = 2.0 + nu1 + nu2 - 2.0 * b;
  p.mu = mu;
  p.alpha = 0.5 * p.lambda_ * p.lambda_;
  p.beta = -0.5 * (p.lambda_tilde - 1.0) * (p.lambda_tilde - 1.0);
  p.gamma = 0.0;
  p.delta = 0.5 * (1.0 - 4.0 * mu * mu);
  return p;
}

PVIParams pvi_params_gauge(double nu1, double nu2, double b, double mu, double c) {
  return pvi_params(nu1 + c, nu2 + c, b + c, mu);
}

double pvi_rhs(const ODEState& st, const PVIParams& p) {
  const double s = st.s, w = st.w, wp = st.wprime;
  if (!(s > 0.0 && s < 1.0)) throw DomainError("pvi_rhs: s must lie in (0, 1)");
  if (std::min({std::abs(w), std::abs(w - 1.0), std::abs(w - s)}) < kGuard)
    throw SingularityError("pvi_rhs: w too close to 0, 1 or s", st);
  double kin = 0.5 * (1.0 / w + 1.0 / (w - 1.0) + 1.0 / (w - s)) * wp * wp;
  double fric = (1.0 / s + 1.0 / (s - 1.0) + 1.0 / (w - s)) * wp;
  double pot = w * (w - 1.0) * (w - s) / (s * s * (s - 1.0) * (s - 1.0)) *
               (p.alpha + p.beta * s / (w * w) + p.gamma * (s - 1.0) / ((w - 1.0) * (w - 1.0)) +
                p.delta * s * (s - 1.0) / ((w - s) * (w - s)));
  return kin - fric + pot;
}

double pvi_rhs_reflected(double x, double v, double vp, const PVIParams& p) {
  const double s = 1.0 - x, w = 1.0 - v, xv = x - v;
  if (std::min({std::abs(v), std::abs(w), std::abs(xv)}) < kGuard)
    throw SingularityError("pvi_rhs: w too close to 0, 1 or s", ODEState{s, w, vp});
  double r = 0.5 * (1.0 / w - 1.0 / v + 1.0 / xv) * vp * vp - (1.0 / s - 1.0 / x + 1.0 / xv) * vp -
             w * v * xv / (s * s * x * x) *
                 (p.alpha + p.beta * s / (w * w) - p.gamma * x / (v * v) - p.delta * s * x / (xv * xv));
  return -r;
}

std::vector<ODEState> pvi_solve_from_one(const PVIParams& p, double A, double s_end,
                                         const std::vector<double>& s_out, PVISolveOptions opt) {
  if (!(p.mu > 0.5))
    throw DomainError("pvi_solve_from_one: the s -> 1 seed is valid only for mu > 1/2");
  const double x0 = opt.one_minus_s0;
  if (!(s_end < 1.0 - x0) || !(s_end > 0.0)) throw DomainError("pvi_solve_from_one: need 0 < s_end < s0");
  for (double s : s_out)
    if (s < s_end || s > 1.0 - x0) throw DomainError("pvi_solve_from_one: output point outside [s_end, s0]");

  std::vector<double> xs;
  for (double s : s_out) xs.push_back(1.0 - s);

  // degenerate orbit w = 1
  if (A == 0.0) {
    std::vector<ODEState> out;
    for (double s : s_out) out.push_back({s, 1.0, 0.0});
    return out;
  }

  const double k = 1.0 + 2.0 * p.mu;
  const double a1 = opt.subleading_seed ? (p.alpha + p.beta - p.delta + k) / k : 0.0;
  State y{A * std::pow(x0, k) * (1.0 + a1 * x0), A * std::pow(x0, k - 1.0) * (k + (k + 1.0) * a1 * x0)};

  auto sys = [&](const State& u, State& du, double x) {
    du[0] = u[1];
    du[1] = pvi_rhs_reflected(x, u[0], u[1], p);
  };
  std::vector<std::pair<double, State>> rec;
  ODEState last{1.0 - x0, 1.0 - y[0], y[1]};
  auto obs = [&](const State& u, double x) {
    rec.emplace_back(x, u);
    last = {1.0 - x, 1.0 - u[0], u[1]};
  };
  auto stepper = odeint::make_dense_output(1e-30, opt.tol, odeint::runge_kutta_dopri5<State>());
  try {
    if (xs.empty()) {
      odeint::integrate_adaptive(stepper, sys, y, x0, 1.0 - s_end, 1e-3 * x0, obs);
    } else {
      std::vector<std::size_t> order(xs.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
      std::vector<double> times{x0};
      for (auto i : order) times.push_back(xs[i]);
      odeint::integrate_times(stepper, sys, y, times.begin(), times.end(), 1e-3 * x0, obs);
      std::vector<ODEState> out(xs.size());
      for (std::size_t j = 0; j < order.size(); ++j) {
        const auto& r = rec[j + 1];
        out[order[j]] = {1.0 - r.first, 1.0 - r.second[0], r.second[1]};
      }
      return out;
    }
  } catch (const SingularityError& e) {
    throw SingularityError(e.what(), last);
  }
  std::vector<ODEState> out;
  for (auto& r : rec) out.push_back({1.0 - r.first, 1.0 - r.second[0], r.second[1]});
  return out;
}

double sigma_pvi(const ODEState& st, const PVIParams& p) {
  const double s = st.s, w = st.w, wp = st.wprime;
  const double x = 1.0 - s, v = 1.0 - w;
  if (std::min({std::abs(w), std::abs(v), std::abs(w - s)}) < kGuard)
    throw SingularityError("sigma_pvi: w too close to 0, 1 or s", st);
  double d = wp - v / x;
  return s * x / (4.0 * w * v * (w - s)) * d * d -
         v / x * (p.lambda_ * p.lambda_ / (4.0 * s) - p.lambda_tilde * p.lambda_tilde / (4.0 * w) +
                  p.mu * p.mu / (w - s));
}

PVParams pv_params(double nu1, double nu2, double m, double E, double B) {
  if (!(m * m - E * E > 0.0)) throw DomainError("pv_params: need m^2 > E^2");
  PVParams p;
  p.lambda_ = nu2 - nu1;
  p.lambda_hat = std::sqrt(m * m - E * E);
  p.alpha_p = 0.5 * p.lambda_ * p.lambda_;
  p.beta_p = 0.0;
  p.gamma_p = 0.5 * (m * m - E * E + B * (1.0 + nu1 + nu2));
  p.delta_p = -B * B / 8.0;
  p.eta = -B / 2.0;
  p.eta_theta = p.gamma_p - p.eta;
  p.theta_ok = p.eta != 0.0 ? p.gamma_p / p.eta - 1.0 : std::numeric_limits<double>::quiet_NaN();
  return p;
}

double pv_rhs(const ODEState& st, const PVParams& p) {
  const double t = st.s, y = st.w, yp = st.wprime;
  if (!(t > 0.0)) throw DomainError("pv_rhs: t must be positive");
  if (std::min(std::abs(y), std::abs(y - 1.0)) < kGuard) throw SingularityError("pv_rhs: y too close to 0 or 1", st);
  return (0.5 / y + 1.0 / (y - 1.0)) * yp * yp - yp / t +
         (y - 1.0) * (y - 1.0) / (t * t) * (p.alpha_p * y + p.beta_p / y) + p.gamma_p * y / t +
         p.delta_p * y * (y + 1.0) / (y - 1.0);
}

double sigma_pv(const ODEState& st, const PVParams& p) {
  const double t = st.s, y = st.w, yp = st.wprime;
  if (!(t > 0.0)) throw DomainError("sigma_pv: t must be positive");
  if (std::min(std::abs(y), std::abs(y - 1.0)) < kGuard)
    throw SingularityError("sigma_pv: y too close to 0 or 1", st);
  const double ym = y - 1.0;
  return t * t * yp * yp / (4.0 * y * ym * ym) - p.lambda_ * p.lambda_ * y / 4.0 +
         0.5 * p.eta_theta * t * y / ym - 0.25 * p.eta * p.eta * t * t * y / (ym * ym);
}

ODEState pv_linear_seed(double t, double C2, const PVParams& p) {
  if (p.delta_p != 0.0) throw DomainError("pv_linear_seed: Bessel seed requires B = 0");
  const double k = std::abs(p.lambda_), d = std::sqrt(t), z = p.lambda_hat * d;
  const double K = bessel_k(k, z);
  const double Kp = -0.5 * (bessel_k(std::abs(k - 1.0), z) + bessel_k(k + 1.0, z));
  return {t, C2 * K * K, C2 * K * Kp * p.lambda_hat / d};
}

std::vector<ODEState> pv_solve_from_infinity(const PVParams& p, double C2, double t0,
                                             const std::vector<double>& t_out, double tol) {
  for (double t : t_out)
    if (!(t > 0.0 && t <= t0)) throw DomainError("pv_solve_from_infinity: output points must lie in (0, t0]");
  ODEState seed = pv_linear_seed(t0, C2, p);
  // integrate in r = -t so the independent variable increases
  State y{seed.w, seed.wprime};
  auto sys = [&](const State& u, State& du, double r) {
    du[0] = -u[1];
    du[1] = -pv_rhs(ODEState{-r, u[0], u[1]}, p);
  };
  std::vector<std::size_t> order(t_out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return t_out[a] > t_out[b]; });
  std::vector<double> times{-t0};
  for (auto i : order) times.push_back(-t_out[i]);
  std::vector<State> rec;
  ODEState last = seed;
  auto obs = [&](const State& u, double r) {
    rec.push_back(u);
    last = {-r, u[0], u[1]};
  };
  auto stepper = odeint::make_dense_output(1e-40, tol, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_times(stepper, sys, y, times.begin(), times.end(), 1e-3, obs);
  } catch (const SingularityError& e) {
    throw SingularityError(e.what(), last);
  }
  std::vector<ODEState> out(t_out.size());
  for (std::size_t j = 0; j < order.size(); ++j) out[order[j]] = {t_out[order[j]], rec[j + 1][0], rec[j + 1][1]};
  return out;
}

}  // namespace dvx
