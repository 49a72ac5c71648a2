#include "dvortex/kernel_ff.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "dvortex/parallel.hpp"
#include "dvortex/quad.hpp"

namespace dvx {

void FFParams::validate() const {
  if (!(nu > -1.0 && nu <= 0.0)) throw DomainError("FFParams: nu must lie in (-1, 0]");
  if (!(mu > 0.0)) throw DomainError("FFParams: mu must be positive");
  if (std::abs(std::abs(theta) - kPi / 2) > 1e-12) throw DomainError("FFParams: theta must be -pi/2 or pi/2");
}

double rho(double p, double mu) { return std::real(rho(cplx(p, 0.0), mu)); }

cplx rho(cplx p, double mu) {
  const double kap = mu + 0.5;
  return std::exp(2.0 * mu * std::log(2.0) + ln_gamma(1.0 + 2.0 * mu) - ln_gamma(kap + 0.5 * kI * p) -
                  ln_gamma(kap - 0.5 * kI * p));
}

cplx ff_gamma_prefactor(cplx p, cplx q, double nu, double mu) {
  const double kap = mu + 0.5;
  cplx lg = ln_gamma(kap + 0.5 * kI * p) + ln_gamma(kap - 0.5 * kI * p) + ln_gamma(kap + 0.5 * kI * q) +
            ln_gamma(kap - 0.5 * kI * q) - 2.0 * ln_gamma(1.0 + 2.0 * mu);
  return std::sin(kPi * nu) / (2.0 * kPi * kPi) * std::exp(lg);
}

namespace {

// log(2 cosh w), stable for large |Re w|
cplx log2cosh(cplx w) {
  if (w.real() >= 0.0) return w + std::log(1.0 + std::exp(-2.0 * w));
  return -w + std::log(1.0 + std::exp(2.0 * w));
}

double log2cosh(double u) { return std::abs(u) + std::log1p(std::exp(-2.0 * std::abs(u))); }

}  // namespace

cplx theta_integral(double phi, double nu, double b, double mu, double h_t) {
  const double c = 1.0 + nu + 0.5 * (1.0 - 2.0 * b);
  const double kt = 1.0 + 2.0 * mu;
  const double lo = c + 0.5 * kt, hi = 1.0 + 0.5 * kt - c;
  if (lo <= 0.0 || hi <= 0.0) throw DomainError("theta_integral: divergent theta integral");
  const int n_lo = int(std::ceil(40.0 / lo / h_t)), n_hi = int(std::ceil(40.0 / hi / h_t));
  cplx s = 0.0;
  for (int k = -n_lo; k <= n_hi; ++k) {
    double t = k * h_t;
    cplx tp(t, -0.5 * phi);
    cplx num = tp.real() > 0.0 ? std::exp((c - 1.0) * tp) / (1.0 + std::exp(-tp)) : std::exp(c * tp) / (std::exp(tp) + 1.0);
    cplx den = std::exp(kt * log2cosh(cplx(0.5 * t, 0.25 * phi)));
    s += num / den;
  }
  return h_t * s;
}

TripleKernel::TripleKernel(double nu, double b, double mu, Options opt) : nu_(nu), b_(b), mu_(mu), h_(opt.h_u) {
  const double kap = mu + 0.5;
  double lo = opt.u_lo != 0.0 ? opt.u_lo : -38.0 / kap;
  double hi = opt.u_hi != 0.0 ? opt.u_hi : 38.0 / kap;
  int k_lo = int(std::floor(lo / h_)), k_hi = int(std::ceil(hi / h_));
  for (int k = k_lo; k <= k_hi; ++k) u_.push_back(k * h_);
  const int n = int(u_.size());
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = std::atan(std::exp(u_[i]));
  G_.resize(n, n);
  const double ht = opt.h_t;
  parallel_for(std::size_t(n), [&](std::size_t i) {
    for (int j = 0; j <= int(i); ++j) G_(i, j) = theta_integral(2.0 * (x[i] - x[j]), nu_, b_, mu_, ht);
  });
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) G_(i, j) = std::conj(G_(j, i));
}

Eigen::VectorXcd TripleKernel::weights(cplx p, int sign, int stride) const {
  const double kap = mu_ + 0.5;
  const int n = int(u_.size());
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < n; i += stride)
    w(i) = stride * h_ * std::exp(-kap * log2cosh(u_[i]) + double(sign) * 0.5 * kI * p * u_[i]);
  return w;
}

cplx TripleKernel::F(cplx p, cplx q) const {
  Eigen::VectorXcd wp = weights(p, 1, 1), wq = weights(q, -1, 1);
  return std::sin(kPi * nu_) / (2.0 * kPi * kPi) * (wp.transpose() * G_ * wq)(0, 0);
}

cplx TripleKernel::F_coarse(cplx p, cplx q) const {
  Eigen::VectorXcd wp = weights(p, 1, 2), wq = weights(q, -1, 2);
  return std::sin(kPi * nu_) / (2.0 * kPi * kPi) * (wp.transpose() * G_ * wq)(0, 0);
}

Eigen::MatrixXcd TripleKernel::F_matrix(const std::vector<cplx>& p, const std::vector<cplx>& q) const {
  const int n = int(u_.size());
  Eigen::MatrixXcd Wp(p.size(), n), Wq(q.size(), n);
  for (std::size_t i = 0; i < p.size(); ++i) Wp.row(i) = weights(p[i], 1, 1).transpose();
  for (std::size_t i = 0; i < q.size(); ++i) Wq.row(i) = weights(q[i], -1, 1).transpose();
  return std::sin(kPi * nu_) / (2.0 * kPi * kPi) * (Wp * G_ * Wq.transpose());
}

std::shared_ptr<const TripleKernel> triple_kernel(double nu, double b, double mu) {
  static std::mutex mtx;
  static std::map<std::tuple<double, double, double>, std::shared_ptr<const TripleKernel>> cache;
  std::lock_guard<std::mutex> lk(mtx);
  auto key = std::make_tuple(nu, b, mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto k = std::make_shared<const TripleKernel>(nu, b, mu);
  cache[key] = k;
  return k;
}

namespace {

// 2F1(a0 + n, beta; c; 2 +- i0) for n = 0..N-1 by the forward recurrence in a
std::vector<cplx> f2_sequence(double a0, cplx beta, double c, int side, int N) {
  std::vector<cplx> out(N);
  out[0] = gauss_2f1_side(a0, beta, c, 2.0, side);
  if (N > 1) out[1] = gauss_2f1_side(a0 + 1.0, beta, c, 2.0, side);
  for (int n = 1; n + 1 < N; ++n) {
    double a = a0 + n;
    out[n + 1] = -((c - a) * out[n - 1] + (2.0 * beta - c) * out[n]) / a;
  }
  return out;
}

// 2F1(a, c; a+1; -1) = 2^{-c} 2F1(1, c; a+1; 1/2)
double f_minus_one(double a, double c) {
  return std::pow(2.0, -c) * std::real(gauss_2f1_series(1.0, c, a + 1.0, 0.5));
}

// Limit of an alternating series whose terms decay like n^{-s0 +- i omega}: the partial sums
// are averaged to remove the alternation, then the remaining algebraic tail is fitted.
cplx accelerate(const std::vector<cplx>& t, double s0, cplx omega, int K = 6, int orders = 4) {
  std::vector<cplx> S(t.size());
  cplx acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) S[i] = acc += t[i];
  for (int k = 0; k < K; ++k) {
    for (std::size_t i = 0; i + 1 < S.size(); ++i) S[i] = 0.5 * (S[i] + S[i + 1]);
    S.pop_back();
  }
  const double Nlo = double(t.size()) / 4.0;
  std::vector<double> Ns;
  std::vector<cplx> ys;
  for (std::size_t i = 0; i < S.size(); ++i) {
    double N = double(i) + 1.0 + 0.5 * K;
    if (N >= Nlo) {
      Ns.push_back(N);
      ys.push_back(S[i]);
    }
  }
  const int rows = int(Ns.size()), cols = 1 + 2 * orders;
  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd y(rows);
  const bool small = std::abs(omega) < 1e-8;
  for (int r = 0; r < rows; ++r) {
    double N = Ns[r], lnN = std::log(N);
    A(r, 0) = 1.0;
    for (int k = 0; k < orders; ++k) {
      double base = std::pow(N, -s0 - k);
      A(r, 1 + 2 * k) = base * std::cos(omega * lnN);
      A(r, 2 + 2 * k) = small ? cplx(base * lnN) : base * std::sin(omega * lnN) / omega;
    }
    y(r) = ys[r];
  }
  Eigen::VectorXd sc(cols);
  for (int c = 0; c < cols; ++c) {
    sc(c) = A.col(c).cwiseAbs().maxCoeff();
    A.col(c) /= sc(c);
  }
  Eigen::VectorXcd x = A.colPivHouseholderQr().solve(y);
  return x(0);
}

}  // namespace

cplx f_series_raw(cplx p, cplx q, double nu, double b, double mu, int N) {
  const double c = 1.0 + 2.0 * mu;
  const cplx b1 = mu + 0.5 + 0.5 * kI * p, b2 = mu + 0.5 - 0.5 * kI * q;
  const cplx e = std::exp(0.25 * kPi * (p + q));

  const double a1 = mu + 2.0 + nu - b;
  auto s1a = f2_sequence(a1, b1, c, -1, N), s1b = f2_sequence(a1, b2, c, 1, N);
  const double a2 = mu - nu + b;
  auto s2a = f2_sequence(a2, b1, c, 1, N), s2b = f2_sequence(a2, b2, c, -1, N);

  std::vector<cplx> t1(N), t2(N);
  for (int n = 0; n < N; ++n) {
    double sg = (n % 2 == 0) ? 1.0 : -1.0;
    t1[n] = sg / (a1 + n) / e * s1a[n] * s1b[n] * f_minus_one(a1 + n, c);
    t2[n] = sg / (a2 + n) * e * s2a[n] * s2b[n] * f_minus_one(a2 + n, c);
  }
  cplx omega = 0.5 * (p + q);
  cplx S = accelerate(t1, c, omega) + accelerate(t2, c, omega);
  return ff_gamma_prefactor(p, q, nu, mu) * S;
}

FFValue f_nu_triple(double p, double q, const FFParams& ff) {
  ff.validate();
  auto k = triple_kernel(ff.effective_nu(), ff.b, ff.mu);
  cplx v = k->F(p, q), vc = k->F_coarse(p, q);
  return {p, q, v.real(), std::abs(v - vc) + std::abs(v.imag())};
}

double f_nu_series(double p, double q, const FFParams& ff) {
  ff.validate();
  return std::real(f_series_raw(p, q, ff.effective_nu(), ff.b, ff.mu));
}

double form_factor(Side side, double p, double q, const FFParams& ff) {
  double F = side == Side::Minus ? f_nu_series(p, q, ff) : f_nu_series(-p, -q, ff);
  return std::sqrt(rho(p, ff.mu) * rho(q, ff.mu)) * F;
}

double residue_analytic(double nu, double b, double mu) {
  return 2.0 * std::sin(kPi * nu) / (kPi * kPi) *
         std::exp(ln_gamma(mu + 2.0 + nu - b) + ln_gamma(mu - nu + b) - ln_gamma(2.0 + 2.0 * mu));
}

ResidueReport residue_f(const FFParams& ff, bool with_numeric) {
  ff.validate();
  const double nu = ff.effective_nu(), b = ff.b, mu = ff.mu;
  ResidueReport r{};
  r.analytic = residue_analytic(nu, b, mu);
  Eigen::MatrixXcd S = pole_lattice_sums(nu, b, mu, 1);
  r.lattice = std::real(2.0 * std::sin(kPi * nu) / (kPi * kPi) * S(0, 0));
  if (!with_numeric) return r;

  const double kt = 1.0 + 2.0 * mu;
  const std::vector<double> eps = {0.6, 0.5, 0.4, 0.3, 0.25, 0.2};
  TripleKernel::Options opt;
  opt.u_lo = -24.0 / (0.5 * eps.back());
  opt.u_hi = 40.0 / (mu + 0.5);
  TripleKernel k(nu, b, mu, opt);
  std::vector<cplx> ys;
  for (double e : eps) ys.push_back(e * e * k.F(kI * (kt - e), -kI * (kt - e)));
  double err = 0.0;
  cplx v = richardson(eps, ys, &err);
  r.numeric = v.real();
  r.numeric_err = err + std::abs(v.imag());
  r.diverged = !std::isfinite(r.numeric) || r.numeric_err > 1e-2 * std::abs(r.numeric);
  return r;
}

}  // namespace dvx
