#include "dvortex/tau_engine.hpp"

#include <algorithm>
#include <cmath>

#include "dvortex/parallel.hpp"
#include "dvortex/quad.hpp"

namespace dvx {

Quadrature build_quadrature(int n, double cutoff) {
  if (n < 8 || !(cutoff > 0.0)) throw DomainError("build_quadrature: need n >= 8 and cutoff > 0");
  Rule r = gauss_legendre(n, -cutoff, cutoff);
  Quadrature q;
  q.nodes = r.nodes;
  q.weights = r.weights;
  q.cutoff = cutoff;
  return q;
}

double default_cutoff(double mu) { return std::max(8.0, 4.0 * (1.0 + 2.0 * mu)); }

Eigen::MatrixXcd kernel_factor(double s, const FFParams& ff, const Quadrature& quad, int sign) {
  ff.validate();
  if (!(s > 0.0 && s < 1.0)) throw DomainError("kernel_factor: s must lie in (0, 1)");
  const double l = geodesic_l(s);
  const int n = int(quad.nodes.size());
  std::vector<cplx> p(n);
  for (int i = 0; i < n; ++i) p[i] = sign * quad.nodes[i];
  Eigen::MatrixXcd F = triple_kernel(ff.effective_nu(), ff.b, ff.mu)->F_matrix(p, p);
  Eigen::MatrixXcd K(n, n);
  for (int i = 0; i < n; ++i) {
    double ri = rho(quad.nodes[i], ff.mu);
    for (int j = 0; j < n; ++j) {
      double rj = rho(quad.nodes[j], ff.mu);
      cplx ph = std::exp(0.5 * kI * double(sign) * (quad.nodes[i] - quad.nodes[j]) * l);
      K(i, j) = std::sqrt(quad.weights[i] * quad.weights[j] * ri * rj) * ph * F(i, j).real();
    }
  }
  return K;
}

Eigen::MatrixXcd kernel_matrix(double s, const FFParams& ff1, const FFParams& ff2, const Quadrature& quad) {
  return kernel_factor(s, ff2, quad, 1) * kernel_factor(s, ff1, quad, -1);
}

double tau_nystrom(double s, const FFParams& ff1, const FFParams& ff2, const Quadrature& quad) {
  Eigen::MatrixXcd M = kernel_matrix(s, ff1, ff2, quad);
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(M.rows(), M.cols());
  return (I - M).partialPivLu().determinant().real();
}

double trace_quadrature(double s, const FFParams& ff1, const FFParams& ff2, const Quadrature& quad) {
  const double l = geodesic_l(s);
  const int n = int(quad.nodes.size());
  std::vector<cplx> p(n), mp(n);
  for (int i = 0; i < n; ++i) {
    p[i] = quad.nodes[i];
    mp[i] = -quad.nodes[i];
  }
  Eigen::MatrixXcd F2 = triple_kernel(ff2.effective_nu(), ff2.b, ff2.mu)->F_matrix(p, p);
  Eigen::MatrixXcd F1 = triple_kernel(ff1.effective_nu(), ff1.b, ff1.mu)->F_matrix(mp, mp);
  std::vector<double> row(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> terms(n);
    for (int j = 0; j < n; ++j)
      terms[j] = quad.weights[i] * quad.weights[j] * rho(quad.nodes[i], ff2.mu) * rho(quad.nodes[j], ff2.mu) *
                 F2(i, j).real() * F1(i, j).real() * std::cos((quad.nodes[i] - quad.nodes[j]) * l);
    row[i] = pairwise_sum(terms.data(), n);
  }
  return pairwise_sum(row.data(), n);
}

namespace {

double poch_over_fact(double c, int m) {
  double v = 1.0;
  for (int k = 0; k < m; ++k) v *= (c + k) / (k + 1);
  return v;
}

// l-independent factor of the lattice matrix; row index: pole level of the exponent
Eigen::MatrixXcd lattice_factor(const FFParams& ff, int N) {
  const double nu = ff.effective_nu(), mu = ff.mu, c = 1.0 + 2.0 * mu;
  Eigen::MatrixXcd S = pole_lattice_sums(nu, ff.b, mu, N);
  const double C = std::sin(kPi * nu) / (2.0 * kPi * kPi);
  const double pre = -kPi * std::pow(2.0, 2.0 * mu) * 4.0 * C;
  Eigen::MatrixXcd A(N, N);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) A(n, m) = pre * ((m % 2 == 0) ? 1.0 : -1.0) * poch_over_fact(c, m) * S(n, m);
  return A;
}

}  // namespace

TauEngine::TauEngine(const FFParams& ff1, const FFParams& ff2, int max_levels)
    : ff1_(ff1), ff2_(ff2), max_levels_(max_levels) {
  ff1.validate();
  ff2.validate();
  if (ff1.mu != ff2.mu || ff1.b != ff2.b) throw DomainError("TauEngine: both vortices share b and mu");
  A2_ = lattice_factor(ff2, max_levels);
  A1_ = lattice_factor(ff1, max_levels);
}

int TauEngine::levels_for(double l) const {
  int n = int(std::ceil(10.0 / l)) + 2;
  return std::clamp(n, 4, max_levels_);
}

void TauEngine::lattice(double l, int n, Eigen::MatrixXcd& X, Eigen::MatrixXcd& Y) const {
  const double kt = 1.0 + 2.0 * ff1_.mu;
  X = A2_.topLeftCorner(n, n);
  Y = A1_.topLeftCorner(n, n);
  for (int k = 0; k < n; ++k) {
    double e = std::exp(-(kt + 2.0 * k) * l);
    X.row(k) *= e;
    Y.row(k) *= e;
  }
}

TauPoint TauEngine::tau(double s) const {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("tau: s must lie in (0, 1)");
  const double l = geodesic_l(s);
  const double kt = 1.0 + 2.0 * ff1_.mu;
  const int n = levels_for(l);
  Eigen::MatrixXcd X, Y;
  lattice(l, n, X, Y);
  Eigen::MatrixXcd M = X * Y;
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  auto lu = (I - M).partialPivLu();
  Eigen::VectorXd E(n);
  for (int k = 0; k < n; ++k) E(k) = kt + 2.0 * k;
  Eigen::MatrixXcd dM = -(E.asDiagonal() * M + X * (E.asDiagonal() * Y));
  cplx dl = -lu.solve(dM).trace();

  TauPoint pt;
  pt.s = s;
  pt.l_s = l;
  pt.tau = lu.determinant().real();
  pt.dlntau_ds = dl.real() / (2.0 * std::sqrt(s) * (1.0 - s));
  pt.det_cond = 1.0 / lu.rcond();
  pt.trace1 = M.trace().real();
  pt.n_levels = n;
  pt.cutoff = kt + 2.0 * (n - 1);
  const int nc = std::max(2, n - 2);
  Eigen::MatrixXcd Xc, Yc;
  lattice(l, nc, Xc, Yc);
  double tc = (Eigen::MatrixXcd::Identity(nc, nc) - Xc * Yc).determinant().real();
  pt.est_err = std::abs(pt.tau - tc);
  return pt;
}

double TauEngine::trace_leading(double s) const {
  const double l = geodesic_l(s);
  Eigen::MatrixXcd X, Y;
  lattice(l, levels_for(l), X, Y);
  return (X * Y).trace().real();
}

TauCurve TauEngine::curve(const std::vector<double>& s_grid) const {
  for (std::size_t i = 1; i < s_grid.size(); ++i)
    if (!(s_grid[i] > s_grid[i - 1])) throw DomainError("tau_curve: grid must be strictly increasing");
  TauCurve c;
  c.ff1 = ff1_;
  c.ff2 = ff2_;
  c.points.resize(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) { c.points[i] = tau(s_grid[i]); });
  return c;
}

ATau a_tau(const FFParams& ff1, const FFParams& ff2) {
  const double n1 = ff1.effective_nu(), n2 = ff2.effective_nu(), b = ff1.b, mu = ff1.mu;
  double lg = ln_gamma(mu + 2.0 + n1 - b) + ln_gamma(mu - n1 + b) + ln_gamma(mu + 2.0 + n2 - b) +
              ln_gamma(mu - n2 + b) - 2.0 * ln_gamma(2.0 + 2.0 * mu);
  ATau r;
  r.a_tau = std::sin(kPi * n1) * std::sin(kPi * n2) / (kPi * kPi) * std::exp(lg);
  r.a_pvi = std::pow(1.0 + 2.0 * mu, 2) / ((mu + 1.0 + n1 - b) * (mu + 1.0 + n2 - b)) * r.a_tau;
  return r;
}

PVICheck pvi_sigma_check(const FFParams& ff1, const FFParams& ff2, const std::vector<double>& s_grid,
                         PVISolveOptions opt) {
  if (s_grid.empty()) throw DomainError("pvi_sigma_check: empty grid");
  PVICheck out;
  out.A = a_tau(ff1, ff2).a_pvi;
  const PVIParams P = pvi_params(ff1.effective_nu(), ff2.effective_nu(), ff1.b, ff1.mu);
  const double s_end = *std::min_element(s_grid.begin(), s_grid.end());
  std::vector<ODEState> st = pvi_solve_from_one(P, out.A, s_end, s_grid, opt);
  TauEngine eng(ff1, ff2);
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    double sg = sigma_pvi(st[i], P);
    double dl = eng.tau(s_grid[i]).dlntau_ds;
    out.rows.push_back({s_grid[i], st[i].w, st[i].wprime, sg, dl, (sg - dl) / dl});
  }
  return out;
}

}  // namespace dvx
