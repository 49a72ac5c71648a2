#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "dvortex/disk_model.hpp"

using namespace dvx;

namespace {

ModelParams asym_params() {
  ModelParams p;
  p.R = 1.7;
  p.E = 0.3;
  p.b = -0.6;
  p.nu = -0.3;
  return p;
}

// (H_l - E) w from the radial operator, derivative by a five-point stencil
Spinor radial_residual(double l, double r, const DerivedParams& d, const std::function<Spinor(double)>& w) {
  const double h = 1e-4;
  Spinor f = w(r);
  Spinor df = (-w(r + 2 * h) + 8.0 * w(r + h) - 8.0 * w(r - h) + w(r - 2 * h)) / (12 * h);
  const double x = 1 - r * r;
  cplx K = x * (df(1) + (l + 1) / r * f(1)) + (1 + 2 * d.b) * r * f(1);
  cplx Ks = -x * (df(0) - l / r * f(0)) - (1 - 2 * d.b) * r * f(0);
  Spinor out;
  out << (d.m * d.R * f(0) + K) / d.R - d.E * f(0), (Ks - d.m * d.R * f(1)) / d.R - d.E * f(1);
  return out;
}

double tgam(double x) { return std::tgamma(x); }

}  // namespace

TEST_CASE("derived parameters at the default set") {
  DerivedParams d = derive(ModelParams{});
  CHECK(d.mu == doctest::Approx(0.5590169944).epsilon(1e-10));
  CHECK(d.c_plus == doctest::Approx(1.2720196495).epsilon(1e-9));
  CHECK(d.c_minus == doctest::Approx(0.7861513778).epsilon(1e-9));
  CHECK(d.c_plus * d.c_minus == doctest::Approx(1.0));
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.nu = 0.5;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.nu = -0.5;
  p.E = 1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("radial solutions solve the radial Dirac equation") {
  ModelParams p = asym_params();
  DerivedParams d = derive(p);
  for (double l : {0.3, -0.4, 1.7, -2.2}) {
    for (double r : {0.2, 0.55, 0.8}) {
      auto res = [&](auto pick) {
        Spinor v = radial_residual(l, r, d, [&](double rr) { return pick(radial_basis(l, rr, d)); });
        Spinor s = pick(radial_basis(l, r, d));
        return v.norm() / s.norm();
      };
      CHECK(res([](const RadialBasis& w) { return w.wI; }) < 1e-8);
      if (l > -1) CHECK(res([](const RadialBasis& w) { return *w.wII_plus; }) < 1e-8);
      if (l < 0) CHECK(res([](const RadialBasis& w) { return *w.wII_minus; }) < 1e-8);
    }
  }
}

TEST_CASE("Wronskian identity at random points, both forms of w^I") {
  std::mt19937 g(11);
  std::uniform_real_distribution<double> L(-3.0, 3.0), Rr(0.05, 0.95);
  DerivedParams d0 = derive(ModelParams{}), d1 = derive(asym_params());
  double worst = 0, worst_alt = 0;
  for (int i = 0; i < 100; ++i) {
    double l = L(g), r = Rr(g);
    if (std::abs(l - std::round(l)) < 1e-3) continue;
    const DerivedParams& d = (i % 2) ? d1 : d0;
    RadialBasis w = radial_basis(l, r, d);
    double W = radial_wronskian(r, d);
    if (w.wII_plus) worst = std::max(worst, std::abs(det2(w.wI, *w.wII_plus) / W - 1.0));
    if (w.wII_minus) worst = std::max(worst, std::abs(det2(w.wI, *w.wII_minus) / W - 1.0));
    worst_alt = std::max(worst_alt, (w.wI - w.wI_alt).norm() / w.wI.norm());
  }
  CHECK(worst < 1e-9);
  CHECK(worst_alt < 1e-9);
  DerivedParams d = derive(ModelParams{});
  CHECK(radial_wronskian(0.5, d) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("small-r behaviour of w^(II,+)") {
  DerivedParams d = derive(ModelParams{});
  double l = 0.3, r = 1e-4, mu = d.mu, b = d.b;
  Spinor w = *radial_basis(l, r, d).wII_plus;
  double lead = tgam(mu - b + 1 + l) / (tgam(1 + l) * tgam(mu - b + 1)) / d.c_plus * std::pow(r, l);
  CHECK(std::abs(w(0).real() / lead - 1) < 1e-3);
}

TEST_CASE("radial Green function: jump, transpose symmetry, prefactor") {
  for (ModelParams p : {ModelParams{}, asym_params()}) {
    DerivedParams d = derive(p);
    for (double l : {0.3, -0.4, -1.6}) {
      double r = 0.5;
      // jump = -(i/R)((1-r^2)/r) sigma_y, extrapolated from eps and eps/2
      auto J = [&](double e) { return Mat2(radial_green(l, r + e, r, d, p.theta) - radial_green(l, r - e, r, d, p.theta)); };
      Mat2 Jx = 2.0 * J(1e-5) - J(2e-5);
      Mat2 ref = -kI / p.R * ((1 - r * r) / r) * sigma_y();
      CHECK((Jx - ref).cwiseAbs().maxCoeff() < 1e-6);
    }
    Mat2 a = radial_green(1.2, 0.3, 0.6, d, p.theta), b = radial_green(1.2, 0.6, 0.3, d, p.theta);
    CHECK((a - b.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }
  DerivedParams d = derive(ModelParams{});
  CHECK_THROWS_AS(radial_green(0.3, 0.5, 0.5, d, -kPi / 2), DomainError);
}

TEST_CASE("mixing angle from the boundary condition at r -> 0") {
  DerivedParams d = derive(ModelParams{});
  CHECK(eta_of_theta(kPi / 2, -0.4, d) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(std::abs(eta_of_theta(-kPi / 2, -0.4, d)) - kPi / 2) < 1e-12);
  // cos X (mR r)^{-l} w_1 = -sin X (mR r)^{1+l} w_2 as r -> 0, X = Theta/2 + pi/4
  for (double th : {-kPi / 2, 0.7, kPi / 2, 2.5}) {
    double l = -0.4, eta = eta_of_theta(th, l, d), X = th / 2 + kPi / 4;
    auto gap = [&](double r) {
      RadialBasis w = radial_basis(l, r, d);
      Spinor v = std::cos(eta) * *w.wII_plus + std::sin(eta) * *w.wII_minus;
      double mR = d.m * d.R;
      double a = std::cos(X) * std::pow(mR * r, -l) * v(0).real();
      double c = -std::sin(X) * std::pow(mR * r, 1 + l) * v(1).real();
      return std::abs(a - c);
    };
    // the subleading terms vanish like r^{2 min(1+l, -l)}
    CHECK(gap(1e-8) < 1e-4);
    CHECK(gap(1e-8) < gap(1e-4));
  }
}

TEST_CASE("spectrum: Landau and vortex levels") {
  ModelParams p;
  p.b = 0.5;
  SpectrumReport s = spectrum(p);
  CHECK(s.landau.empty());
  CHECK(s.continuum_edge == doctest::Approx(2.0));

  p.b = 2.3;
  p.nu = -0.4;
  p.R = 1.3;
  s = spectrum(p);
  double k = 4 / (p.R * p.R);
  REQUIRE(s.landau.size() == 2);
  for (auto& L : s.landau) CHECK(L.E2 == doctest::Approx(1 + k * (2.3 * 2.3 - (2.3 - L.n) * (2.3 - L.n))));
  REQUIRE(s.vortex_levels.size() == 1);  // n < b - (1 + nu) = 1.7
  CHECK(s.vortex_levels[0].E2 == doctest::Approx(1 + k * (2.3 * 2.3 - 0.7 * 0.7)));
  p.b = -2.3;
  s = spectrum(p);
  REQUIRE(s.vortex_levels.size() == 1);  // n < |b| + nu = 1.9
  CHECK(s.vortex_levels[0].E2 == doctest::Approx(1 + k * (2.3 * 2.3 - (2.3 - 1 - 0.4) * (2.3 - 1 - 0.4))));
  CHECK(s.landau[0].l0 == "1,2,...");
}

TEST_CASE("spectrum: l0 = 0 roots satisfy the printed equation") {
  auto printed = [](double E, const ModelParams& p) {
    double mu = 0.5 * std::sqrt((p.m * p.m - E * E) * p.R * p.R + 4 * p.b * p.b), nu = p.nu, b = p.b;
    double lhs = (p.m + E) * p.R / 2 * std::pow(2 / (p.m * p.R), 1 + 2 * nu) * tgam(mu + b) * tgam(mu - b + nu + 1) /
                 (tgam(mu - b + 1) * tgam(mu + b - nu));
    double A = tgam(nu + 1) / tgam(-nu) * std::pow(2.0, 1 + 2 * nu) * std::tan(p.theta / 2 + kPi / 4);
    return std::abs(lhs + A) / (std::abs(lhs) + std::abs(A) + 1.0);
  };
  ModelParams p;
  p.b = 0;
  p.theta = kPi;
  SpectrumReport s = spectrum(p);
  REQUIRE(s.l0_roots.size() == 1);
  CHECK(std::abs(s.l0_roots[0].E) < 1e-10);
  CHECK(printed(s.l0_roots[0].E, p) < 1e-10);

  p.b = 2.3;
  p.nu = -0.4;
  p.theta = 0.3;
  s = spectrum(p);
  CHECK(!s.l0_roots.empty());
  for (auto& r : s.l0_roots) {
    CHECK(r.residual < 1e-10);
    if (std::abs(r.E + p.m) > 1e-6) CHECK(printed(r.E, p) < 1e-10);
  }
}

TEST_CASE("horocyclic waves solve the Dirac equation (nu = 0)") {
  ModelParams p = asym_params();
  p.nu = 0;
  DerivedParams d = derive(p);
  const double h = 1e-4;
  for (int sign : {1, -1})
    for (bool hat : {false, true}) {
      cplx th(0.4, 0.1);
      double r = 0.45, f = 0.8;
      auto psi = [&](double rr, double ff) { return horocyclic(sign, hat, std::polar(rr, ff), th, d); };
      Spinor P = psi(r, f);
      Spinor dr = (psi(r + h, f) - psi(r - h, f)) / (2 * h);
      Spinor df = (psi(r, f + h) - psi(r, f - h)) / (2 * h);
      double x = 1 - r * r;
      cplx K = std::exp(-kI * f) / p.R * (x * (dr(1) - kI / r * df(1)) + (1 + 2 * p.b) * r * P(1));
      cplx Ks = -std::exp(kI * f) / p.R * (x * (dr(0) + kI / r * df(0)) + (1 - 2 * p.b) * r * P(0));
      cplx e1 = p.m * P(0) + K - p.E * P(0), e2 = Ks - p.m * P(1) - p.E * P(1);
      // the conjugate waves solve the transposed equation instead
      if (!hat) CHECK(std::abs(e1) + std::abs(e2) < 1e-6 * P.norm());
      // angular momentum: (-i d_phi + sigma_z / 2) Psi = -d_theta Psi; the hat waves flip sigma_z
      Spinor dth = (horocyclic(sign, hat, std::polar(r, f), th + h, d) - horocyclic(sign, hat, std::polar(r, f), th - h, d)) /
                   (2 * h);
      Spinor Lpsi = -kI * df + (hat ? -0.5 : 0.5) * (sigma_z() * P);
      CHECK((Lpsi + dth).norm() < 1e-6 * P.norm());
      if (hat) CHECK((P - horocyclic(sign, false, std::polar(r, -f), -th, d)).norm() < 1e-14);
    }
}

TEST_CASE("contour integrals reproduce the radial solutions") {
  DerivedParams d = derive(ModelParams{});
  cplx z = std::polar(0.5, 0.4);
  for (bool hat : {false, true})
    for (auto k : {RadialKind::I, RadialKind::IIplus, RadialKind::IIminus}) {
      double l = k == RadialKind::IIminus ? -0.4 : 0.3;
      Spinor a = contour_radial(l, z, k, hat, d), b = contour_radial_expected(l, z, k, hat, d);
      CHECK((a - b).norm() < 1e-9 * b.norm());
    }
}

TEST_CASE("disk Green function: representation equivalences") {
  ModelParams p = asym_params();
  DerivedParams d = derive(p);
  std::mt19937 g(3);
  std::uniform_real_distribution<double> U(0.05, 0.9), A(-3.1, 3.1);
  int done = 0;
  while (done < 4) {
    cplx z = std::polar(U(g), A(g)), zp = std::polar(U(g), A(g));
    if (std::abs(std::abs(std::arg(z) - std::arg(zp)) - kPi) < 0.05) continue;
    ++done;
    Mat2 G = green_disk_free(z, zp, d);
    CHECK((G - green_disk_free_contour(z, zp, d, 1)).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((G - green_disk_free_contour(z, zp, d, 2)).cwiseAbs().maxCoeff() < 1e-7);
    for (double th : {-kPi / 2, kPi / 2}) {
      p.theta = th;
      Mat2 D = green_disk_delta(z, zp, p);
      CHECK((D - green_disk_delta_contour(z, zp, p, 1)).cwiseAbs().maxCoeff() < 1e-6);
      CHECK((D - green_disk_delta_contour(z, zp, p, 2)).cwiseAbs().maxCoeff() < 1e-6);
      CHECK((green_disk(z, zp, p) - green_disk(zp, z, p).adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("disk Green function equals its partial-wave sum") {
  for (double th : {-kPi / 2, kPi / 2}) {
    ModelParams p;
    p.R = 1.3;
    p.E = 0.2;
    p.b = 0.4;
    p.nu = -0.3;
    p.theta = th;
    DerivedParams d = derive(p);
    cplx z = std::polar(0.45, 0.7), zp = std::polar(0.3, -0.5);
    double r = std::abs(z), rp = std::abs(zp), f = std::arg(z), fp = std::arg(zp);
    Mat2 S = Mat2::Zero();
    for (int l0 = -80; l0 <= 80; ++l0) {
      Mat2 gl = radial_green(l0 + p.nu, r, rp, d, th);
      Mat2 L = Mat2::Zero(), Rr = Mat2::Zero();
      L(0, 0) = std::exp(kI * double(l0) * f);
      L(1, 1) = std::exp(kI * double(l0 + 1) * f);
      Rr(0, 0) = std::exp(-kI * double(l0) * fp);
      Rr(1, 1) = std::exp(-kI * double(l0 + 1) * fp);
      S += L * gl * Rr / (2 * kPi);
    }
    CHECK((S - green_disk(z, zp, p)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("invariance and limiting cases") {
  cplx z(0.3, -0.2), zp(-0.1, 0.5), al(1.25, 0.3), be(0.4, -0.6);
  al *= std::sqrt(1 + std::norm(be)) / std::abs(al);
  CHECK(u_invariant(su11_map(al, be, z), su11_map(al, be, zp)) == doctest::Approx(u_invariant(z, zp)).epsilon(1e-12));
  ModelParams p;
  p.nu = 0;
  CHECK(green_disk_delta(z, zp, p).cwiseAbs().maxCoeff() < 1e-14);
  // phase cut along arg z - arg z' = pi is refused
  CHECK_THROWS(green_disk(cplx(0.3, 0), cplx(-0.4, 0), ModelParams{}));
}
