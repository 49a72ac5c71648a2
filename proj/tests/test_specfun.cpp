#include <cmath>

#include "doctest.h"
#include "dvortex/quad.hpp"
#include "dvortex/specfun.hpp"

using namespace dvx;

TEST_CASE("ln_gamma against lgamma and the recurrence") {
  for (double x : {0.3, 1.0, 2.5, 7.25, 31.0}) CHECK(ln_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  for (cplx z : {cplx(0.4, 1.3), cplx(-2.7, 0.8), cplx(3.0, -5.0), cplx(12.0, 20.0)}) {
    cplx lhs = ln_gamma(z + 1.0), rhs = ln_gamma(z) + std::log(z);
    // continuous branch: equality up to 2 pi i only at branch jumps of log z
    cplx d = lhs - rhs;
    double k = std::round(d.imag() / (2 * kPi));
    CHECK(std::abs(d - cplx(0, 2 * kPi * k)) < 1e-12);
  }
  // |Gamma(1 + i x)|^2 = pi x / sinh(pi x)
  double x = 1.7;
  CHECK(2.0 * ln_gamma(cplx(1.0, x)).real() == doctest::Approx(std::log(kPi * x / std::sinh(kPi * x))).epsilon(1e-13));
}

TEST_CASE("rgamma vanishes at the poles") {
  CHECK(std::abs(rgamma(cplx(-3.0, 0.0))) == 0.0);
  CHECK(rgamma(cplx(4.0, 0.0)).real() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("Gauss 2F1 closed forms inside and outside the unit disk") {
  // 2F1(1,1;2;z) = -log(1-z)/z
  for (cplx z : {cplx(0.3, 0.1), cplx(-0.9, 0.0), cplx(0.95, 0.2), cplx(-4.0, 1.0), cplx(3.0, 2.0), cplx(0.5, -1.5)}) {
    cplx ref = -std::log(1.0 - z) / z;
    CHECK(std::abs(gauss_2f1(1.0, 1.0, 2.0, z) - ref) < 1e-12 * std::abs(ref));
  }
  // 2F1(a,b;b;z) = (1-z)^{-a}
  cplx a(0.3, 0.7);
  for (cplx z : {cplx(0.6, 0.3), cplx(-2.5, 0.5), cplx(1.5, 1.5)})
    CHECK(std::abs(gauss_2f1(a, 2.2, 2.2, z) - std::pow(1.0 - z, -a)) < 1e-12);
}

TEST_CASE("upper-cut branch across (1, inf)") {
  // -log(1 - x - i0)/x for x > 1
  for (double x : {1.5, 2.0, 5.0}) {
    cplx ref = -(std::log(x - 1.0) - kI * kPi) / x;
    CHECK(std::abs(gauss_2f1(1.0, 1.0, 2.0, cplx(x, 0.0), Branch::UpperCut) - ref) < 1e-12);
    CHECK(std::abs(gauss_2f1_side(1.0, 1.0, 2.0, x, +1) - ref) < 1e-12);
    CHECK(std::abs(gauss_2f1_side(1.0, 1.0, 2.0, x, -1) - std::conj(ref)) < 1e-12);
  }
  // below the real axis the upper-cut branch differs from the principal one
  cplx z(2.0, -0.5);
  cplx up = gauss_2f1(0.4, cplx(0.9, 0.3), 2.1, z, Branch::UpperCut);
  Hyp2f1Path path = gauss_2f1_path(0.4, cplx(0.9, 0.3), 2.1, {cplx(0.3, 0.0), cplx(0.3, 1.0), cplx(3.0, 1.0), z});
  CHECK(std::abs(up - path.value) < 1e-10);
}

TEST_CASE("degenerate c - a - b integer") {
  // 2F1(1,1;2;z) has c - a - b = 0; z near 1
  cplx z(0.999, 0.0);
  CHECK(std::abs(gauss_2f1(1.0, 1.0, 2.0, z) - (-std::log(1.0 - z) / z)) < 1e-11);
}

TEST_CASE("Kummer, parabolic cylinder and Bessel special cases") {
  CHECK(kummer(KummerKind::M, 0.7, 0.7, 1.3) == doctest::Approx(std::exp(1.3)).epsilon(1e-13));
  CHECK(kummer(KummerKind::U, 0.4, 1.4, 2.0) == doctest::Approx(std::pow(2.0, -0.4)).epsilon(1e-12));
  CHECK(kummer_u_scaled(0.4, 1.4, 2.0, 3.0) == doctest::Approx(std::exp(3.0) * std::pow(2.0, -0.4)).epsilon(1e-12));
  CHECK(parabolic_d(0.0, 1.1) == doctest::Approx(std::exp(-1.1 * 1.1 / 4)).epsilon(1e-12));
  CHECK(parabolic_d(1.0, 1.1) == doctest::Approx(1.1 * std::exp(-1.1 * 1.1 / 4)).epsilon(1e-12));
  CHECK(bessel_k(0.5, 2.0) == doctest::Approx(std::sqrt(kPi / 4.0) * std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("Kummer U at large a satisfies the contiguous recurrence") {
  // U(a-1) + (b - 2a - x) U(a) + a (a - b + 1) U(a+1) = 0
  for (double x : {0.05, 0.3, 2.0}) {
    const double a = 455.0, b = 0.6, ls = std::lgamma(a);
    double um = kummer_u_scaled(a - 1.0, b, x, ls), u0 = kummer_u_scaled(a, b, x, ls),
           up = kummer_u_scaled(a + 1.0, b, x, ls);
    REQUIRE(std::isfinite(um));
    REQUIRE(std::isfinite(up));
    double scale = std::abs(um) + std::abs((b - 2 * a - x) * u0) + std::abs(a * (a - b + 1) * up);
    CHECK(std::abs(um + (b - 2 * a - x) * u0 + a * (a - b + 1) * up) < 1e-9 * scale);
  }
  // large x: U ~ x^{-a} (1 - a (a - b + 1) / x)
  const double a = 0.7, b = 1.9, x = 3e7;
  CHECK(kummer_u_scaled(a, b, x, 0.0) ==
        doctest::Approx(std::pow(x, -a) * (1.0 - a * (a - b + 1) / x)).epsilon(1e-13));
}

TEST_CASE("quadrature helpers") {
  Rule g = gauss_legendre(10, 0.0, 2.0);
  double s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 9);
  CHECK(s == doctest::Approx(std::pow(2.0, 10) / 10).epsilon(1e-13));
  // endpoint singularity x^{-1/2} (1-x)^{-1/3} on [0, 1]: Beta(1/2, 2/3)
  EndpointRule r = tanh_sinh_rule(0.0, 1.0, 1.0 / 32);
  double v = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) v += r.weights[i] * std::pow(r.dl[i], -0.5) * std::pow(r.dr[i], -1.0 / 3);
  double beta = std::exp(std::lgamma(0.5) + std::lgamma(2.0 / 3) - std::lgamma(0.5 + 2.0 / 3));
  CHECK(v == doctest::Approx(beta).epsilon(1e-10));
  Eigen::VectorXcd I = integrate_line_vec([](double x) {
    Eigen::VectorXcd o(1);
    o(0) = 1.0 / std::cosh(x);
    return o;
  });
  CHECK(std::abs(I(0) - kPi) < 1e-10);
  std::vector<double> h{0.4, 0.2, 0.1}, y;
  std::vector<cplx> yy;
  for (double hh : h) yy.push_back(3.0 + 2.0 * hh + hh * hh);
  CHECK(std::abs(richardson(h, yy) - 3.0) < 1e-12);
}
