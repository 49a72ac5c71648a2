#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dvortex/kernel_ff.hpp"

namespace dvx {

namespace {

using real_mp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>>;

// int_0^1 t^{a-1} (1+t)^{-beta} dt = 2^{-beta} 2F1(1, beta; a+1; 1/2) / a
real_mp beta_integral(const real_mp& a, const real_mp& beta) {
  real_mp term = 1, sum = 1;
  const real_mp tiny("1e-118");
  for (int k = 0; k < 2000; ++k) {
    term *= (beta + k) / (a + 1 + k) / 2;
    sum += term;
    if (abs(term) < tiny * abs(sum)) break;
  }
  return pow(real_mp(2), -beta) * sum / a;
}

// P[n][i] = 2F1(-n, base + i; c; 2), a polynomial of degree n in its second argument
std::vector<std::vector<real_mp>> poly_table(const real_mp& base, const real_mp& c, int N, int D) {
  std::vector<std::vector<real_mp>> P(N, std::vector<real_mp>(D + 1));
  for (int i = 0; i <= D; ++i) {
    real_mp a = base + i;
    for (int n = 0; n < N; ++n) {
      real_mp term = 1, sum = 1;
      for (int k = 0; k < n; ++k) {
        term *= real_mp(k - n) * (a + k) * 2 / ((c + k) * (k + 1));
        sum += term;
      }
      P[n][i] = sum;
    }
  }
  return P;
}

// sum_{i>=0} (-1)^i P_n(base+i) P_m(base+i) int_0^1 t^{base+i-1}(1+t)^{-c} dt, made convergent by
// expanding the polynomial in forward differences (Euler transform)
struct RegSum {
  std::vector<std::vector<real_mp>> P;
  std::vector<real_mp> J;  // J[j] = int t^{base+j-1} (1+t)^{-(1+c)-j}

  RegSum(const real_mp& base, const real_mp& c, int N) {
    const int D = 2 * (N - 1);
    P = poly_table(base, c, N, D);
    J.resize(D + 1);
    for (int j = 0; j <= D; ++j) J[j] = beta_integral(base + j, 1 + c + j);
  }

  real_mp operator()(int n, int m) const {
    const int d = n + m;
    std::vector<real_mp> v(d + 1);
    for (int i = 0; i <= d; ++i) v[i] = P[n][i] * P[m][i];
    real_mp total = 0;
    for (int j = 0; j <= d; ++j) {
      total += ((j % 2 == 0) ? v[0] : -v[0]) * J[j];
      for (int i = 0; i + j < d; ++i) v[i] = v[i + 1] - v[i];
    }
    return total;
  }
};

}  // namespace

Eigen::MatrixXcd pole_lattice_sums(double nu, double b, double mu, int N) {
  const real_mp MU = mu, NU = nu, B = b;
  const real_mp c = 1 + 2 * MU;
  RegSum s1(MU + 2 + NU - B, c, N), s2(MU - NU + B, c, N);
  static const cplx ipow[4] = {1.0, kI, -1.0, -kI};
  Eigen::MatrixXcd S(N, N);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) {
      int k = ((n - m) % 4 + 4) % 4;
      cplx ph2 = ipow[k], ph1 = std::conj(ph2);
      S(n, m) = ph1 * static_cast<double>(s1(n, m)) + ph2 * static_cast<double>(s2(n, m));
    }
  return S;
}

}  // namespace dvx
