#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dvx {

using cplx = std::complex<double>;
using ComplexVal = cplx;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct PoleError : DomainError {
  using DomainError::DomainError;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// UpperCut: continuation of the principal branch from Im z > 0 across (1, inf);
// analytic in C \ (-inf, 1].
enum class Branch { Principal, UpperCut };

cplx ln_gamma(cplx z);
double ln_gamma(double x);  // log|Gamma(x)|
cplx rgamma(cplx z);        // 1/Gamma(z), zero at the poles

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z, Branch branch = Branch::Principal);

// Real x > 1 approached from above (side = +1) or below (side = -1), principal branch.
cplx gauss_2f1_side(cplx a, cplx b, cplx c, double x, int side);

// Maclaurin series, |z| < 1.
cplx gauss_2f1_series(cplx a, cplx b, cplx c, cplx z);

struct Hyp2f1Path {
  cplx value;
  cplx deriv;
};
// Integrates the hypergeometric equation along the polyline path[0] -> ... -> path.back().
// path[0] must satisfy |path[0]| <= 0.5 (series start). Used as an oracle and as the
// fallback for parameter sets where every transformation is degenerate.
Hyp2f1Path gauss_2f1_path(cplx a, cplx b, cplx c, const std::vector<cplx>& path, double tol = 1e-13);

enum class KummerKind { M, U };
double kummer(KummerKind kind, double a, double b, double x);

// exp(log_scale) * U(a, b, x) without intermediate overflow (x > 0).
double kummer_u_scaled(double a, double b, double x, double log_scale);

double parabolic_d(double order, double x);

double bessel_k(double order, double x);

}  // namespace dvx
