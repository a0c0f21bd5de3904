#pragma once

// Special functions and quadrature shared by the analytic modules.

#include <complex>
#include <functional>

namespace manin {

using cplx = std::complex<double>;

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kPi = 3.14159265358979323846264338;

// Riemann zeta on C \ {1} by Euler-Maclaurin summation. The cutoff grows
// with |Im s| so the remainder stays below ~1e-15 relative for Re s > -5.
cplx zeta(cplx s);

// Real-argument zeta (boost::math) for oracles and constants.
double zeta_real(double s);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod over [a, b], split into `panels` equal panels
// first (oscillatory integrands want many panels).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-12, int panels = 1);

// Integral over [a, +inf) via the exp-sinh rule.
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 double tol = 1e-12);

}  // namespace manin
