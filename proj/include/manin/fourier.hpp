#pragma once

// Fourier transforms of the height function at each place and the Poisson
// identity Z(lambda) = (2 pi)^{-d} int_{R^d} H^(lambda + i m) dm over Q.
//
// Characters are chi_m(x) = exp(-i <m, n_v(x)> log q_v) place by place; the
// product over all places is 1 on rational points.

#include "manin/fan.hpp"
#include "manin/special.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace manin {

using CVec = std::vector<cplx>;

// sum over maximal cones of prod_j 1 / (lambda_j + i <e_j, m>)
// = int_{R^d} exp(-phi_lambda(v) - i <m, v>) dv. The transform over
// (R^*)^d with dx/|x| is 2^d times this.
cplx arch_transform(const Fan& fan, const CVec& lambda, std::span<const double> m);

// sum over n in Z^d of p^{-phi_lambda(n)} exp(-i <m, n> log p)
// = sum over all cones of prod_j u_j / (1 - u_j), u_j = p^{-lambda_j - i <m, e_j>}.
cplx finite_transform(const Fan& fan, const CVec& lambda, std::uint64_t p,
                      std::span<const double> m);

// finite_transform(p) * prod_j (1 - u_j): the Euler factor of c_f.
cplx cf_factor(const Fan& fan, const CVec& lambda, std::uint64_t p, std::span<const double> m);

// prod_{p <= pmax} cf_factor(p).
cplx cf_extract(const Fan& fan, const CVec& lambda, std::uint64_t pmax, std::span<const double> m);

// Hf = c_f(pmax) * prod_j zeta(lambda_j + i <e_j, m>).
cplx finite_euler(const Fan& fan, const CVec& lambda, std::uint64_t pmax, std::span<const double> m);

struct PoissonOptions {
  double bound = 1e6;       // direct side enumeration bound
  double radius = 200.0;    // quadrature cut |m| <= R (checked against 2R)
  double tol = 1e-4;        // relative agreement required
  std::uint64_t pmax = 1000;  // c_f truncation
  int threads = 0;
};

struct PoissonReport {
  double s = 2.0;          // total exponent s * rho
  double direct = 0.0;     // extrapolated direct sum
  double direct_partial = 0.0;
  double direct_tail = 0.0;
  double fourier = 0.0;
  double fourier_imag = 0.0;
  double quad_error = 0.0;     // |I(2R) - I(R)| plus quadrature estimates
  double factorization_error = 0.0;  // product fans only
  double rel_diff = 0.0;
  bool passed = false;
};

// The Fourier side of a one-dimensional fan: 2 + (2 pi)^{-1} int (Hf - 1) H_inf dm.
struct FourierSide {
  double value = 0.0;
  double imag = 0.0;
  double error = 0.0;
};
FourierSide poisson_fourier_1d(const Fan& fan, double s, double radius, std::uint64_t pmax);

// Direct side: zeta partial sum at s * rho plus the tail from a fit of N(B).
struct DirectSide {
  double value = 0.0;
  double partial = 0.0;
  double tail = 0.0;
};
DirectSide poisson_direct(const Fan& fan, double s, double bound, int threads = 0);

// d = 1 fans.
PoissonReport poisson_check(const Fan& fan, double s, const PoissonOptions& opt = {});
// Product of two d = 1 fans: the direct side is summed on the product fan, the
// Fourier side is the product of the factor integrals, after checking that the
// product fan's transforms factor at sample points.
PoissonReport poisson_check_product(const Fan& a, const Fan& b, double s,
                                    const PoissonOptions& opt = {});

}  // namespace manin
