#include "manin/fourier.hpp"

#include "manin/counting.hpp"
#include "manin/primes.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

using namespace manin;

TEST_CASE("archimedean transform of P1 against quadrature") {
  Fan p1 = builtin_fan("p1");
  for (double s : {1.5, 2.0, 3.0})
    for (double m : {0.0, 0.7, 4.0}) {
      const double mm[1] = {m};
      cplx a = arch_transform(p1, {s, s}, mm);
      // int_R exp(-s|v|) cos(m v) dv; the sine part vanishes
      auto f = [&](double v) { return std::exp(-s * v) * std::cos(m * v); };
      double q = 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                           f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
      CHECK(a.real() == doctest::Approx(q).epsilon(1e-10));
      CHECK(std::fabs(a.imag()) < 1e-14);
    }
}

TEST_CASE("archimedean transform of P2 against a 2-d quadrature") {
  Fan p2 = builtin_fan("p2");
  const double s = 2.0;
  const double m[2] = {0.4, -1.1};
  cplx a = arch_transform(p2, {s, s, s}, m);
  PLFunction pl = PLFunction::real(p2, {s, s, s});
  // polar coordinates: int_theta int_r exp(-r phi(w) - i r <m, w>) r dr
  //   = int_theta 1 / (phi(w) + i <m, w>)^2
  auto f = [&](double th) {
    double w[2] = {std::cos(th), std::sin(th)};
    cplx den = pl_evaluate_real(pl, w) + cplx(0.0, m[0] * w[0] + m[1] * w[1]);
    return (1.0 / (den * den)).real();
  };
  // kinks at the ray directions
  double breaks[] = {0.0, kPi / 2, 5 * kPi / 4, 2 * kPi};
  double q = 0.0;
  for (int i = 0; i < 3; ++i)
    q += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, breaks[i], breaks[i + 1], 15, 1e-13);
  CHECK(a.real() == doctest::Approx(q).epsilon(1e-9));
}

TEST_CASE("finite transform against the lattice sum") {
  Fan f = builtin_fan("p1xp1");
  const CVec lam{1.7, 2.1, 1.3, 2.6};
  PLFunction pl{f, lam};
  const double m[2] = {0.9, -2.3};
  for (std::uint64_t p : {2, 3, 5}) {
    cplx direct = 0.0;
    const double lp = std::log(static_cast<double>(p));
    for (int a = -40; a <= 40; ++a)
      for (int b = -40; b <= 40; ++b) {
        double n[2] = {static_cast<double>(a), static_cast<double>(b)};
        direct += std::exp(-pl_evaluate(pl, n) * lp - cplx(0.0, (m[0] * a + m[1] * b) * lp));
      }
    cplx ft = finite_transform(f, lam, p, m);
    CHECK(std::abs(ft - direct) < 1e-12 * std::abs(direct));
  }
}

TEST_CASE("P1 Euler factor: c_f = 1 - p^{-2s}") {
  Fan p1 = builtin_fan("p1");
  const double m0[1] = {0.0};
  for (std::uint64_t p : {2, 3, 7}) {
    cplx c = cf_factor(p1, {2.0, 2.0}, p, m0);
    CHECK(c.real() == doctest::Approx(1.0 - std::pow(static_cast<double>(p), -4.0)).epsilon(1e-14));
  }
  // Hf(0) = zeta(s)^2 / zeta(2s) up to the truncation
  cplx h = finite_euler(p1, {2.0, 2.0}, 100000, m0);
  const double expect = std::pow(zeta_real(2.0), 2) / zeta_real(4.0);
  CHECK(h.real() == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("product fans: transforms factor") {
  Fan p1 = builtin_fan("p1");
  Fan pp = product_fan(p1, p1);
  const double m[2] = {1.3, -0.2}, ma[1] = {1.3}, mb[1] = {-0.2};
  cplx lhs = arch_transform(pp, CVec(4, 2.0), m);
  cplx rhs = arch_transform(p1, CVec(2, 2.0), ma) * arch_transform(p1, CVec(2, 2.0), mb);
  CHECK(std::abs(lhs - rhs) < 1e-14 * std::abs(rhs));
  lhs = finite_transform(pp, CVec(4, 2.0), 5, m);
  rhs = finite_transform(p1, CVec(2, 2.0), 5, ma) * finite_transform(p1, CVec(2, 2.0), 5, mb);
  CHECK(std::abs(lhs - rhs) < 1e-14 * std::abs(rhs));
}

TEST_CASE("Poisson identity on P1 at 2 rho (reduced settings)") {
  PoissonOptions opt;
  opt.bound = 1e5;
  opt.radius = 100;
  opt.pmax = 300;
  opt.tol = 1e-3;
  PoissonReport rep = poisson_check(builtin_fan("p1"), 2.0, opt);
  CHECK(rep.passed);
  CHECK(rep.rel_diff < 1e-3);
  // Z(2 rho) for P1 = 2 sum over coprime (a, b), b > 0, a != 0 of max^-4 = 4 (zeta(3)/zeta(4) - 1) + 2
  const double exact = 4.0 * (zeta_real(3.0) / zeta_real(4.0) - 1.0) + 2.0;
  CHECK(rep.fourier == doctest::Approx(exact).epsilon(1e-3));
  CHECK(rep.direct == doctest::Approx(exact).epsilon(1e-5));
}

TEST_CASE("Poisson direct side needs s > 1") {
  CHECK_THROWS_AS(poisson_direct(builtin_fan("p1"), 1.0, 100), std::domain_error);
  CHECK_THROWS_AS(poisson_fourier_1d(builtin_fan("p2"), 2.0, 10, 10), std::invalid_argument);
}
