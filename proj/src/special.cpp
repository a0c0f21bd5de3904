#include "manin/special.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace manin {

cplx zeta(cplx s) {
  if (s == cplx(1.0, 0.0)) throw std::domain_error("zeta: pole at s = 1");
  const double abs_s = std::abs(s);
  const int n_cut = 20 + static_cast<int>(std::ceil(0.25 * abs_s));
  cplx sum = 0.0;
  for (int n = 1; n < n_cut; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  const double big_n = n_cut;
  const cplx n_pow = std::exp(-s * std::log(big_n));  // N^{-s}
  sum += n_pow * big_n / (s - 1.0) + 0.5 * n_pow;

  // Bernoulli tail: B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}.
  // term_k = B_{2k}/(2k)! * s (s+1) ... (s+2k-2) * N^{-s-2k+1}
  static const std::vector<double> bern = [] {
    std::vector<double> b;
    const double two_pi_sq = 4.0 * kPi * kPi;
    double pw = 1.0;
    for (int k = 1; k <= 80; ++k) {
      pw *= two_pi_sq;
      b.push_back((k % 2 ? 2.0 : -2.0) * zeta_real(2.0 * k) / pw);
    }
    return b;
  }();
  cplx rising = s;                       // s (s+1) ... (s+2k-2)
  cplx n_factor = n_pow / big_n;         // N^{-s-2k+1} for k = 1
  double prev = HUGE_VAL;
  for (int k = 1; k <= 80; ++k) {
    cplx term = bern[k - 1] * rising * n_factor;
    double mag = std::abs(term);
    if (mag > prev) break;
    sum += term;
    if (mag < 1e-17 * std::abs(sum)) break;
    prev = mag;
    rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
    n_factor /= big_n * big_n;
  }
  return sum;
}

double zeta_real(double s) { return boost::math::zeta(s); }

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double tol,
                     int panels) {
  QuadResult out;
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    double lo = a + i * h;
    double hi = (i + 1 == panels) ? b : a + (i + 1) * h;
    double err = 0.0;
    out.value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, tol,
                                                                               &err);
    out.error += err;
  }
  return out;
}

QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a, double tol) {
  boost::math::quadrature::exp_sinh<double> rule;
  QuadResult out;
  double l1 = 0.0;
  out.value = rule.integrate([&](double t) { return f(a + t); }, tol, &out.error, &l1);
  return out;
}

}  // namespace manin
