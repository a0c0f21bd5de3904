#include "manin/fourier.hpp"

#include "manin/counting.hpp"
#include "manin/primes.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace manin {

namespace {

double pair(const std::vector<long>& e, std::span<const double> m) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * m[i];
  return s;
}

void check_sizes(const Fan& fan, const CVec& lambda, std::span<const double> m) {
  if (lambda.size() != fan.num_rays() || m.size() != static_cast<std::size_t>(fan.dim()))
    throw std::invalid_argument("fourier: size mismatch");
}

// u_j for every ray
CVec ray_u(const Fan& fan, const CVec& lambda, std::uint64_t p, std::span<const double> m) {
  const double lp = std::log(static_cast<double>(p));
  CVec u(fan.num_rays());
  for (std::size_t j = 0; j < u.size(); ++j)
    u[j] = std::exp(-(lambda[j] + cplx(0.0, pair(fan.rays()[j], m))) * lp);
  return u;
}

// 30-point Gauss on unit panels; the 20-point rule on the same panels gives
// the error estimate.
struct PanelSum {
  cplx value = 0.0;
  double error = 0.0;
};

template <class F>
PanelSum panel(F&& f, double a, double b) {
  using G30 = boost::math::quadrature::gauss<double, 30>;
  using G20 = boost::math::quadrature::gauss<double, 20>;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  auto rule = [&](const auto& x, const auto& w, bool odd) {
    cplx s = odd ? w[0] * f(c) : cplx(0.0);
    for (std::size_t i = odd ? 1 : 0; i < x.size(); ++i)
      s += w[i] * (f(c + h * x[i]) + f(c - h * x[i]));
    return s * h;
  };
  cplx v30 = rule(G30::abscissa(), G30::weights(), false);
  cplx v20 = rule(G20::abscissa(), G20::weights(), false);
  return {v30, std::abs(v30 - v20)};
}

}  // namespace

cplx arch_transform(const Fan& fan, const CVec& lambda, std::span<const double> m) {
  check_sizes(fan, lambda, m);
  cplx total = 0.0;
  for (const auto& cone : fan.max_cones()) {
    cplx term = 1.0;
    for (int j : cone) {
      const cplx den = lambda[j] + cplx(0.0, pair(fan.rays()[j], m));
      if (den == cplx(0.0)) throw std::domain_error("arch_transform: vanishing denominator");
      term /= den;
    }
    total += term;
  }
  return total;
}

cplx finite_transform(const Fan& fan, const CVec& lambda, std::uint64_t p,
                      std::span<const double> m) {
  check_sizes(fan, lambda, m);
  CVec u = ray_u(fan, lambda, p, m);
  cplx total = 0.0;
  for (const auto& cone : fan.cones()) {
    cplx term = 1.0;
    for (int j : cone) term *= u[j] / (1.0 - u[j]);
    total += term;
  }
  return total;
}

cplx cf_factor(const Fan& fan, const CVec& lambda, std::uint64_t p, std::span<const double> m) {
  CVec u = ray_u(fan, lambda, p, m);
  cplx total = 0.0;
  for (const auto& cone : fan.cones()) {
    cplx term = 1.0;
    for (int j : cone) term *= u[j] / (1.0 - u[j]);
    total += term;
  }
  for (const cplx& x : u) total *= 1.0 - x;
  return total;
}

cplx cf_extract(const Fan& fan, const CVec& lambda, std::uint64_t pmax, std::span<const double> m) {
  check_sizes(fan, lambda, m);
  cplx prod = 1.0;
  for (std::uint32_t p : primes_up_to(pmax)) prod *= cf_factor(fan, lambda, p, m);
  return prod;
}

cplx finite_euler(const Fan& fan, const CVec& lambda, std::uint64_t pmax, std::span<const double> m) {
  cplx v = cf_extract(fan, lambda, pmax, m);
  for (std::size_t j = 0; j < fan.num_rays(); ++j)
    v *= zeta(lambda[j] + cplx(0.0, pair(fan.rays()[j], m)));
  return v;
}

FourierSide poisson_fourier_1d(const Fan& fan, double s, double radius, std::uint64_t pmax) {
  if (fan.dim() != 1) throw std::invalid_argument("poisson_fourier_1d: fan must be one-dimensional");
  if (!(s > 1.0)) throw std::domain_error("poisson: total exponent must exceed 1");
  const CVec lambda(fan.num_rays(), cplx(s));
  const auto primes = primes_up_to(pmax);
  auto g = [&](double mm) {
    const double m[1] = {mm};
    cplx cf = 1.0;
    for (std::uint32_t p : primes) cf *= cf_factor(fan, lambda, p, m);
    cplx hf = cf;
    for (std::size_t j = 0; j < fan.num_rays(); ++j)
      hf *= zeta(lambda[j] + cplx(0.0, fan.rays()[j][0] * mm));
    return 2.0 * arch_transform(fan, lambda, m) * (hf - 1.0);
  };
  // integrate over [-2R, 2R] on unit panels; the [-R, R] part is kept so the
  // cut can be judged
  const int n = static_cast<int>(std::ceil(radius));
  cplx inner = 0.0, outer = 0.0;
  double qerr = 0.0;
  for (int k = -2 * n; k < 2 * n; ++k) {
    PanelSum ps = panel(g, k, k + 1);
    qerr += ps.error;
    if (k >= -n && k < n)
      inner += ps.value;
    else
      outer += ps.value;
  }
  const double norm = 1.0 / (2.0 * kPi);
  FourierSide out;
  // (2 pi)^{-1} int 2 arch_transform dm = 2 (the n = 0 term)
  const cplx total = 2.0 + norm * (inner + outer);
  out.value = total.real();
  out.imag = total.imag();
  out.error = norm * (std::abs(outer) + qerr);
  return out;
}

DirectSide poisson_direct(const Fan& fan, double s, double bound, int threads) {
  if (!(s > 1.0)) throw std::domain_error("poisson: total exponent must exceed 1");
  ExecPolicy exec;
  exec.threads = threads;
  CVec lambda(fan.num_rays(), cplx(s));
  ZetaPartial zp = zeta_partial(fan, lambda, bound, exec);
  const int r = static_cast<int>(fan.num_rays()) - fan.dim();
  std::vector<double> grid;
  for (int k = 3; k >= 0; --k) grid.push_back(bound / std::pow(10.0, k));
  std::vector<double> rho(fan.num_rays(), 1.0);
  auto counts = count_points(fan, rho, grid, exec);
  std::vector<double> N(counts.begin(), counts.end());
  AsymptoticFit fit = fit_asymptotic(grid, N, 1.0, r);
  // sum_{H > B} H^{-s} = -N(B) B^{-s} + s int_B^inf N(u) u^{-s-1} du, with the fitted N
  const double L = std::log(bound);
  double integral = 0.0;
  for (int k = 0; k < r; ++k)
    integral += fit.coeffs[k] * boost::math::tgamma(static_cast<double>(k + 1), (s - 1.0) * L) /
                std::pow(s - 1.0, k + 1);
  DirectSide out;
  out.partial = zp.value.real();
  out.tail = -N.back() * std::pow(bound, -s) + s * integral;
  out.value = out.partial + out.tail;
  return out;
}

PoissonReport poisson_check(const Fan& fan, double s, const PoissonOptions& opt) {
  PoissonReport rep;
  rep.s = s;
  DirectSide d = poisson_direct(fan, s, opt.bound, opt.threads);
  FourierSide f = poisson_fourier_1d(fan, s, opt.radius, opt.pmax);
  rep.direct = d.value;
  rep.direct_partial = d.partial;
  rep.direct_tail = d.tail;
  rep.fourier = f.value;
  rep.fourier_imag = f.imag;
  rep.quad_error = f.error;
  rep.rel_diff = std::fabs(rep.direct - rep.fourier) / std::fabs(rep.fourier);
  rep.passed = rep.rel_diff < opt.tol && rep.quad_error < opt.tol * std::fabs(rep.fourier) &&
               std::fabs(rep.fourier_imag) < 1e-10;
  return rep;
}

PoissonReport poisson_check_product(const Fan& a, const Fan& b, double s,
                                    const PoissonOptions& opt) {
  if (a.dim() != 1 || b.dim() != 1)
    throw std::invalid_argument("poisson_check_product: factors must be one-dimensional");
  const Fan prod = product_fan(a, b);
  PoissonReport rep;
  rep.s = s;
  // the product fan's transforms must factor
  const CVec la(a.num_rays(), cplx(s)), lb(b.num_rays(), cplx(s)), lp(prod.num_rays(), cplx(s));
  double worst = 0.0;
  for (double m1 : {0.0, 0.3, -1.7, 5.0})
    for (double m2 : {0.0, 2.2, -0.4, 11.0}) {
      const double m[2] = {m1, m2};
      const double ma[1] = {m1}, mb[1] = {m2};
      cplx lhs = arch_transform(prod, lp, m);
      cplx rhs = arch_transform(a, la, ma) * arch_transform(b, lb, mb);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
      for (std::uint64_t p : {2, 3, 7}) {
        lhs = finite_transform(prod, lp, p, m);
        rhs = finite_transform(a, la, p, ma) * finite_transform(b, lb, p, mb);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
      }
    }
  rep.factorization_error = worst;
  DirectSide d = poisson_direct(prod, s, opt.bound, opt.threads);
  FourierSide fa = poisson_fourier_1d(a, s, opt.radius, opt.pmax);
  FourierSide fb = poisson_fourier_1d(b, s, opt.radius, opt.pmax);
  const cplx f = cplx(fa.value, fa.imag) * cplx(fb.value, fb.imag);
  rep.direct = d.value;
  rep.direct_partial = d.partial;
  rep.direct_tail = d.tail;
  rep.fourier = f.real();
  rep.fourier_imag = f.imag();
  rep.quad_error = std::fabs(fa.value) * fb.error + std::fabs(fb.value) * fa.error;
  rep.rel_diff = std::fabs(rep.direct - rep.fourier) / std::fabs(rep.fourier);
  rep.passed = rep.rel_diff < opt.tol && rep.quad_error < opt.tol * std::fabs(rep.fourier) &&
               std::fabs(rep.fourier_imag) < 1e-10 && worst < 1e-12;
  return rep;
}

}  // namespace manin
