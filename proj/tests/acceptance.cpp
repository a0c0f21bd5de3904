// One line per acceptance criterion; exit status = number of failures.

#include "manin/cone.hpp"
#include "manin/counting.hpp"
#include "manin/fibration.hpp"
#include "manin/fourier.hpp"
#include "manin/special.hpp"
#include "manin/tauber.hpp"
#include "manin/toric.hpp"

#include "cone_oracles.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace manin;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& text) {
  std::printf("[%s] %d  %s\n", ok ? "PASS" : "FAIL", id, text.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> rho(const Fan& f) { return std::vector<double>(f.num_rays(), 1.0); }

void guarded(int id, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

void criterion1() {
  Fan p1 = builtin_fan("p1");
  ExecPolicy one;
  one.threads = 1;
  std::vector<std::uint64_t> small, big;
  const double t = seconds([&] {
    small = count_points(p1, rho(p1), {1, 4, 9}, one);
    big = count_points(p1, rho(p1), {1e6}, one);
  });
  const double target = 12.0 / (kPi * kPi);
  const double dev = std::fabs(big[0] / 1e6 - target) / target;
  const bool ok = small == std::vector<std::uint64_t>{2, 6, 14} && dev < 0.05 && t < 10.0;
  report(1, ok,
         fmt("P1: N(1e6)/1e6 = %.6f vs 12/pi^2 = %.6f (rel dev %.2e, tol 5e-2); N(1,4,9) = %llu,%llu,%llu "
             "(want 2,6,14); %.2f s single-threaded (limit 10 s)",
             big[0] / 1e6, target, dev, (unsigned long long)small[0], (unsigned long long)small[1],
             (unsigned long long)small[2], t));
}

void criterion2() {
  Fan p2 = builtin_fan("p2");
  std::vector<std::uint64_t> n;
  const double t = seconds([&] { n = count_points(p2, rho(p2), {1e5}); });
  const double target = 4.0 / zeta_real(3.0);
  const double dev = std::fabs(n[0] / 1e5 - target) / target;
  // brute-force projective count at a smaller bound
  const bool oracle_ok = count_points(p2, rho(p2), {27000})[0] == oracle::p2_count(27000);
  report(2, dev < 0.10 && t < 120.0 && oracle_ok,
         fmt("P2: N(1e5)/1e5 = %.5f vs 4/zeta(3) = %.5f (rel dev %.2e, tol 1e-1); brute-force "
             "match at 27000: %s; %.2f s (limit 120 s)",
             n[0] / 1e5, target, dev, oracle_ok ? "yes" : "no", t));
}

void criterion3() {
  Fan pp = builtin_fan("p1xp1");
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(std::pow(10.0, 2.0 + 0.25 * i));
  auto n = count_points(pp, rho(pp), grid);
  const double B = 1e4;
  const double N = static_cast<double>(n.back());
  const double target = 144.0 / std::pow(kPi, 4);
  const double dev = std::fabs(N / (B * std::log(B)) - target) / target;
  const std::uint64_t oracle_n = oracle::p1xp1_count(B);
  std::vector<double> Nd(n.begin(), n.end());
  AsymptoticFit f1 = fit_asymptotic(grid, Nd, 1.0, 1);
  AsymptoticFit f2 = fit_asymptotic(grid, Nd, 1.0, 2);
  AsymptoticFit f3 = fit_asymptotic(grid, Nd, 1.0, 3);
  // degree 1 in log B: a constant is clearly worse, log^2 B buys little (what
  // is left is the fluctuating error term, not a missing power of log)
  const bool fit_ok = f2.rel_residual < 0.1 && f1.rel_residual > 3.0 * f2.rel_residual &&
                      f3.rel_residual > 0.5 * f2.rel_residual;
  report(3, dev < 0.15 && n.back() == oracle_n && fit_ok,
         fmt("P1xP1: N(1e4)/(B log B) = %.5f vs 144/pi^4 = %.5f (rel dev %.2e, tol 1.5e-1); product "
             "oracle %llu vs %llu; fit residual by degree in log B: 0 %.2e, 1 %.2e, 2 %.2e",
             N / (B * std::log(B)), target, dev, (unsigned long long)n.back(),
             (unsigned long long)oracle_n, f1.rel_residual, f2.rel_residual, f3.rel_residual));
}

void criterion4() {
  const std::uint64_t pmax = 1000000;
  const double z2 = zeta_real(2.0), z3 = zeta_real(3.0);
  struct Row {
    const char* fan;
    Rational alpha;
    double tau;
  };
  const Row rows[] = {{"p1", Rational(1, 2), 24.0 / (kPi * kPi)},
                      {"p2", Rational(1, 3), 12.0 / z3},
                      {"p1xp1", Rational(1, 4), 16.0 / (z2 * z2)}};
  bool ok = true;
  std::string text;
  for (const auto& r : rows) {
    Fan f = builtin_fan(r.fan);
    Rational a = alpha_constant(f);
    Interval t = tamagawa_number(f, pmax);
    const bool row_ok = a == r.alpha && t.contains(r.tau) && t.rel_width() < 1e-3;
    ok = ok && row_ok;
    text += fmt("%s alpha %s tau [%.9f, %.9f] width %.1e %s; ", r.fan, to_string(a).c_str(), t.lo,
                t.hi, t.rel_width(), row_ok ? "ok" : "BAD");
  }
  report(4, ok, "constants at pmax 1e6: " + text);
}

void criterion5() {
  using namespace cone_oracle;
  std::mt19937_64 rng(2024);
  double worst_route = 0.0;
  std::size_t nfix = 0;
  for (const auto& fx : fixtures()) {
    PolyhedralCone c = cone(fx.gens);
    RationalConeForm direct = quotient_char(c, fx.m);
    std::vector<double> zr = interior_point(c, rng);
    QVec zref;
    for (double x : zr) zref.push_back(Rational(static_cast<long>(std::lround(x * 1000)), 1000));
    RationalConeForm pushed = residue_pushforward(char_function(c), fx.m, zref);
    for (int i = 0; i < 100; ++i) {
      auto z = interior_point(c, rng);
      const double a = char_evaluate(direct, z), b = char_evaluate(pushed, z);
      worst_route = std::max(worst_route, std::fabs(a - b) / std::fabs(a));
    }
    ++nfix;
  }
  double worst2 = 0.0, worst3 = 0.0;
  for (auto gens : std::vector<std::vector<std::vector<long>>>{
           {{1, 0}, {0, 1}}, {{1, 0}, {1, 3}}, {{2, 1}, {-1, 4}}, {{1, 0}, {1, 1}, {0, 1}, {-1, 2}}}) {
    PolyhedralCone c = cone(gens);
    RationalConeForm f = char_function(c);
    for (int i = 0; i < 10; ++i) {
      auto z = interior_point(c, rng);
      const double q = quad_2d(c, z.data());
      worst2 = std::max(worst2, std::fabs(char_evaluate(f, z) - q) / q);
    }
  }
  for (auto gens : std::vector<std::vector<std::vector<long>>>{
           {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
           {{1, 0, 0}, {0, 1, 0}, {1, 1, 2}},
           {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, -1}},
           {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}}) {
    PolyhedralCone c = cone(gens);
    RationalConeForm f = char_function(c);
    for (int i = 0; i < 10; ++i) {
      auto z = interior_point(c, rng);
      const double q = quad_3d(c, z.data());
      worst3 = std::max(worst3, std::fabs(char_evaluate(f, z) - q) / q);
    }
  }
  report(5, nfix >= 5 && worst_route < 1e-9 && worst2 < 1e-6 && worst3 < 1e-6,
         fmt("cones: quotient_char vs residue steps on %zu fixtures x 100 points, max rel err %.1e "
             "(tol 1e-9); char_function vs dual quadrature 2-d %.1e, 3-d %.1e (tol 1e-6)",
             nfix, worst_route, worst2, worst3));
}

void criterion6() {
  PoissonOptions opt;
  opt.tol = 1e-4;
  Fan p1 = builtin_fan("p1");
  PoissonReport a = poisson_check(p1, 2.0, opt);
  PoissonOptions opt2 = opt;
  opt2.bound = 1e5;
  PoissonReport b = poisson_check_product(p1, p1, 2.0, opt2);
  report(6, a.passed && b.passed,
         fmt("Poisson at 2 rho: P1 direct %.9f fourier %.9f rel %.1e; P1xP1 direct %.9f fourier %.9f "
             "rel %.1e, factorization err %.1e (tol 1e-4)",
             a.direct, a.fourier, a.rel_diff, b.direct, b.fourier, b.rel_diff, b.factorization_error));
}

void criterion7() {
  auto z2 = DirichletOracle::zeta_squared();
  const double X = 1e5;
  PerronOptions opt;
  opt.T = 3000;
  opt.panel = 0.5;
  const bool small_ok = divisor_summatory(100) == 482;
  PerronResult top = perron_phi_k(z2, X, 1, opt);
  auto eps = balanced_eps(z2, 1, X, top.value, top.hi() - top.lo());
  DescendResult d = descend_to_count(z2, 1, X, eps, opt);
  const double exact = z2.count(X);
  const double half = 0.5 * (d.bracket.hi - d.bracket.lo) / exact;
  const bool bracket_ok = d.bracket.contains(exact) && half < 0.02;
  std::vector<double> grid;
  for (double x = 1e4; x <= 1e9; x *= 2.0) grid.push_back(x + 0.5);
  CompareReport cmp = compare(z2, *z2.pole, grid);
  const double target = 2.0 * kEulerGamma - 1.0;
  const double fit_dev = std::fabs(cmp.lower_order[0] - target) / target;
  ResidueCheck rc = residue_consistency(z2, X, 3, 3000, 1e-3);
  ContourCheck cc = contour_independence(z2, X, 3, 3000, 1e-3);
  report(7, small_ok && bracket_ok && fit_dev < 0.02 && rc.passed && cc.passed,
         fmt("zeta^2: D(1e5) = %.0f in [%.0f, %.0f] (half width %.2f%%, tol 2%%, from phi_1 with "
             "eta = %.2e); 2gamma-1 fit %.6f vs %.6f (rel %.1e); residue mismatch %.1e, contour "
             "diff %.1e (tol 1e-3); D(100) = 482: %s",
             exact, d.bracket.lo, d.bracket.hi, 100 * half, d.eta[0], cmp.lower_order[0], target,
             fit_dev, rc.rel_mismatch, cc.diff / std::fabs(cc.v1), small_ok ? "yes" : "no"));
}

void criterion8() {
  const std::uint64_t pmax = 1000000;
  const std::vector<double> fl{1.0, 1.0};
  bool ok = true;
  std::string text;
  for (int n : {0, 1, 2}) {
    const TorsorSpec spec{n};
    FibrationConstant fc = fibration_predicted_constant(spec, pmax);
    Fan fan = hirzebruch_fan(n);
    LeadingConstant lc = leading_constant(fan, pmax);
    const bool alpha_eq = fc.alpha == lc.alpha;
    const bool overlap = fc.tau.lo <= lc.tau.hi && lc.tau.lo <= fc.tau.hi;
    FibrationZeta fz = fibration_zeta_partial(spec, fl, 2.0, 1e3);
    FibrationZeta tz = toric_zeta_partial(fan, total_lambda(fl, 2.0), 1e3);
    bool same = fz.heights.size() == tz.heights.size();
    for (std::size_t i = 0; same && i < fz.heights.size(); ++i)
      same = std::fabs(fz.heights[i] - tz.heights[i]) <= 1e-10 * tz.heights[i];
    const double rel = std::fabs(fz.value - tz.value) / tz.value;
    bool row = alpha_eq && overlap && same && rel < 1e-10;
    if (n == 0) {
      // against the P1 x P1 pipeline itself
      Fan pp = builtin_fan("p1xp1");
      LeadingConstant lp = leading_constant(pp, pmax);
      FibrationZeta pz = toric_zeta_partial(pp, std::vector<double>(4, 1.0), 1e3);
      // integer heights, so equal multisets means equal after rounding
      bool exact = pz.heights.size() == fz.heights.size();
      for (std::size_t i = 0; exact && i < fz.heights.size(); ++i)
        exact = std::fabs(fz.heights[i] - std::round(fz.heights[i])) < 1e-9 * fz.heights[i] &&
                std::llround(fz.heights[i]) == std::llround(pz.heights[i]);
      exact = exact && fc.alpha == lp.alpha &&
                         std::fabs(fc.theta.value - lp.theta.value) < 1e-9 * lp.theta.value;
      row = row && exact;
    }
    ok = ok && row;
    text += fmt("n=%d alpha %s/%s tau overlap %s, %llu points, sum rel diff %.1e %s; ", n,
                to_string(fc.alpha).c_str(), to_string(lc.alpha).c_str(), overlap ? "yes" : "no",
                (unsigned long long)fz.points, rel, row ? "ok" : "BAD");
  }
  report(8, ok, "fibration vs F_n at B = 1e3, pmax 1e6: " + text);
}

void criterion9() {
  bool ok = true;
  std::string text;
  for (BoundKind k : {BoundKind::Plus, BoundKind::Minus, BoundKind::Alpha, BoundKind::Omega}) {
    SweepReport r = verify_integral_bounds(k);
    ok = ok && r.passed();
    text += fmt("%s sup %.4f -> %.4f over +2 decades %s; ", to_string(k).c_str(), r.sup_base,
                r.sup_extended, r.passed() ? "ok" : "BAD");
  }
  report(9, ok, "integral bound sweeps: " + text);
}

}  // namespace

int main() {
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
