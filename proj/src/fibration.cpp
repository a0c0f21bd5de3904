#include "manin/fibration.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace manin {

long long BasePoint::height() const { return std::max(std::llabs(b0), std::llabs(b1)); }

BasePoint normalize(long long b0, long long b1) {
  if (b0 == 0 && b1 == 0) throw std::invalid_argument("base point (0 : 0)");
  const long long g = std::gcd(b0, b1);
  b0 /= g;
  b1 /= g;
  if (b0 < 0 || (b0 == 0 && b1 < 0)) {
    b0 = -b0;
    b1 = -b1;
  }
  return {b0, b1};
}

AdelicOffset torsor_class(const TorsorSpec& spec, const BasePoint& b) {
  AdelicOffset g;
  g.arch = {0.0};
  if (spec.n == 0) return g;
  // the chosen coordinate must not vanish
  const bool use_x0 = spec.section == Section::x0 ? b.b0 != 0 : b.b1 == 0;
  const long long c = use_x0 ? b.b0 : b.b1;
  for (const auto& [p, e] : factor_integer(Integer(std::llabs(c))))
    g.finite[p] = {-spec.n * e};
  g.arch[0] = spec.n * (std::log(static_cast<double>(std::llabs(c))) -
                        std::log(static_cast<double>(b.height())));
  return g;
}

Fan fibration_fiber_fan() { return Fan(1, {{1}, {-1}}, {{0}, {1}}, "p1"); }

std::vector<double> total_lambda(const std::vector<double>& fiber_lambda, double a) {
  if (fiber_lambda.size() != 2) throw std::invalid_argument("fiber lambda must have 2 entries");
  return {0.5 * a, fiber_lambda[0], 0.5 * a, fiber_lambda[1]};
}

FibrationPicard fibration_picard(const TorsorSpec& spec) {
  FibrationPicard fp;
  fp.n = spec.n;
  const Rational n(spec.n);
  // m in M_fiber goes to (<e2, m>, <-e2, m>) in PL(fiber), and the torsor
  // class moves it by -n m in Pic(P1)
  fp.m_rows = {{Rational(1), Rational(-1), n}};
  fp.quotient = {{Rational(1), Rational(1), Rational(0)}, {Rational(0), n, Rational(1)}};
  fp.anticanonical = mat_vec(fp.quotient, {Rational(1), Rational(1), Rational(2)});
  // rays e1, e2, (-1, n), -e2 as divisors in V: base rays each give O(1)
  const QMat in_v = {{Rational(0), Rational(0), Rational(1)},
                     {Rational(1), Rational(0), Rational(0)},
                     {Rational(0), Rational(0), Rational(1)},
                     {Rational(0), Rational(1), Rational(0)}};
  for (const auto& v : in_v) fp.ray_classes.push_back(mat_vec(fp.quotient, v));
  return fp;
}

PicardMatch match_picard(const FibrationPicard& fp, const Fan& fan) {
  PicardMatch out;
  if (fan.num_rays() != 4 || fan.dim() != 2) return out;
  const PicardData pd = picard_data(fan);
  const QMat toric = transpose(pd.quotient);  // rows = ray classes
  // A C = F on two independent rays
  for (std::size_t i = 0; i < 4 && !out.ok; ++i)
    for (std::size_t j = i + 1; j < 4 && !out.ok; ++j) {
      QMat c = transpose(QMat{toric[i], toric[j]});
      auto ci = inverse(c);
      if (!ci) continue;
      QMat a = mat_mul(transpose(QMat{fp.ray_classes[i], fp.ray_classes[j]}), *ci);
      bool ok = true;
      for (std::size_t k = 0; k < 4 && ok; ++k)
        ok = mat_vec(a, toric[k]) == fp.ray_classes[k];
      for (const auto& row : a)
        for (const auto& x : row) ok = ok && denominator(x) == 1;
      ok = ok && abs(determinant(a)) == 1;
      out.ok = ok;
      out.a = a;
    }
  return out;
}

Rational fibration_alpha(const TorsorSpec& spec) {
  const FibrationPicard fp = fibration_picard(spec);
  PolyhedralCone orthant;
  orthant.dim = 3;
  for (int j = 0; j < 3; ++j) {
    QVec e(3, Rational(0));
    e[j] = 1;
    orthant.generators.push_back(e);
  }
  RationalConeForm f = quotient_char(orthant, fp.m_rows);
  return char_evaluate(f, QVec{Rational(1), Rational(1), Rational(2)});
}

FibrationConstant fibration_predicted_constant(const TorsorSpec& spec, std::uint64_t pmax) {
  FibrationConstant c;
  c.n = spec.n;
  c.alpha = fibration_alpha(spec);
  // tau of the total space is tau(base) tau(fiber), both P1
  const Interval t = tamagawa_number(fibration_fiber_fan(), pmax);
  c.tau = {t.value * t.value, t.lo * t.lo, t.hi * t.hi};
  const double a = to_double(c.alpha);
  c.theta = {a * c.tau.value, a * c.tau.lo, a * c.tau.hi};
  return c;
}

namespace {

void finish(FibrationZeta& z, double B) {
  std::sort(z.heights.begin(), z.heights.end());
  z.value = 0.0;
  for (double h : z.heights) z.value += 4.0 / h;
  z.points = 4 * z.heights.size();
  auto count_below = [&](double x) {
    return static_cast<double>(std::upper_bound(z.heights.begin(), z.heights.end(), x) -
                               z.heights.begin());
  };
  const double n1 = count_below(B), n2 = count_below(B / 2.0);
  z.tail = std::numeric_limits<double>::infinity();
  if (n1 > 0 && n2 > 0) {
    const double beta = std::log2(n1 / n2);
    if (beta < 0.95) z.tail = 4.0 * n1 / B * beta / (1.0 - beta);
  }
}

}  // namespace

FibrationZeta fibration_zeta_partial(const TorsorSpec& spec, const std::vector<double>& fiber_lambda,
                                     double a, double B, ExecPolicy exec) {
  if (!(a > 0.0) || fiber_lambda.size() != 2 || !(fiber_lambda[0] > 0.0) || !(fiber_lambda[1] > 0.0))
    throw std::invalid_argument("fibration: classes must be positive");
  if (!(B >= 1.0)) throw std::invalid_argument("fibration: B must be >= 1");
  const double logB = std::log(B);
  const double border = 1e-9 * std::max(1.0, logB);
  const long long hmax = static_cast<long long>(std::floor(std::exp((logB + border) / a)));
  std::vector<BasePoint> base;
  for (long long h = 1; h <= hmax; ++h) {
    for (long long b1 = 1; b1 <= h; ++b1)
      if (std::gcd(h, b1) == 1) base.push_back({h, b1});
    for (long long b0 = 1; b0 < h; ++b0)
      if (std::gcd(b0, h) == 1) base.push_back({b0, h});
  }
  const Fan fiber = fibration_fiber_fan();
  std::vector<std::vector<double>> per(base.size());
  ExecPolicy inner;
  inner.serial = true;
  auto one = [&](std::size_t i) {
    const double lb = a * std::log(static_cast<double>(base[i].height()));
    if (lb > logB + border) return;
    const AdelicOffset g = torsor_class(spec, base[i]);
    std::vector<double> hs = height_multiset(fiber, fiber_lambda, std::exp(logB - lb), inner, &g);
    for (double h : hs) {
      const double lh = lb + std::log(h);
      if (lh <= logB + border) per[i].push_back(std::exp(lh));
    }
  };
  if (exec.serial) {
    for (std::size_t i = 0; i < base.size(); ++i) one(i);
  } else {
    const int nt = exec.threads > 0 ? exec.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (std::size_t i = 0; i < base.size(); ++i) one(i);
  }
  FibrationZeta z;
  for (auto& v : per) z.heights.insert(z.heights.end(), v.begin(), v.end());
  finish(z, B);
  return z;
}

FibrationZeta toric_zeta_partial(const Fan& fan, const std::vector<double>& lambda, double B,
                                 ExecPolicy exec) {
  if (fan.dim() != 2) throw std::invalid_argument("toric_zeta_partial: surface fans only");
  FibrationZeta z;
  z.heights = height_multiset(fan, lambda, B, exec);
  finish(z, B);
  return z;
}

double fibration_point_height(const TorsorSpec& spec, const std::vector<double>& fiber_lambda,
                              double a, const BasePoint& b, const Rational& x) {
  const AdelicOffset g = torsor_class(spec, b);
  const PLFunction f = PLFunction::real(fibration_fiber_fan(), fiber_lambda);
  return std::pow(static_cast<double>(b.height()), a) *
         global_height_real(f, valuation_profile({x}), &g);
}

double toric_point_height(const Fan& fan, const std::vector<double>& lambda, const BasePoint& b,
                          const Rational& x) {
  if (b.b0 == 0 || b.b1 == 0) throw std::invalid_argument("base point outside the torus");
  const PLFunction f = PLFunction::real(fan, lambda);
  return global_height_real(f, valuation_profile({Rational(Integer(b.b1), Integer(b.b0)), x}));
}

ArakelovL arakelov_L_partial(const TorsorSpec& spec, double a, double m, long long H) {
  if (!(a > 2.0)) throw std::domain_error("arakelov_L_partial: a must exceed 2");
  if (H < 1) throw std::invalid_argument("arakelov_L_partial: H must be >= 1");
  ArakelovL out;
  const double mm[1] = {m};
  ValuationProfile one = valuation_profile({Rational(1)});
  auto add = [&](long long b0, long long b1) {
    const BasePoint b{b0, b1};
    const AdelicOffset g = torsor_class(spec, b);
    out.value += std::conj(character_pairing(mm, one, &g)) *
                 std::pow(static_cast<double>(b.height()), -a);
    ++out.terms;
  };
  add(1, 0);
  add(0, 1);
  for (long long h = 1; h <= H; ++h) {
    for (long long c = -h; c <= h; ++c) {
      if (c == 0 || std::gcd(h, c) != 1) continue;
      add(h, c);  // b0 = h
      if (c > 0 && c < h) {
        add(c, h);  // b1 = +-h
        add(c, -h);
      }
    }
  }
  out.tail_bound = 4.0 * std::pow(static_cast<double>(H), 2.0 - a) / (a - 2.0);
  return out;
}

}  // namespace manin
