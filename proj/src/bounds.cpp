#include "manin/cone.hpp"
#include "manin/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace manin {

namespace {

// Integral over [lo, hi] with panels clustered geometrically toward both
// ends (integrands here have unit-scale features at kinks and scale-A
// features elsewhere).
double integrate_segment(const std::function<double(double)>& f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  std::vector<double> pts{lo, hi};
  const double len = hi - lo;
  for (double s = 1e-3; s < 0.5 * len; s *= 10.0) {
    pts.push_back(lo + s);
    pts.push_back(hi - s);
  }
  pts.push_back(lo + 0.5 * len);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i + 1] > pts[i]) total += integrate(f, pts[i], pts[i + 1], 1e-9).value;
  return total;
}

// Integral over [x0, inf): substitute t = x0 + s e^u style via t = x0 + e^u - 1.
double integrate_tail(const std::function<double(double)>& f, double x0) {
  auto g = [&](double u) {
    double e = std::exp(u);
    if (!std::isfinite(e)) return 0.0;
    double v = f(x0 + e - 1.0) * e;
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate_to_infinity(g, 0.0, 1e-9).value;
}

double integrate_breaks(const std::function<double(double)>& f, std::vector<double> breaks,
                        bool to_infinity) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    total += integrate_segment(f, breaks[i], breaks[i + 1]);
  if (to_infinity) total += integrate_tail(f, breaks.back());
  return total;
}

std::vector<double> decades(int lo, int hi) {
  std::vector<double> v;
  for (int k = lo; k <= hi; ++k) v.push_back(std::pow(10.0, k));
  return v;
}

// --- plus: int_0^inf dt / ((A+t)^alpha (B+t)^beta)
BoundRow plus_row(double A, double B, double al, double be) {
  BoundRow r;
  r.params = {A, B, al, be};
  r.lhs = integrate_breaks(
      [&](double t) { return std::pow(A + t, -al) * std::pow(B + t, -be); }, {0.0, A, B}, true);
  double factor = 1.0;
  if (al == 1.0 && B > A) factor = 1.0 + std::log(B / A);
  if (be == 1.0 && A > B) factor = 1.0 + std::log(A / B);
  r.rhs = std::min(A, B) / (std::pow(A, al) * std::pow(B, be)) * factor;
  return r;
}

// --- minus: int_0^{B-1} du / ((A+u)^alpha (B-u))
BoundRow minus_row(double A, double B, double al) {
  BoundRow r;
  r.params = {A, B, al};
  r.lhs = integrate_breaks([&](double u) { return std::pow(A + u, -al) / (B - u); },
                           {0.0, B - 1.0}, false);
  r.rhs = (1.0 + std::log(A)) / std::pow(A, al);
  return r;
}

// --- alpha: int_0^inf (A + |t+a|)^{-alpha} dt / (1+t)
BoundRow alpha_row(double A, double a, double al) {
  BoundRow r;
  r.params = {A, a, al};
  std::vector<double> br{0.0};
  if (a < 0) br.push_back(-a);
  r.lhs = integrate_breaks(
      [&](double t) { return std::pow(A + std::fabs(t + a), -al) / (1.0 + t); }, br, true);
  r.rhs = (1.0 + std::log(A)) / std::pow(A, al);
  return r;
}

// Sum over the pieces of the splitting (-inf,t1], [t1,t2], ..., [tn,inf):
// the products of 1/(1+|tau|) that bound each piece.
double omega_tree_sum(const std::vector<double>& t) {
  const std::size_t n = t.size();
  auto w = [](double x) { return 1.0 / (1.0 + std::fabs(x)); };
  double s = 0.0;
  double left = 1.0, right = 1.0;
  for (std::size_t j = 1; j < n; ++j) left *= w(t[j] - t[0]);
  for (std::size_t j = 0; j + 1 < n; ++j) right *= w(t[n - 1] - t[j]);
  s += left + right;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double p = w(t[k + 1] - t[k]);
    for (std::size_t j = 0; j < k; ++j) p *= w(t[k] - t[j]);
    for (std::size_t j = k + 2; j < n; ++j) p *= w(t[k + 1] - t[j]);
    s += p;
  }
  return s;
}

// --- omega: int_R (1+A+|t|)^{-(1-eps)} prod 1/(1+|t-t_j|) dt
BoundRow omega_row(double A, std::vector<double> t, double eps) {
  std::sort(t.begin(), t.end());
  BoundRow r;
  r.params = {A, eps};
  r.params.insert(r.params.end(), t.begin(), t.end());
  auto f = [&](double x) {
    double v = std::pow(1.0 + A + std::fabs(x), -(1.0 - eps));
    for (double tj : t) v /= 1.0 + std::fabs(x - tj);
    return v;
  };
  std::vector<double> br = t;
  br.push_back(0.0);
  std::sort(br.begin(), br.end());
  double right = integrate_breaks(f, br, true);
  // mirror for (-inf, min break]
  const double m = br.front();
  double left = integrate_tail([&](double x) { return f(-x); }, -m);
  r.lhs = right + left;
  r.rhs = (1.0 + std::log(1.0 + A)) / std::pow(1.0 + A, 1.0 - eps) * omega_tree_sum(t);
  return r;
}

std::vector<BoundRow> sweep_rows(BoundKind kind, int lo_dec, int hi_dec, int prev_hi,
                                 const BoundGrid& g) {
  // Rows whose largest parameter decade is in (prev_hi, hi_dec]; prev_hi < lo_dec
  // means the whole grid.
  std::vector<BoundRow> rows;
  auto fresh = [&](std::initializer_list<double> xs) {
    double mx = 0.0;
    for (double x : xs) mx = std::max(mx, std::fabs(x));
    return prev_hi < lo_dec || mx > std::pow(10.0, prev_hi) * 1.0000001;
  };
  const auto scale = decades(lo_dec, hi_dec);
  switch (kind) {
    case BoundKind::Plus: {
      // As stated the inequality needs alpha >= 1 when A < B and beta >= 1
      // when A > B (otherwise the integral is of size max(A,B)^(1-alpha-beta)).
      // Pairs with one exponent below 1 are swept only on the side where they
      // are used, A >= B with beta = 1.
      std::vector<std::pair<double, double>> ex{{1, 1}, {2, 1}, {1, 2}, {1.5, 1.5}};
      if (!g.exponents.empty()) {
        ex.clear();
        for (double x : g.exponents) ex.emplace_back(x, x);
      }
      for (auto [al, be] : ex)
        for (double A : scale)
          for (double B : scale)
            if (fresh({A, B})) rows.push_back(plus_row(A, B, al, be));
      for (double al : {0.5, 0.8})
        for (double A : scale)
          for (double B : scale)
            if (A >= B && fresh({A, B})) rows.push_back(plus_row(A, B, al, 1.0));
      break;
    }
    case BoundKind::Minus: {
      auto ex = g.exponents.empty() ? std::vector<double>{0.5, 0.8, 1.0} : g.exponents;
      for (double al : ex)
        for (double A : scale)
          for (double B : scale)
            if (fresh({A, B})) rows.push_back(minus_row(A, B, al));
      break;
    }
    case BoundKind::Alpha: {
      auto ex = g.exponents.empty() ? std::vector<double>{0.5, 0.8, 1.0} : g.exponents;
      for (double al : ex)
        for (double A : scale)
          for (double a : scale)
            for (double sgn : {1.0, -1.0})
              if (fresh({A, a})) rows.push_back(alpha_row(A, sgn * a, al));
      break;
    }
    case BoundKind::Omega: {
      std::vector<double> As{0.0};
      for (double x : scale) As.push_back(x);
      std::vector<double> Ts{0.0};
      for (double x : scale) Ts.push_back(x);
      for (double A : As)
        for (double T : Ts) {
          if (!fresh({A, T})) continue;
          rows.push_back(omega_row(A, {0.0, T}, g.eps));
          rows.push_back(omega_row(A, {-T, T}, g.eps));
          rows.push_back(omega_row(A, {0.0, T, 2.0 * T}, g.eps));
          rows.push_back(omega_row(A, {-T, 1.0, T}, g.eps));
        }
      break;
    }
  }
  return rows;
}

}  // namespace

BoundKind parse_bound_kind(const std::string& s) {
  if (s == "plus") return BoundKind::Plus;
  if (s == "minus") return BoundKind::Minus;
  if (s == "alpha") return BoundKind::Alpha;
  if (s == "omega") return BoundKind::Omega;
  throw std::invalid_argument("unknown bound kind '" + s + "'");
}

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Plus: return "plus";
    case BoundKind::Minus: return "minus";
    case BoundKind::Alpha: return "alpha";
    case BoundKind::Omega: return "omega";
  }
  return "?";
}

SweepReport verify_integral_bounds(BoundKind kind, const BoundGrid& grid) {
  SweepReport rep;
  rep.kind = kind;
  rep.rows = sweep_rows(kind, 0, grid.max_decade, -1, grid);
  rep.base_rows = rep.rows.size();
  std::vector<std::size_t> level_end{rep.rows.size()};
  for (int e = 1; e <= grid.extra_decades; ++e) {
    auto ext = sweep_rows(kind, 0, grid.max_decade + e, grid.max_decade + e - 1, grid);
    rep.rows.insert(rep.rows.end(), ext.begin(), ext.end());
    level_end.push_back(rep.rows.size());
  }

  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    auto& r = rep.rows[i];
    if (r.rhs > 0.0) {
      r.ratio = r.lhs / r.rhs;
    } else {
      // rhs vanishes only where lhs does (e.g. B = 1 in the minus kind)
      r.ratio = r.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(r.ratio) || !std::isfinite(r.lhs)) rep.finite = false;
    if (i < rep.base_rows)
      rep.sup_base = std::max(rep.sup_base, r.ratio);
    rep.sup_extended = std::max(rep.sup_extended, r.ratio);
  }
  rep.sup_extended = std::max(rep.sup_extended, rep.sup_base);
  double running = 0.0;
  std::size_t start = 0;
  for (auto end : level_end) {
    for (std::size_t i = start; i < end; ++i) running = std::max(running, rep.rows[i].ratio);
    rep.sup_by_level.push_back(running);
    start = end;
  }
  // Stable: the extension adds at most 5%, or the per-decade increments
  // shrink (a ratio creeping up toward a finite limit, e.g. log A / log(A/10)).
  bool flat = rep.sup_extended <= 1.05 * rep.sup_base;
  bool decelerating = true;
  for (std::size_t k = 2; k < rep.sup_by_level.size(); ++k) {
    double d1 = rep.sup_by_level[k - 1] - rep.sup_by_level[k - 2];
    double d2 = rep.sup_by_level[k] - rep.sup_by_level[k - 1];
    if (d2 > 0.9 * d1) decelerating = false;
  }
  if (rep.sup_by_level.size() < 3) decelerating = false;
  rep.stable = rep.finite && (flat || decelerating);
  return rep;
}

}  // namespace manin
