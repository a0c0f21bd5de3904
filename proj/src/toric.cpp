#include "manin/toric.hpp"
#include "manin/primes.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace manin {

namespace {

using IMat = std::vector<std::vector<Integer>>;

struct Snf {
  IMat u;                    // row operations applied to the J rows
  std::vector<Integer> diag;
};

// Diagonalizes a (J x d) by unimodular row and column operations; only the
// row operations are recorded since they give the quotient map.
Snf smith_rows(IMat a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  Snf s;
  s.u.assign(rows, std::vector<Integer>(rows, Integer(0)));
  for (std::size_t i = 0; i < rows; ++i) s.u[i][i] = 1;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      std::size_t bi = rows, bj = cols;
      Integer best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          Integer v = abs(a[i][j]);
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            bi = i;
            bj = j;
          }
        }
      if (bi == rows) return s;
      std::swap(a[bi], a[t]);
      std::swap(s.u[bi], s.u[t]);
      for (auto& row : a) std::swap(row[bj], row[t]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        Integer q = a[i][t] / a[t][t];
        if (q != 0) {
          for (std::size_t k = 0; k < cols; ++k) a[i][k] -= q * a[t][k];
          for (std::size_t k = 0; k < rows; ++k) s.u[i][k] -= q * s.u[t][k];
        }
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        Integer q = a[t][j] / a[t][t];
        if (q != 0)
          for (std::size_t k = 0; k < rows; ++k) a[k][j] -= q * a[k][t];
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
    s.diag.push_back(abs(a[t][t]));
  }
  return s;
}

std::vector<long long> poly_mul(const std::vector<long long>& a, const std::vector<long long>& b) {
  std::vector<long long> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

}  // namespace

PicardData picard_data(const Fan& fan) {
  const int d = fan.dim();
  const std::size_t J = fan.num_rays();
  PicardData pd;
  pd.m_rows.assign(d, QVec(J, Rational(0)));
  IMat ray_mat(J, std::vector<Integer>(d));
  for (std::size_t j = 0; j < J; ++j)
    for (int i = 0; i < d; ++i) {
      pd.m_rows[i][j] = fan.rays()[j][i];
      ray_mat[j][i] = fan.rays()[j][i];
    }
  Snf s = smith_rows(ray_mat);
  if (s.diag.size() != static_cast<std::size_t>(d))
    throw PicardError("picard_data: rays do not span N_R");
  for (const auto& x : s.diag)
    if (x != 1) throw PicardError("picard_data: torsion in Z^J / M (invalid fan for this pipeline)");
  pd.rank = static_cast<int>(J) - d;
  for (std::size_t i = static_cast<std::size_t>(d); i < J; ++i) {
    QVec row;
    for (const auto& x : s.u[i]) row.emplace_back(x);
    pd.quotient.push_back(row);
  }

  // Move the basis onto the effective cone's rays when they form a basis.
  auto images = [&](const QMat& q) {
    QMat g;
    for (std::size_t j = 0; j < J; ++j) {
      QVec col;
      for (const auto& row : q) col.push_back(row[j]);
      g.push_back(col);
    }
    return g;
  };
  QMat gens = images(pd.quotient);
  PolyhedralCone eff;
  eff.dim = pd.rank;
  eff.generators = gens;
  QMat extreme = dual_cone(dual_cone(eff)).generators;
  if (extreme.size() == static_cast<std::size_t>(pd.rank)) {
    // order the rays by the first divisor class landing on them
    std::vector<std::pair<std::size_t, QVec>> keyed;
    for (const auto& e : extreme) {
      std::size_t first = J;
      for (std::size_t j = 0; j < J && first == J; ++j)
        if (!is_zero(gens[j]) && primitive(gens[j]) == e) first = j;
      keyed.emplace_back(first, e);
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    QMat basis(pd.rank, QVec(pd.rank));  // columns = extreme rays
    for (int c = 0; c < pd.rank; ++c)
      for (int r = 0; r < pd.rank; ++r) basis[r][c] = keyed[c].second[r];
    Rational det = determinant(basis);
    if (det == 1 || det == -1) pd.quotient = mat_mul(*inverse(basis), pd.quotient);
  }
  gens = images(pd.quotient);
  pd.effective.dim = pd.rank;
  pd.effective.generators = gens;
  pd.anticanonical.assign(pd.rank, Rational(0));
  for (const auto& g : gens) pd.anticanonical = add(pd.anticanonical, g);
  return pd;
}

Rational alpha_constant(const Fan& fan) {
  const std::size_t J = fan.num_rays();
  PicardData pd = picard_data(fan);
  PolyhedralCone orthant;
  orthant.dim = static_cast<int>(J);
  for (std::size_t j = 0; j < J; ++j) {
    QVec e(J, Rational(0));
    e[j] = 1;
    orthant.generators.push_back(e);
  }
  RationalConeForm f = quotient_char(orthant, pd.m_rows);
  QVec rho(J, Rational(1));
  for (const auto& t : f.terms)
    for (const auto& l : t.forms)
      if (dot(l, rho) <= 0)
        throw PicardError("alpha_constant: anticanonical class is not interior to the effective cone");
  return char_evaluate(f, rho);
}

Integer count_points_mod_p(const Fan& fan, std::uint64_t p) {
  const int d = fan.dim();
  Integer total = 0;
  const Integer q = Integer(p) - 1;
  for (const auto& c : fan.cones()) total += pow(q, static_cast<unsigned>(d - static_cast<int>(c.size())));
  return total;
}

std::vector<long long> local_factor_poly(const Fan& fan) {
  const int d = fan.dim();
  const int r = static_cast<int>(fan.num_rays()) - d;
  std::vector<long long> sum(d + 1, 0);
  const std::vector<long long> one_minus{1, -1};
  for (int k = 0; k <= d; ++k) {
    std::vector<long long> term{static_cast<long long>(fan.count_cones_of_dim(k))};
    for (int i = 0; i < d - k; ++i) term = poly_mul(term, one_minus);
    std::vector<long long> xk(k + 1, 0);
    xk[k] = 1;
    term = poly_mul(term, xk);
    for (std::size_t i = 0; i < term.size(); ++i) sum[i] += term[i];
  }
  for (int i = 0; i < r; ++i) sum = poly_mul(sum, one_minus);
  while (sum.size() > 1 && sum.back() == 0) sum.pop_back();
  return sum;
}

long double local_factor(const std::vector<long long>& poly, std::uint64_t p) {
  const long double x = 1.0L / static_cast<long double>(p);
  long double v = 0.0L;
  for (std::size_t i = poly.size(); i-- > 0;) v = v * x + static_cast<long double>(poly[i]);
  return v;
}

double archimedean_volume(const Fan& fan) {
  return std::ldexp(static_cast<double>(fan.count_cones_of_dim(fan.dim())), fan.dim());
}

MonteCarloEstimate archimedean_volume_mc(const Fan& fan, std::size_t samples, std::uint64_t seed) {
  const int d = fan.dim();
  PLFunction rho = PLFunction::anticanonical(fan);
  double max_l1 = 1.0;
  for (const auto& r : fan.rays()) {
    double l1 = 0.0;
    for (long x : r) l1 += std::fabs(static_cast<double>(x));
    max_l1 = std::max(max_l1, l1);
  }
  // phi_rho(u) >= |u|_1 / max_j |e_j|_1, so a Laplace proposal with half
  // that rate has bounded weights.
  const double lam = 0.5 / max_l1;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(lam);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> u(d);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double l1 = 0.0;
    for (int i = 0; i < d; ++i) {
      double m = expo(rng);
      u[i] = coin(rng) ? m : -m;
      l1 += m;
    }
    double phi = pl_evaluate_real(rho, u);
    double density = std::pow(0.5 * lam, d) * std::exp(-lam * l1);
    double w = std::ldexp(std::exp(-phi) / density, d);
    sum += w;
    sum2 += w * w;
  }
  MonteCarloEstimate est;
  const double n = static_cast<double>(samples);
  est.mean = sum / n;
  est.stderr_ = std::sqrt(std::max(0.0, sum2 / n - est.mean * est.mean) / n);
  return est;
}

Interval tamagawa_number(const Fan& fan, std::uint64_t pmax, double max_rel_width) {
  const auto poly = local_factor_poly(fan);
  const auto primes = primes_up_to(pmax);
  constexpr std::size_t kBlocks = 256;
  std::vector<long double> block_sum(kBlocks, 0.0L);
  const std::size_t np = primes.size();
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < kBlocks; ++b) {
    const std::size_t lo = np * b / kBlocks, hi = np * (b + 1) / kBlocks;
    long double s = 0.0L;
    for (std::size_t i = lo; i < hi; ++i) s += log1pl(local_factor(poly, primes[i]) - 1.0L);
    block_sum[b] = s;
  }
  long double log_prod = 0.0L;
  for (auto s : block_sum) log_prod += s;

  // tail p > P: log f(p) = u_p + O(u_p^2), u_p = a2/p^2 + sum_{i>=3} a_i/p^i
  const double P = static_cast<double>(std::max<std::uint64_t>(pmax, 2));
  const double a2 = poly.size() > 2 ? static_cast<double>(poly[2]) : 0.0;
  double R = 0.0;
  for (std::size_t i = 3; i < poly.size(); ++i) R += std::fabs(static_cast<double>(poly[i]));
  const double K = std::fabs(a2) + R / P;
  if (K >= P * P) throw std::domain_error("tamagawa_number: pmax too small for a tail bound");
  const double E = R / (2.0 * P * P) + K * K / (3.0 * P * P * P * (1.0 - K / (P * P)));
  const double tail_lo = std::min(0.0, a2 / P) - E;
  const double tail_hi = std::max(0.0, a2 / P) + E;
  const double rounding = 1e-14 * (1.0 + std::fabs(static_cast<double>(log_prod)));

  const double arch = archimedean_volume(fan);
  Interval out;
  out.value = arch * std::exp(static_cast<double>(log_prod));
  out.lo = arch * std::exp(static_cast<double>(log_prod) + tail_lo - rounding);
  out.hi = arch * std::exp(static_cast<double>(log_prod) + tail_hi + rounding);
  if (out.rel_width() > max_rel_width)
    throw std::domain_error("tamagawa_number: pmax too small for the requested tolerance");
  return out;
}

LeadingConstant leading_constant(const Fan& fan, std::uint64_t pmax) {
  LeadingConstant lc;
  lc.alpha = alpha_constant(fan);
  lc.tau = tamagawa_number(fan, pmax);
  const double a = to_double(lc.alpha);
  lc.theta = {a * lc.tau.value, a * lc.tau.lo, a * lc.tau.hi};
  lc.b = static_cast<int>(fan.num_rays()) - fan.dim();
  return lc;
}

double predicted_count(const LeadingConstant& lc, double B) {
  double fact = std::tgamma(static_cast<double>(lc.b));
  return lc.theta.value * B * std::pow(std::log(B), lc.b - 1) / fact;
}

}  // namespace manin
