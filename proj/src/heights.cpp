#include "manin/heights.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace manin {

std::map<std::uint64_t, long> factor_integer(Integer n) {
  if (n == 0) throw std::invalid_argument("factor_integer: zero");
  if (n < 0) n = -n;
  std::map<std::uint64_t, long> out;
  if (n <= Integer(std::numeric_limits<std::uint64_t>::max())) {
    std::uint64_t m = n.convert_to<std::uint64_t>();
    for (std::uint64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2))
      while (m % p == 0) {
        ++out[p];
        m /= p;
      }
    if (m > 1) ++out[m];
    return out;
  }
  for (std::uint64_t p = 2; Integer(p) * p <= n; p += (p == 2 ? 1 : 2))
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  if (n > 1) {
    if (n > Integer(std::numeric_limits<std::uint64_t>::max()))
      throw std::overflow_error("factor_integer: cofactor exceeds 64 bits");
    ++out[n.convert_to<std::uint64_t>()];
  }
  return out;
}

ValuationProfile valuation_profile(const std::vector<Rational>& x) {
  ValuationProfile prof;
  prof.dim = static_cast<int>(x.size());
  prof.sign.assign(x.size(), 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) throw std::invalid_argument("valuation_profile: zero component");
    if (x[i] < 0) prof.sign[i] = -1;
    for (auto [p, e] : factor_integer(numerator(x[i]))) {
      auto& v = prof.val[p];
      v.resize(x.size(), 0);
      v[i] += e;
    }
    for (auto [p, e] : factor_integer(denominator(x[i]))) {
      auto& v = prof.val[p];
      v.resize(x.size(), 0);
      v[i] -= e;
    }
  }
  return prof;
}

std::vector<double> ValuationProfile::n_inf() const {
  std::vector<double> n(dim, 0.0);
  for (const auto& [p, v] : val) {
    const double lp = std::log(static_cast<double>(p));
    for (int i = 0; i < dim; ++i) n[i] -= v[i] * lp;
  }
  return n;
}

std::vector<Rational> ValuationProfile::reconstruct() const {
  std::vector<Rational> x(dim);
  for (int i = 0; i < dim; ++i) x[i] = sign[i];
  for (const auto& [p, v] : val)
    for (int i = 0; i < dim; ++i) {
      Rational pp = pow(Integer(p), static_cast<unsigned>(std::labs(v[i])));
      x[i] = v[i] >= 0 ? Rational(x[i] * pp) : Rational(x[i] / pp);
    }
  return x;
}

ValuationProfile ValuationProfile::operator*(const ValuationProfile& o) const {
  ValuationProfile r = *this;
  for (int i = 0; i < dim; ++i) r.sign[i] *= o.sign[i];
  for (const auto& [p, v] : o.val) {
    auto& w = r.val[p];
    w.resize(dim, 0);
    for (int i = 0; i < dim; ++i) w[i] += v[i];
    bool zero = true;
    for (long e : w) zero = zero && e == 0;
    if (zero) r.val.erase(p);
  }
  return r;
}

namespace {

std::vector<double> shifted(const std::vector<long>* n, const std::vector<long>* g, int d) {
  std::vector<double> v(d, 0.0);
  for (int i = 0; i < d; ++i) {
    if (n) v[i] += (*n)[i];
    if (g) v[i] += (*g)[i];
  }
  return v;
}

const std::vector<long>* lookup(const PrimeMap& m, std::uint64_t p) {
  auto it = m.find(p);
  return it == m.end() ? nullptr : &it->second;
}

}  // namespace

std::complex<double> local_height(const PLFunction& f, Place v, const ValuationProfile& x,
                                  const AdelicOffset* g) {
  const int d = f.fan.dim();
  if (v.is_infinite()) {
    std::vector<double> n = x.n_inf();
    if (g && !g->arch.empty())
      for (int i = 0; i < d; ++i) n[i] += g->arch[i];
    return std::exp(pl_evaluate(f, n));
  }
  auto n = shifted(lookup(x.val, v.p), g ? lookup(g->finite, v.p) : nullptr, d);
  return std::exp(pl_evaluate(f, n) * std::log(static_cast<double>(v.p)));
}

std::complex<double> global_height(const PLFunction& f, const ValuationProfile& x,
                                   const AdelicOffset* g) {
  std::set<std::uint64_t> support;
  for (const auto& [p, _] : x.val) support.insert(p);
  if (g)
    for (const auto& [p, _] : g->finite) support.insert(p);
  // accumulate the exponent, exponentiate once
  const int d = f.fan.dim();
  std::complex<double> logh = 0.0;
  {
    std::vector<double> n = x.n_inf();
    if (g && !g->arch.empty())
      for (int i = 0; i < d; ++i) n[i] += g->arch[i];
    logh += pl_evaluate(f, n);
  }
  for (auto p : support) {
    auto n = shifted(lookup(x.val, p), g ? lookup(g->finite, p) : nullptr, d);
    logh += pl_evaluate(f, n) * std::log(static_cast<double>(p));
  }
  return std::exp(logh);
}

double global_height_real(const PLFunction& f, const ValuationProfile& x, const AdelicOffset* g) {
  return global_height(f, x, g).real();
}

Rational global_height_exact(const Fan& fan, const std::vector<long>& lambda,
                             const ValuationProfile& x) {
  const int d = fan.dim();
  QVec lam;
  for (long l : lambda) lam.emplace_back(l);
  std::size_t sigma = fan.max_cones().size();
  for (std::size_t c = 0; c < fan.max_cones().size() && sigma == fan.max_cones().size(); ++c) {
    const QMat& inv = fan.cone_inverse(c);
    if (inv.empty()) continue;
    bool inside = true;
    for (int k = 0; k < d && inside; ++k) {
      // t_k(n_inf) = -sum_p w_pk log p >= 0  <=>  prod_p p^{-w_pk} >= 1
      Integer num = 1, den = 1;
      Integer common = 1;
      for (const auto& [p, v] : x.val) {
        Rational w = dot(inv[k], to_qvec(v));
        common = lcm(common, denominator(w));
      }
      for (const auto& [p, v] : x.val) {
        Rational w = dot(inv[k], to_qvec(v)) * Rational(common);
        Integer e = numerator(w);
        if (e < 0) num *= pow(Integer(p), static_cast<unsigned>(-e));
        if (e > 0) den *= pow(Integer(p), static_cast<unsigned>(e));
      }
      inside = num >= den;
    }
    if (inside) sigma = c;
  }
  if (sigma == fan.max_cones().size())
    throw std::domain_error("global_height_exact: archimedean point not located");
  const auto& cone = fan.max_cones()[sigma];
  const QMat& inv = fan.cone_inverse(sigma);
  Rational h = 1;
  for (const auto& [p, v] : x.val) {
    QVec n = to_qvec(v);
    Rational phi = pl_evaluate(fan, lam, n);
    QVec t = mat_vec(inv, n);
    Rational psi = 0;
    for (std::size_t k = 0; k < cone.size(); ++k) psi += t[k] * lam[cone[k]];
    Rational e = phi - psi;
    if (denominator(e) != 1)
      throw std::domain_error("global_height_exact: non-integral exponent (lambda not integral?)");
    long ei = numerator(e).convert_to<long>();
    Rational pp(pow(Integer(p), static_cast<unsigned>(std::labs(ei))));
    h *= ei >= 0 ? pp : Rational(1 / pp);
  }
  return h;
}

std::complex<double> character_pairing(std::span<const double> m, const ValuationProfile& x,
                                       const AdelicOffset* g) {
  const int d = x.dim;
  double phase = 0.0;
  std::set<std::uint64_t> support;
  for (const auto& [p, _] : x.val) support.insert(p);
  if (g)
    for (const auto& [p, _] : g->finite) support.insert(p);
  for (auto p : support) {
    auto n = shifted(lookup(x.val, p), g ? lookup(g->finite, p) : nullptr, d);
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += m[i] * n[i];
    phase += s * std::log(static_cast<double>(p));
  }
  std::vector<double> ninf = x.n_inf();
  for (int i = 0; i < d; ++i) {
    double gi = (g && !g->arch.empty()) ? g->arch[i] : 0.0;
    phase += m[i] * (ninf[i] + gi);
  }
  return std::polar(1.0, -phase);
}

}  // namespace manin
