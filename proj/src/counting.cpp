#include "manin/counting.hpp"

#include "manin/toric.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace manin {

namespace {

constexpr double kBorder = 1e-9;

template <class Acc>
Acc drive(const Enumerator& en, const Acc& proto, ExecPolicy exec) {
  return exec.serial ? en.run_serial(proto) : en.run_parallel(proto, exec.threads);
}

bool integral(double x) { return std::fabs(x - std::round(x)) == 0.0 && std::fabs(x) < 9e15; }

// log H in long double, recomputed from the stack.
long double log_height_ld(const LeafView& v, const std::vector<double>& lambda) {
  const Fan& fan = v.en->fan();
  const int d = fan.dim();
  std::vector<long double> ninf(v.en->arch_offset().begin(), v.en->arch_offset().end());
  long double lf = 0.0L;
  for (int i = 0; i < v.depth; ++i) {
    const long double lp = std::log(static_cast<long double>(v.stack[i].prime));
    std::vector<long> n = v.own(i);
    for (int k = 0; k < d; ++k) ninf[k] -= n[k] * lp;
    lf += static_cast<long double>(v.en->candidate_phi(v.stack[i].cand)) * lp;
  }
  long double best = 0.0L, best_min = -1e300L;
  for (std::size_t c = 0; c < fan.max_cones().size(); ++c) {
    const auto& inv = fan.cone_inverse_flat(c);
    const auto& cone = fan.max_cones()[c];
    long double mn = 1e300L, val = 0.0L;
    for (int k = 0; k < d; ++k) {
      long double s = 0.0L;
      for (int i = 0; i < d; ++i) s += static_cast<long double>(inv[k * d + i]) * ninf[i];
      mn = std::min(mn, s);
      val += s * lambda[cone[k]];
    }
    if (mn > best_min) {
      best_min = mn;
      best = val;
    }
  }
  return lf + best;
}

struct CountAcc {
  const std::vector<double>* logb = nullptr;
  const std::vector<long double>* logb_ld = nullptr;
  const std::vector<Rational>* exact_b = nullptr;  // empty unless exact checks apply
  const std::vector<long>* lambda_int = nullptr;
  const std::vector<double>* lambda = nullptr;
  std::uint64_t mult = 1;
  std::vector<std::uint64_t> counts;

  void leaf(const LeafView& v) {
    std::optional<Rational> h;
    std::optional<long double> lh;
    for (std::size_t k = 0; k < logb->size(); ++k) {
      const double diff = v.log_height - (*logb)[k];
      bool in;
      if (diff < -kBorder) {
        in = true;
      } else if (diff > kBorder) {
        in = false;
      } else if (exact_b && !exact_b->empty()) {
        if (!h) h = global_height_exact(v.en->fan(), *lambda_int, v.profile());
        in = *h <= (*exact_b)[k];
      } else {
        if (!lh) lh = log_height_ld(v, *lambda);
        in = *lh <= (*logb_ld)[k];
      }
      if (in) counts[k] += mult;
    }
  }
  void merge(const CountAcc& o) {
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += o.counts[k];
  }
};

struct ListAcc {
  const std::vector<long>* lambda_int = nullptr;
  const std::vector<double>* lambda = nullptr;
  Rational exact_b;
  bool exact = false;
  double log_b = 0.0;
  long double log_b_ld = 0.0L;
  std::vector<ValuationProfile> out;

  void leaf(const LeafView& v) {
    const double diff = v.log_height - log_b;
    if (diff > kBorder) return;
    if (diff > -kBorder) {
      if (exact) {
        if (global_height_exact(v.en->fan(), *lambda_int, v.profile()) > exact_b) return;
      } else if (log_height_ld(v, *lambda) > log_b_ld) {
        return;
      }
    }
    out.push_back(v.profile());
  }
  void merge(const ListAcc& o) { out.insert(out.end(), o.out.begin(), o.out.end()); }
};

struct HeightAcc {
  double log_b = 0.0;
  std::vector<double> out;
  void leaf(const LeafView& v) {
    if (v.log_height <= log_b + kBorder) out.push_back(v.log_height);
  }
  void merge(const HeightAcc& o) { out.insert(out.end(), o.out.begin(), o.out.end()); }
};

struct ZetaAcc {
  const std::vector<std::complex<double>>* cand_phi = nullptr;
  const PLFunction* f = nullptr;
  double log_b = 0.0;
  std::complex<double> sum = 0.0;
  std::uint64_t points = 0;

  void leaf(const LeafView& v) {
    if (v.log_height > log_b + kBorder) return;
    std::complex<double> e = pl_evaluate(*f, std::span<const double>(v.n_inf, v.en->dim()));
    for (int i = 0; i < v.depth; ++i) e += (*cand_phi)[v.stack[i].cand] * v.stack[i].log_p;
    sum += std::exp(-e);
    ++points;
  }
  void merge(const ZetaAcc& o) {
    sum += o.sum;
    points += o.points;
  }
};

std::vector<long> integer_lambda(const std::vector<double>& lambda) {
  std::vector<long> out;
  for (double l : lambda) {
    if (!integral(l)) return {};
    out.push_back(static_cast<long>(std::llround(l)));
  }
  return out;
}

}  // namespace

std::vector<ValuationProfile> enumerate_bounded(const Fan& fan, const std::vector<double>& lambda,
                                                double B, ExecPolicy exec) {
  Enumerator en(fan, lambda, B);
  std::vector<long> li = integer_lambda(lambda);
  ListAcc proto;
  proto.lambda_int = &li;
  proto.lambda = &lambda;
  // a double is an exact rational, so integral lambda settles ties exactly
  proto.exact = !li.empty();
  if (proto.exact) proto.exact_b = Rational(B);
  proto.log_b = std::log(B);
  proto.log_b_ld = std::log(static_cast<long double>(B));
  ListAcc acc = drive(en, proto, exec);
  std::sort(acc.out.begin(), acc.out.end(), [](const ValuationProfile& a, const ValuationProfile& b) {
    return a.val < b.val;
  });
  return acc.out;
}

std::vector<std::uint64_t> count_points(const Fan& fan, const std::vector<double>& lambda,
                                        const std::vector<double>& bounds, ExecPolicy exec,
                                        const AdelicOffset* offset, std::uint64_t* nodes) {
  if (bounds.empty()) return {};
  const double bmax = *std::max_element(bounds.begin(), bounds.end());
  Enumerator en(fan, lambda, bmax, offset);
  std::vector<double> logb;
  std::vector<long double> logb_ld;
  for (double b : bounds) {
    if (!(b >= 1.0)) throw std::domain_error("count: bounds must be >= 1");
    logb.push_back(std::log(b));
    logb_ld.push_back(std::log(static_cast<long double>(b)));
  }
  std::vector<long> li = integer_lambda(lambda);
  std::vector<Rational> exact_b;
  if (!li.empty() && offset == nullptr)
    for (double b : bounds) exact_b.emplace_back(b);
  CountAcc proto;
  proto.logb = &logb;
  proto.logb_ld = &logb_ld;
  proto.exact_b = &exact_b;
  proto.lambda_int = &li;
  proto.lambda = &lambda;
  proto.mult = std::uint64_t{1} << fan.dim();
  proto.counts.assign(bounds.size(), 0);
  CountAcc acc = drive(en, proto, exec);
  if (nodes) *nodes = en.last_nodes();
  return acc.counts;
}

AsymptoticFit fit_asymptotic(const std::vector<double>& X, const std::vector<double>& N, double a,
                             int b) {
  if (b < 1) throw std::domain_error("fit_asymptotic: b must be >= 1");
  if (X.size() != N.size()) throw std::invalid_argument("fit_asymptotic: size mismatch");
  if (X.size() < static_cast<std::size_t>(b) + 1)
    throw std::domain_error("fit_asymptotic: need at least b+1 grid points");
  const Eigen::Index n = static_cast<Eigen::Index>(X.size());
  Eigen::MatrixXd A(n, b);
  Eigen::VectorXd y(n);
  // rows scaled by 1/N so the residual is relative
  for (Eigen::Index i = 0; i < n; ++i) {
    const double L = std::log(X[i]);
    const double w = std::pow(X[i], a) / N[i];
    for (int k = 0; k < b; ++k) A(i, k) = w * std::pow(L, k);
    y(i) = 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  AsymptoticFit fit;
  fit.a = a;
  fit.b = b;
  fit.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(fit.condition < 1e12)) throw std::domain_error("fit_asymptotic: ill-conditioned grid");
  Eigen::VectorXd c = svd.solve(y);
  fit.coeffs.assign(c.data(), c.data() + b);
  fit.leading = fit.coeffs.back();
  Eigen::VectorXd r = A * c - y;
  fit.rel_residual = std::sqrt(r.squaredNorm() / static_cast<double>(n));
  return fit;
}

CountReport count_N(const Fan& fan, const std::vector<double>& lambda,
                    const std::vector<double>& bounds, ExecPolicy exec, std::uint64_t pmax) {
  CountReport rep;
  rep.fan = fan.name();
  rep.lambda = lambda;
  rep.bounds = bounds;
  const auto t0 = std::chrono::steady_clock::now();
  rep.counts = count_points(fan, lambda, bounds, exec, nullptr, &rep.nodes);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool anticanonical = true;
  for (double l : lambda) anticanonical = anticanonical && l == 1.0;
  rep.rank = static_cast<int>(fan.num_rays()) - fan.dim();
  if (anticanonical) {
    LeadingConstant lc = leading_constant(fan, pmax);
    rep.theta = lc.theta.value;
    rep.rank = lc.b;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      rep.predicted.push_back(predicted_count(lc, bounds[i]));
      rep.ratio.push_back(static_cast<double>(rep.counts[i]) / rep.predicted.back());
    }
  } else {
    rep.predicted.assign(bounds.size(), std::numeric_limits<double>::quiet_NaN());
    rep.ratio = rep.predicted;
  }
  std::vector<double> X, N;
  for (std::size_t i = 0; i < bounds.size(); ++i)
    if (bounds[i] > 1.0 && rep.counts[i] > 0) {
      X.push_back(bounds[i]);
      N.push_back(static_cast<double>(rep.counts[i]));
    }
  if (X.size() >= static_cast<std::size_t>(rep.rank) + 1) {
    try {
      rep.fit = fit_asymptotic(X, N, 1.0, rep.rank);
    } catch (const std::domain_error&) {
    }
  }
  return rep;
}

ZetaPartial zeta_partial(const Fan& fan, const std::vector<std::complex<double>>& lambda, double B,
                         ExecPolicy exec) {
  if (lambda.size() != fan.num_rays()) throw std::invalid_argument("zeta_partial: lambda length");
  double s = INFINITY;
  for (const auto& l : lambda) {
    if (!(l.real() > 1.0)) throw std::domain_error("zeta_partial: needs Re lambda_j > 1");
    s = std::min(s, l.real());
  }
  std::vector<double> rho(fan.num_rays(), 1.0);
  Enumerator en(fan, rho, B);
  PLFunction f{fan, lambda};
  std::vector<std::complex<double>> cphi(en.num_candidates());
  for (std::size_t k = 0; k < cphi.size(); ++k) {
    std::vector<double> v(en.candidate(static_cast<int>(k)), en.candidate(static_cast<int>(k)) + fan.dim());
    cphi[k] = pl_evaluate(f, v);
  }
  ZetaAcc proto;
  proto.cand_phi = &cphi;
  proto.f = &f;
  proto.log_b = std::log(B);
  ZetaAcc acc = drive(en, proto, exec);
  ZetaPartial out;
  const double mult = std::ldexp(1.0, fan.dim());
  out.value = acc.sum * mult;
  out.points = acc.points * static_cast<std::uint64_t>(mult);
  // N(u) <= C u (log u)^{r-1} with C read off at B; |H(-lambda)| <= H(rho)^{-s}
  const int r = static_cast<int>(fan.num_rays()) - fan.dim();
  if (B > std::exp(1.0)) {
    const double L = std::log(B);
    const double C = static_cast<double>(out.points) / (B * std::pow(L, r - 1));
    out.tail = 2.0 * C * s / (s - 1.0) * std::pow(B, 1.0 - s) * std::pow(L, r - 1) *
               (1.0 + (r - 1) / ((s - 1.0) * L));
  } else {
    out.tail = INFINITY;
  }
  return out;
}

std::vector<double> height_multiset(const Fan& fan, const std::vector<double>& lambda, double B,
                                    ExecPolicy exec, const AdelicOffset* offset) {
  Enumerator en(fan, lambda, B, offset);
  HeightAcc proto;
  proto.log_b = std::log(B);
  HeightAcc acc = drive(en, proto, exec);
  for (double& h : acc.out) h = std::exp(h);
  std::sort(acc.out.begin(), acc.out.end());
  return acc.out;
}

}  // namespace manin
