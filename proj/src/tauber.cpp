#include "manin/tauber.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace manin {

void PoleData::validate() const {
  if (!(a > 0.0)) throw std::invalid_argument("pole: a must be > 0");
  if (b < 1) throw std::invalid_argument("pole: b must be >= 1");
  if (!(theta > 0.0)) throw std::invalid_argument("pole: theta must be > 0");
  if (!(delta0 > 0.0 && delta0 < a)) throw std::invalid_argument("pole: need 0 < delta0 < a");
  if (!(kappa >= 0.0)) throw std::invalid_argument("pole: kappa must be >= 0");
}

std::uint64_t divisor_summatory(std::uint64_t x) {
  if (x == 0) return 0;
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  std::uint64_t s = 0;
  for (std::uint64_t i = 1; i <= r; ++i) s += x / i;
  return 2 * s - r * r;
}

DirichletOracle DirichletOracle::zeta() {
  DirichletOracle f;
  f.name = "zeta";
  f.pole = PoleData{1.0, 1, 1.0, 0.5, 0.25};
  f.eval = [](cplx s) { return manin::zeta(s); };
  f.coeffs = [](std::uint64_t n) { return std::vector<double>(n + 1, 1.0); };
  f.count = [](double X) { return X < 1.0 ? 0.0 : std::floor(X); };
  return f;
}

DirichletOracle DirichletOracle::zeta_squared() {
  DirichletOracle f;
  f.name = "zeta2";
  f.pole = PoleData{1.0, 2, 1.0, 0.5, 0.5};
  f.eval = [](cplx s) {
    cplx z = manin::zeta(s);
    return z * z;
  };
  f.coeffs = [](std::uint64_t n) {
    std::vector<double> d(n + 1, 0.0);
    for (std::uint64_t i = 1; i <= n; ++i)
      for (std::uint64_t j = i; j <= n; j += i) d[j] += 1.0;
    return d;
  };
  f.count = [](double X) {
    return X < 1.0 ? 0.0 : static_cast<double>(divisor_summatory(static_cast<std::uint64_t>(X)));
  };
  return f;
}

DirichletOracle DirichletOracle::constant_one() {
  DirichletOracle f;
  f.name = "one";
  f.eval = [](cplx) { return cplx(1.0); };
  f.coeffs = [](std::uint64_t n) {
    std::vector<double> c(n + 1, 0.0);
    if (n >= 1) c[1] = 1.0;
    return c;
  };
  f.count = [](double X) { return X < 1.0 ? 0.0 : 1.0; };
  return f;
}

DirichletOracle DirichletOracle::by_name(const std::string& name) {
  if (name == "zeta") return zeta();
  if (name == "zeta2") return zeta_squared();
  if (name == "one") return constant_one();
  throw std::invalid_argument("unknown oracle: " + name);
}

double phi_direct(const DirichletOracle& f, double X, int k) {
  if (X < 1.0) return 0.0;
  const auto n = static_cast<std::uint64_t>(std::floor(X));
  const std::vector<double> c = f.coeffs(n);
  const double L = std::log(X);
  double s = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i)
    if (c[i] != 0.0) s += c[i] * std::pow(L - std::log(static_cast<double>(i)), k);
  return s;
}

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

double default_aprime(const DirichletOracle& f, double X) {
  return (f.pole ? f.pole->a : 1.0) + 1.0 / std::log(X);
}

struct LineSums {
  std::vector<cplx> v30, v20;
};

// int_0^T f(sigma+it) X^{sigma+it} / (sigma+it)^{k+1} dt for several X, with
// 30- and 20-point Gauss on each panel.
LineSums line_sums(const DirichletOracle& f, const std::vector<double>& X, int k, double sigma,
                   double T, double width) {
  using G30 = boost::math::quadrature::gauss<double, 30>;
  using G20 = boost::math::quadrature::gauss<double, 20>;
  LineSums out;
  out.v30.assign(X.size(), 0.0);
  out.v20.assign(X.size(), 0.0);
  std::vector<double> logx;
  for (double x : X) logx.push_back(std::log(x));
  auto accumulate = [&](double t, double w, std::vector<cplx>& acc) {
    const cplx s(sigma, t);
    const cplx g = f.eval(s) * std::pow(s, -(k + 1));
    for (std::size_t i = 0; i < X.size(); ++i) acc[i] += w * g * std::exp(s * logx[i]);
  };
  const int panels = std::max(1, static_cast<int>(std::ceil(T / width)));
  const double h = T / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = (p + 0.5) * h, r = 0.5 * h;
    for (std::size_t i = 0; i < G30::abscissa().size(); ++i) {
      accumulate(c + r * G30::abscissa()[i], r * G30::weights()[i], out.v30);
      accumulate(c - r * G30::abscissa()[i], r * G30::weights()[i], out.v30);
    }
    for (std::size_t i = 0; i < G20::abscissa().size(); ++i) {
      accumulate(c + r * G20::abscissa()[i], r * G20::weights()[i], out.v20);
      accumulate(c - r * G20::abscissa()[i], r * G20::weights()[i], out.v20);
    }
  }
  return out;
}

}  // namespace

std::vector<PerronResult> perron_phi_k(const DirichletOracle& f, const std::vector<double>& X,
                                       int k, PerronOptions opt) {
  if (X.empty()) return {};
  if (k < 1) throw std::domain_error("perron: k must be >= 1");
  if (f.pole && !(k > f.pole->kappa))
    throw std::domain_error("perron: k must exceed kappa for absolute convergence");
  const double xmax = *std::max_element(X.begin(), X.end());
  double xmid = 1.0;
  for (double x : X) {
    if (!(x > 1.0)) throw std::domain_error("perron: X must be > 1");
    xmid *= std::pow(x, 1.0 / X.size());
  }
  const double ap = opt.aprime > 0.0 ? opt.aprime : default_aprime(f, xmid);
  if (f.pole && !(ap > f.pole->a)) throw std::domain_error("perron: contour must lie right of the pole");
  LineSums ls = line_sums(f, X, k, ap, opt.T, opt.panel);
  const double kf = factorial(k);

  // tail: per coefficient, |int_T^inf e^{i w t} (a'+it)^{-k-1} dt| <= min(1/(k T^k), 2/(|w| T^{k+1}))
  const double f_ap = f.eval(cplx(ap)).real();
  const auto M = static_cast<std::uint64_t>(std::ceil(20.0 * xmax));
  const std::vector<double> c = f.coeffs(M);
  const double Tk = std::pow(opt.T, k), Tk1 = Tk * opt.T;
  double partial_dirichlet = 0.0;
  for (std::uint64_t n = 1; n <= M; ++n) partial_dirichlet += c[n] * std::pow(static_cast<double>(n), -ap);
  const double rest = std::max(0.0, f_ap - partial_dirichlet);

  std::vector<PerronResult> out;
  for (std::size_t i = 0; i < X.size(); ++i) {
    PerronResult r;
    r.X = X[i];
    r.aprime = ap;
    r.value = kf / kPi * ls.v30[i].real();
    r.quad_error = kf / kPi * std::abs(ls.v30[i] - ls.v20[i]) + 1e-14 * std::fabs(r.value);
    const double lx = std::log(X[i]);
    double coeff_bound = 0.0;
    for (std::uint64_t n = 1; n <= M; ++n) {
      if (c[n] == 0.0) continue;
      const double w = std::fabs(lx - std::log(static_cast<double>(n)));
      const double m = w > 0.0 ? std::min(1.0 / (k * Tk), 2.0 / (w * Tk1)) : 1.0 / (k * Tk);
      coeff_bound += c[n] * std::exp(ap * (lx - std::log(static_cast<double>(n)))) * m;
    }
    coeff_bound += 2.0 / (std::log(static_cast<double>(M) / X[i]) * Tk1) * std::exp(ap * lx) * rest;
    const double generic = f_ap * std::exp(ap * lx) / (k * Tk);
    r.tail_bound = kf / kPi * std::min(coeff_bound, generic);
    out.push_back(r);
  }
  return out;
}

PerronResult perron_phi_k(const DirichletOracle& f, double X, int k, PerronOptions opt) {
  return perron_phi_k(f, std::vector<double>{X}, k, opt).front();
}

LineIntegral line_integral(const DirichletOracle& f, double X, int k, double sigma, double T,
                           double kappa) {
  LineSums ls = line_sums(f, {X}, k, sigma, T, 1.0);
  const double kf = factorial(k);
  LineIntegral li;
  li.value = kf / kPi * ls.v30[0].real();
  li.quad_error = kf / kPi * std::abs(ls.v30[0] - ls.v20[0]);
  double C = 0.0;
  for (double t : {0.8 * T, 0.9 * T, T}) C = std::max(C, std::abs(f.eval(cplx(sigma, t))) / std::pow(t, kappa));
  li.tail_estimate = k > kappa ? kf / kPi * C * std::pow(X, sigma) * std::pow(T, kappa - k) / (k - kappa)
                               : INFINITY;
  return li;
}

double pole_residue(const DirichletOracle& f, double X, int k, double radius) {
  if (!f.pole) return 0.0;
  const int n = 256;
  const double kf = factorial(k);
  cplx sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx e = std::polar(radius, 2.0 * kPi * j / n);
    const cplx s = f.pole->a + e;
    sum += kf * f.eval(s) * std::exp(s * std::log(X)) * std::pow(s, -(k + 1)) * e;
  }
  return (sum / static_cast<double>(n)).real();
}

ResidueCheck residue_consistency(const DirichletOracle& f, double X, int k, double T, double tol) {
  if (!f.pole) throw std::invalid_argument("residue check needs a pole");
  ResidueCheck rc;
  PerronOptions opt;
  opt.T = T;
  PerronResult right = perron_phi_k(f, X, k, opt);
  LineIntegral left = line_integral(f, X, k, f.pole->a - f.pole->delta0, T, f.pole->kappa);
  rc.right = right.value;
  rc.left = left.value;
  rc.residue = pole_residue(f, X, k);
  rc.rel_mismatch = std::fabs(rc.right - rc.left - rc.residue) / std::fabs(rc.right);
  rc.allowance = (right.tail_bound + right.quad_error + left.tail_estimate + left.quad_error) /
                 std::fabs(rc.right);
  rc.passed = rc.rel_mismatch < tol;
  return rc;
}

ContourCheck contour_independence(const DirichletOracle& f, double X, int k, double T, double tol) {
  PerronOptions o1;
  o1.T = T;
  PerronResult r1 = perron_phi_k(f, X, k, o1);
  PerronOptions o2 = o1;
  o2.aprime = r1.aprime + 1.0;
  PerronResult r2 = perron_phi_k(f, X, k, o2);
  ContourCheck cc;
  cc.v1 = r1.value;
  cc.v2 = r2.value;
  cc.diff = std::fabs(r1.value - r2.value);
  cc.allowance = r1.tail_bound + r1.quad_error + r2.tail_bound + r2.quad_error;
  cc.passed = cc.diff <= cc.allowance && cc.diff < tol * std::fabs(cc.v1);
  return cc;
}

Bracket descend_step(const Bracket& left, const Bracket& mid, const Bracket& right, int k,
                     double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("descend: eta must lie in (0, 1)");
  Bracket b;
  b.lo = (mid.lo - left.hi) / (-k * std::log1p(-eta));
  b.hi = (right.hi - mid.lo) / (k * std::log1p(eta));
  if (b.lo > b.hi) throw std::runtime_error("descend: bracket inverted (sampler noise above bracket width)");
  return b;
}

Bracket descend_k(const std::function<Bracket(double)>& phi_k, int k, double X, double eta) {
  return descend_step(phi_k(X * (1.0 - eta)), phi_k(X), phi_k(X * (1.0 + eta)), k, eta);
}

DescendResult descend_to_count(const DirichletOracle& f, int k, double X,
                               const std::vector<double>& eps, PerronOptions opt) {
  if (eps.size() != static_cast<std::size_t>(k))
    throw std::invalid_argument("descend: need one exponent per level");
  DescendResult res;
  res.from_k = k;
  res.X = X;
  for (double e : eps) res.eta.push_back(std::pow(X, -e));

  // points where phi_k is needed
  std::vector<double> pts;
  std::function<void(int, double)> collect = [&](int level, double Y) {
    if (level == k) {
      pts.push_back(Y);
      return;
    }
    const double eta = res.eta[level];
    collect(level + 1, Y * (1.0 - eta));
    collect(level + 1, Y);
    collect(level + 1, Y * (1.0 + eta));
  };
  collect(0, X);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::map<double, Bracket> top;
  for (const PerronResult& r : perron_phi_k(f, pts, k, opt)) top[r.X] = {r.lo(), r.hi()};
  res.perron_points = pts.size();

  std::function<Bracket(int, double)> bracket = [&](int level, double Y) -> Bracket {
    if (level == k) return top.at(Y);
    const double eta = res.eta[level];
    return descend_step(bracket(level + 1, Y * (1.0 - eta)), bracket(level + 1, Y),
                        bracket(level + 1, Y * (1.0 + eta)), level + 1, eta);
  };
  res.bracket = bracket(0, X);
  return res;
}

std::vector<double> balanced_eps(const DirichletOracle& f, int k, double X, double phi_k,
                                 double width) {
  if (k < 1 || !(X > 1.0)) throw std::invalid_argument("balanced_eps: need k >= 1 and X > 1");
  const double n_scale = f.pole ? predict(*f.pole, X) : phi_k / factorial(k);
  const double L = std::log(X);
  std::vector<double> eps(k);
  double w = std::max(width, 1e-300);
  for (int j = k - 1; j >= 0; --j) {
    const double c = factorial(j) * n_scale;
    double eta = std::sqrt(2.0 * w / ((j + 1) * c));
    eta = std::clamp(eta, 1.0 / X, 0.5);
    w = 2.0 * w / ((j + 1) * eta) + eta * c;
    eps[j] = -std::log(eta) / L;
  }
  return eps;
}

double predict(const PoleData& pole, double X) {
  return pole.theta / (pole.a * factorial(pole.b - 1)) * std::pow(X, pole.a) *
         std::pow(std::log(X), pole.b - 1);
}

CompareReport compare(const DirichletOracle& f, const PoleData& pole, const std::vector<double>& X) {
  if (X.size() < static_cast<std::size_t>(pole.b) + 1)
    throw std::domain_error("compare: grid too small");
  CompareReport rep;
  const double C = pole.theta / (pole.a * factorial(pole.b - 1));
  for (double x : X) {
    rep.X.push_back(x);
    rep.N.push_back(f.count(x));
    rep.predicted.push_back(predict(pole, x));
    rep.residual.push_back(rep.N.back() - rep.predicted.back());
  }
  const int nl = pole.b - 1;
  const Eigen::Index n = static_cast<Eigen::Index>(X.size());
  if (nl > 0) {
    // y = N / (C X^a) - L^{b-1} = sum p_k L^k, weighted by sqrt X
    Eigen::MatrixXd A(n, nl);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double L = std::log(X[i]), w = std::sqrt(X[i]);
      for (int k = 0; k < nl; ++k) A(i, k) = w * std::pow(L, k);
      y(i) = w * (rep.N[i] / (C * std::pow(X[i], pole.a)) - std::pow(L, nl));
    }
    Eigen::VectorXd p = A.colPivHouseholderQr().solve(y);
    rep.lower_order.assign(p.data(), p.data() + nl);
  }
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double L = std::log(X[i]);
    double full = std::pow(L, nl);
    for (int k = 0; k < nl; ++k) full += rep.lower_order[k] * std::pow(L, k);
    const double err = std::fabs(rep.N[i] - C * std::pow(X[i], pole.a) * full);
    A(i, 0) = 1.0;
    A(i, 1) = L;
    y(i) = std::log(std::max(err, 1e-300));
  }
  Eigen::VectorXd s = A.colPivHouseholderQr().solve(y);
  rep.error_exponent = s(1);
  return rep;
}

}  // namespace manin
