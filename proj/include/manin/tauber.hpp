#pragma once

// Perron integrals phi_k(X) = sum_{n <= X} c_n (log X/n)^k of Dirichlet
// series f(s) = sum c_n n^{-s}, and the descending recurrence that brackets
// phi_{k-1} from samples of phi_k, down to phi_0 = N(X).

#include "manin/special.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace manin {

struct PoleData {
  double a = 1.0;       // abscissa
  int b = 1;            // order
  double theta = 1.0;   // leading constant
  double delta0 = 0.5;  // strip width
  double kappa = 0.0;   // growth exponent in the strip
  void validate() const;  // throws std::invalid_argument
};

struct DirichletOracle {
  std::string name;
  std::optional<PoleData> pole;  // f = 1 has none
  std::function<cplx(cplx)> eval;
  // c_1..c_n (index 0 unused), nonnegative
  std::function<std::vector<double>(std::uint64_t)> coeffs;
  // sum_{n <= X} c_n
  std::function<double(double)> count;

  static DirichletOracle zeta();
  static DirichletOracle zeta_squared();
  static DirichletOracle constant_one();
  static DirichletOracle by_name(const std::string& name);  // zeta, zeta2, one
};

// Dirichlet divisor sum D(X) = sum_{n <= X} d(n) by the hyperbola method.
std::uint64_t divisor_summatory(std::uint64_t x);

// sum_{n <= X} c_n (log X/n)^k, summed directly.
double phi_direct(const DirichletOracle& f, double X, int k);

struct PerronOptions {
  double T = 2000.0;       // cutoff of the vertical integral
  double aprime = 0.0;     // 0 = a + 1/log X (1 + 1/log X without a pole)
  double panel = 0.5;      // quadrature panel width in t
};

struct PerronResult {
  double X = 0.0;
  double value = 0.0;
  double quad_error = 0.0;
  double tail_bound = 0.0;  // rigorous bound on the part |t| > T
  double aprime = 0.0;
  double lo() const { return value - quad_error - tail_bound; }
  double hi() const { return value + quad_error + tail_bound; }
};

// (k!/pi) Re int_0^T f(a'+it) X^{a'+it} / (a'+it)^{k+1} dt. Several X share
// the f evaluations. Throws std::domain_error if k <= kappa.
std::vector<PerronResult> perron_phi_k(const DirichletOracle& f, const std::vector<double>& X,
                                       int k, PerronOptions opt = {});
PerronResult perron_phi_k(const DirichletOracle& f, double X, int k, PerronOptions opt = {});

// Same integral on an arbitrary vertical line, no tail bound (the line may
// lie left of the pole). Returns value and an estimated tail from the
// declared kappa.
struct LineIntegral {
  double value = 0.0;
  double quad_error = 0.0;
  double tail_estimate = 0.0;
};
LineIntegral line_integral(const DirichletOracle& f, double X, int k, double sigma, double T,
                           double kappa);

// Residue of k! f(s) X^s / s^{k+1} at the pole, by the trapezoid rule on a
// circle around it.
double pole_residue(const DirichletOracle& f, double X, int k, double radius = 0.25);

struct ResidueCheck {
  double right = 0.0, left = 0.0, residue = 0.0;
  double rel_mismatch = 0.0;
  double allowance = 0.0;  // tail and quadrature estimates, relative
  bool passed = false;
};
// (right line) - (left line at a - delta) = residue.
ResidueCheck residue_consistency(const DirichletOracle& f, double X, int k, double T, double tol);

struct ContourCheck {
  double v1 = 0.0, v2 = 0.0, diff = 0.0, allowance = 0.0;
  bool passed = false;
};
// phi_k on Re s = a' and a' + 1.
ContourCheck contour_independence(const DirichletOracle& f, double X, int k, double T, double tol);

struct Bracket {
  double lo = 0.0, hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// One descending step: from brackets of phi_k at X(1-eta), X, X(1+eta) to a
// bracket of phi_{k-1}(X):
//   (phi_k(X) - phi_k(X(1-eta))) / (-k log(1-eta)) <= phi_{k-1}(X)
//                                    <= (phi_k(X(1+eta)) - phi_k(X)) / (k log(1+eta)).
// Throws std::runtime_error if the bracket comes out inverted.
Bracket descend_step(const Bracket& left, const Bracket& mid, const Bracket& right, int k,
                     double eta);

// The same with an arbitrary phi_k sampler.
Bracket descend_k(const std::function<Bracket(double)>& phi_k, int k, double X, double eta);

struct DescendResult {
  int from_k = 0;
  double X = 0.0;
  std::vector<double> eta;  // eta[j] used when passing from phi_{j+1} to phi_j
  Bracket bracket;          // phi_0(X) = N(X)
  std::size_t perron_points = 0;
};

// Starts from Perron intervals of phi_k and descends to phi_0 with
// eta_j = X^{-eps_j}. eps must have k entries (eps[j] for level j+1 -> j).
DescendResult descend_to_count(const DirichletOracle& f, int k, double X,
                               const std::vector<double>& eps, PerronOptions opt = {});

// eps that balance, level by level, the carried width 2W/(j+1)eta against
// the discretization width eta j! N, with N estimated from the pole (or
// phi_k / k! without one). width = width of the Perron interval of phi_k.
std::vector<double> balanced_eps(const DirichletOracle& f, int k, double X, double phi_k,
                                 double width);

// Theta / (a (b-1)!) X^a (log X)^{b-1}
double predict(const PoleData& pole, double X);

struct CompareReport {
  std::vector<double> X, N, predicted, residual;
  std::vector<double> lower_order;  // p_k, k < b-1: N ~ C X^a (L^{b-1} + sum p_k L^k)
  double error_exponent = 0.0;      // slope of log|N - fit| against log X
};
CompareReport compare(const DirichletOracle& f, const PoleData& pole, const std::vector<double>& X);

}  // namespace manin
