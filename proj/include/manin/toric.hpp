#pragma once

// Picard group, effective cone and the constants entering the predicted
// asymptotic N(B) ~ Theta B (log B)^{r-1} / (r-1)!.

#include "manin/cone.hpp"
#include "manin/fan.hpp"

#include <cmath>
#include <cstdint>

namespace manin {

class PicardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PicardData {
  int rank = 0;        // r = J - d
  QMat m_rows;         // d x J, row i = (<e_j, m_i>)_j for the standard basis m_i
  QMat quotient;       // r x J integer matrix: Z^J -> Pic = Z^r
  QVec anticanonical;  // image of rho = (1, ..., 1)
  PolyhedralCone effective;  // generated by the images of the unit vectors
};

// Quotient Z^J / M by a Smith normal form; the basis is then moved onto the
// effective cone's rays when those form a lattice basis (so e.g. the
// effective cone of P1 x P1 is the orthant and -K = (2, 2)).
PicardData picard_data(const Fan& fan);

// X_{Lambda_eff}(-K) computed as the quotient characteristic function of the
// orthant in R^J modulo M, evaluated at rho.
Rational alpha_constant(const Fan& fan);

// sum over cones of (p-1)^(d - dim sigma)
Integer count_points_mod_p(const Fan& fan, std::uint64_t p);

// Coefficients a_k of the local factor (1 - x)^r * #X(F_p) / p^d as a
// polynomial in x = 1/p. a_0 = 1 and a_1 = 0 for every complete regular fan.
std::vector<long long> local_factor_poly(const Fan& fan);
long double local_factor(const std::vector<long long>& poly, std::uint64_t p);

// 2^d * #Sigma(d): exact for regular fans with rho = (1, ..., 1).
double archimedean_volume(const Fan& fan);

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};
// Importance-sampled integral of exp(-phi_rho(log|x|)) prod dx_i/|x_i| over (R^*)^d.
MonteCarloEstimate archimedean_volume_mc(const Fan& fan, std::size_t samples,
                                         std::uint64_t seed = 12345);

struct Interval {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double rel_width() const { return (hi - lo) / std::fabs(value); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// arch volume * prod_{p <= pmax} local factor, with a rigorous interval for
// the tail p > pmax. Partial products are summed as logs over fixed prime
// blocks (OpenMP), reduced in block order so the result does not depend on
// the thread count. Throws if the interval is wider than max_rel_width.
Interval tamagawa_number(const Fan& fan, std::uint64_t pmax, double max_rel_width = 1.0);

struct LeadingConstant {
  Rational alpha;
  Interval tau;
  Interval theta;
  int a = 1;
  int b = 1;  // = rank of Pic
};

LeadingConstant leading_constant(const Fan& fan, std::uint64_t pmax);

// Theta * B * (log B)^(b-1) / (b-1)!
double predicted_count(const LeadingConstant& lc, double B);

}  // namespace manin
