#pragma once

// Toric fibrations over P1 with fiber P1: the total space is the G_m-torsor
// twisted by O(n), i.e. the Hirzebruch surface F_n. Over a base point
// b = (b0 : b1) the torsor class is an adelic offset g_b of the fiber torus,
// and the height of a point (b, x) splits as H_base(b) * H_fiber(x g_b).
//
// With n_inf = -log|x| the twisted fiber coordinate is n2 + n min(n1, 0),
// which gives g_p = -n ord_p(b0) and g_inf = n (log|b0| - log max(|b0|, |b1|)).

#include "manin/cone.hpp"
#include "manin/counting.hpp"
#include "manin/heights.hpp"
#include "manin/toric.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace manin {

enum class Section { x0, x1 };

struct TorsorSpec {
  int n = 0;
  Section section = Section::x0;  // trivializing coordinate; switches when it vanishes
};

struct BasePoint {
  long long b0 = 1;
  long long b1 = 0;
  long long height() const;  // max(|b0|, |b1|) for coprime coordinates
};

// Coprime, b0 >= 0, and b1 = 1 when b0 = 0. Throws on (0 : 0).
BasePoint normalize(long long b0, long long b1);

AdelicOffset torsor_class(const TorsorSpec& spec, const BasePoint& b);

// Rays e1, e2, (-1, n), -e2 of F_n, split into base rays (0, 2) and fiber
// rays (1, 3). The fiber fan is P1 with rays +1, -1.
Fan fibration_fiber_fan();
// lambda on F_n: (a/2, fiber[0], a/2, fiber[1]) for the base class a O(1).
std::vector<double> total_lambda(const std::vector<double>& fiber_lambda, double a);

struct FibrationPicard {
  int n = 0;
  QMat m_rows;       // M inside V = PL(fiber) x Pic(P1)_R = R^3
  QMat quotient;     // 2 x 3, Z^3 -> Pic(Y) = Z^2
  QVec anticanonical;  // image of (1, 1, 2)
  QMat ray_classes;  // classes of the F_n rays e1, e2, (-1, n), -e2 (rows)
};
FibrationPicard fibration_picard(const TorsorSpec& spec);

// Integer matrix A with A * (toric class of ray j) = (fibration class of ray
// j) for every ray of the given fan, if one exists and is unimodular.
struct PicardMatch {
  bool ok = false;
  QMat a;
};
PicardMatch match_picard(const FibrationPicard& fp, const Fan& fan);

// alpha(Y) from the orthant in V modulo M, evaluated at (1, 1, 2).
Rational fibration_alpha(const TorsorSpec& spec);

struct FibrationConstant {
  int n = 0;
  Rational alpha;
  Interval tau;    // tau(P1)^2
  Interval theta;
  int rank = 2;
};
FibrationConstant fibration_predicted_constant(const TorsorSpec& spec, std::uint64_t pmax);

struct FibrationZeta {
  double value = 0.0;         // sum of H^{-1} over the points with H <= B
  double tail = 0.0;          // power-law estimate of the rest; inf when divergent
  std::uint64_t points = 0;   // counted with signs
  std::vector<double> heights;  // sorted, one per (b1 > 0, fiber profile): 4 points each
};

// Points of the open torus of F_n with H(lambda, a; y) <= B, grouped by base
// point. Base points run over b0, b1 != 0; each fiber is enumerated with its
// offset g_b up to B / H_base(b).
FibrationZeta fibration_zeta_partial(const TorsorSpec& spec, const std::vector<double>& fiber_lambda,
                                     double a, double B, ExecPolicy exec = {});

// The same multiset from the F_n fan directly.
FibrationZeta toric_zeta_partial(const Fan& fan, const std::vector<double>& lambda, double B,
                                 ExecPolicy exec = {});

// Height of (b, x) computed both ways, for pointwise comparison.
double fibration_point_height(const TorsorSpec& spec, const std::vector<double>& fiber_lambda,
                              double a, const BasePoint& b, const Rational& x);
double toric_point_height(const Fan& fan, const std::vector<double>& lambda, const BasePoint& b,
                          const Rational& x);

struct ArakelovL {
  std::complex<double> value;
  double tail_bound = 0.0;  // 4 H^{2-a} / (a - 2)
  std::uint64_t terms = 0;
};
// sum over b in P1(Q) with H_O(1)(b) <= H of conj(chi_m(g_b)) H_O(1)(b)^{-a}; a > 2.
ArakelovL arakelov_L_partial(const TorsorSpec& spec, double a, double m, long long H);

}  // namespace manin
