#pragma once

// Polyhedral cones over Q and their characteristic functions
//   X_c(z) = \int_{c^*} exp(-<z, v>) dv
// kept as exact sums of c_a / prod_j l_{a,j}(z).

#include "manin/rational.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace manin {

class ConeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PoleError : public std::domain_error {
 public:
  PoleError(const std::string& what, std::size_t term, std::size_t form)
      : std::domain_error(what), term_index(term), form_index(form) {}
  std::size_t term_index;
  std::size_t form_index;
};

struct PolyhedralCone {
  int dim = 0;
  QMat generators;  // rows
  // Rows of a basis whose parallelepiped gets measure 1. Empty = standard basis.
  QMat measure;

  Rational measure_det() const;  // |det| of the measure basis
  nlohmann::json to_json() const;
  static PolyhedralCone from_json(const nlohmann::json& j);
  static PolyhedralCone from_ints(const std::vector<std::vector<long>>& gens);
};

struct FormTerm {
  Rational coeff;
  QMat forms;  // each row is a linear form on the ambient space
};

// Sum of coeff / prod(forms). Cone characteristic functions have positive
// coefficients; intermediate residue expansions may carry either sign.
struct RationalConeForm {
  int dim = 0;
  std::vector<FormTerm> terms;

  nlohmann::json to_json() const;
  static RationalConeForm from_json(const nlohmann::json& j);
};

// Extreme rays of {y : A y >= 0} for A of full column rank.
QMat extreme_rays(const QMat& a);

// Generators of {phi : phi(v) >= 0 for v in c}, primitive and lex-sorted.
// A lineality space (when c is not full-dimensional) appears as +-basis pairs.
PolyhedralCone dual_cone(const PolyhedralCone& c);

bool contains_line(const PolyhedralCone& c);

// Placing triangulation in generator order. Every piece is a subset of
// the generators; pieces are returned as cones sharing c's measure.
std::vector<PolyhedralCone> triangulate(const PolyhedralCone& c);
// Same, but placing generators in the given index order.
std::vector<std::vector<std::size_t>> triangulate_indices(const QMat& gens,
                                                          const std::vector<std::size_t>& order);

RationalConeForm char_function(const PolyhedralCone& c);
// Variant that triangulates the dual with its generators placed in reverse order.
RationalConeForm char_function_reversed(const PolyhedralCone& c);

std::complex<double> char_evaluate(const RationalConeForm& f,
                                   std::span<const std::complex<double>> z);
double char_evaluate(const RationalConeForm& f, std::span<const double> z);
Rational char_evaluate(const RationalConeForm& f, const QVec& z);

struct QuotientForm {
  QMat projection;        // rows u_i; pi(z) = (u_i . z)_i
  RationalConeForm form;  // in the coordinates of pi
};

// X of the image of c in V/M (rows of m = basis of M, also its measure basis).
QuotientForm quotient_char_reduced(const PolyhedralCone& c, const QMat& m);
// Same function pulled back to V, i.e. z -> X_{pi(c)}(pi(z)).
RationalConeForm quotient_char(const PolyhedralCone& c, const QMat& m);

// One residue step for z -> (1/2pi) \int_R f(z + i t m0) dt. Forms are first
// oriented to be positive at z_ref (a point in the tube where f is given);
// poles of forms with l(m0) > 0 are the ones picked up.
RationalConeForm residue_step(const RationalConeForm& f, const QVec& m0, const QVec& z_ref);
// residue_step along each row of m in turn.
RationalConeForm residue_pushforward(const RationalConeForm& f, const QMat& m, const QVec& z_ref);

// Control-class bound predicate: does
//   h(v + m) <= c (1+|v|)^beta / (1+|m|)^(1-eps) / prod (1 + |l_j(v+m)|)
// hold on the supplied sample pairs (v, m)?
struct ControlCandidate {
  double c = 1.0;
  std::vector<std::vector<double>> forms;
  double beta = 0.0;
  double eps = 0.0;
};
struct ControlCheck {
  bool holds = true;
  double worst_ratio = 0.0;  // max of h / bound over the samples
};
ControlCheck check_control_bound(
    const std::function<double(std::span<const double>)>& h, const ControlCandidate& cand,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& samples);

// Integral inequalities used to build the control classes, checked by quadrature.
enum class BoundKind { Plus, Minus, Alpha, Omega };

struct BoundRow {
  std::vector<double> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct SweepReport {
  BoundKind kind = BoundKind::Plus;
  std::vector<BoundRow> rows;  // base grid followed by the extension rows
  std::size_t base_rows = 0;
  double sup_base = 0.0;
  double sup_extended = 0.0;
  std::vector<double> sup_by_level;  // running sup after each added decade
  bool finite = true;
  bool stable = true;
  bool passed() const { return finite && stable; }
};

struct BoundGrid {
  int max_decade = 6;     // parameters up to 10^max_decade
  int extra_decades = 2;  // extension used for the stability check
  std::vector<double> exponents;  // alpha values (kind-dependent defaults if empty)
  double eps = 0.1;               // omega kind
};

BoundKind parse_bound_kind(const std::string& s);
std::string to_string(BoundKind k);
SweepReport verify_integral_bounds(BoundKind kind, const BoundGrid& grid = {});

}  // namespace manin
