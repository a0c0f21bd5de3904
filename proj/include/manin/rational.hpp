#pragma once

// Exact rational scalars and the small dense linear algebra the cone and
// lattice code needs. Dimensions here are tiny (<= 6), so everything is
// plain Gaussian elimination over Q.

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace manin {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;  // row-major

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

QVec to_qvec(const std::vector<long>& v);
std::vector<double> to_doubles(const QVec& v);

Rational dot(const QVec& a, const QVec& b);
QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const QVec& a, const Rational& s);
bool is_zero(const QVec& v);

QMat transpose(const QMat& m);
QVec mat_vec(const QMat& m, const QVec& v);
QMat mat_mul(const QMat& a, const QMat& b);
QMat identity(std::size_t n);

std::size_t rank(QMat m);
Rational determinant(QMat m);
std::optional<QMat> inverse(const QMat& m);
std::optional<QVec> solve(const QMat& a, const QVec& b);

// Basis (as rows) of {x : m x = 0}; m has `cols` columns even when empty.
QMat nullspace(const QMat& m, std::size_t cols);

// Rows of `m` reduced to a basis of their span, keeping the first
// independent rows in order.
QMat row_basis(const QMat& m);

// Scales a nonzero vector to the primitive integer vector on the same ray.
QVec primitive(const QVec& v);

// Lexicographic comparison, used for deterministic generator orders.
bool lex_less(const QVec& a, const QVec& b);

}  // namespace manin
