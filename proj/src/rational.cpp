#include "manin/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace manin {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (s.find_first_of(".eE") != std::string::npos) {
        // decimal literal: convert exactly from its decimal expansion
        std::size_t epos = s.find_first_of("eE");
        std::string mant = s.substr(0, epos);
        long exp10 = epos == std::string::npos ? 0 : std::stol(s.substr(epos + 1));
        std::size_t dot = mant.find('.');
        std::string digits = mant;
        if (dot != std::string::npos) {
          exp10 -= static_cast<long>(mant.size() - dot - 1);
          digits.erase(dot, 1);
        }
        Rational q{Integer(digits)};
        Integer ten = 10;
        Integer p = boost::multiprecision::pow(ten, static_cast<unsigned>(std::labs(exp10)));
        return exp10 >= 0 ? q * Rational(p) : q / Rational(p);
      }
      return Rational(Integer(s));
    }
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in rational literal: " + s);
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational literal: " + s);
  }
}

std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return q.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

QVec to_qvec(const std::vector<long>& v) {
  QVec out;
  out.reserve(v.size());
  for (long x : v) out.emplace_back(x);
  return out;
}

std::vector<double> to_doubles(const QVec& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

Rational dot(const QVec& a, const QVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

QVec add(const QVec& a, const QVec& b) {
  QVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

QVec sub(const QVec& a, const QVec& b) {
  QVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

QVec scale(const QVec& a, const Rational& s) {
  QVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
  return out;
}

bool is_zero(const QVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

QMat transpose(const QMat& m) {
  if (m.empty()) return {};
  QMat t(m[0].size(), QVec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

QVec mat_vec(const QMat& m, const QVec& v) {
  QVec out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], v);
  return out;
}

QMat mat_mul(const QMat& a, const QMat& b) {
  QMat bt = transpose(b);
  QMat out(a.size(), QVec(bt.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < bt.size(); ++j) out[i][j] = dot(a[i], bt[j]);
  return out;
}

QMat identity(std::size_t n) {
  QMat m(n, QVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(QMat& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(QMat m) {
  if (m.empty()) return 0;
  return rref(m, m[0].size()).size();
}

Rational determinant(QMat m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

std::optional<QMat> inverse(const QMat& m) {
  const std::size_t n = m.size();
  QMat aug(n, QVec(2 * n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug, n);
  if (piv.size() < n) return std::nullopt;
  QMat inv(n, QVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

std::optional<QVec> solve(const QMat& a, const QVec& b) {
  auto inv = inverse(a);
  if (!inv) return std::nullopt;
  return mat_vec(*inv, b);
}

QMat nullspace(const QMat& m, std::size_t cols) {
  QMat r = m;
  auto piv = rref(r, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : piv) is_pivot[c] = true;
  QMat basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVec v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r[i][free];
    basis.push_back(primitive(v));
  }
  return basis;
}

QMat row_basis(const QMat& m) {
  QMat basis;
  for (const auto& row : m) {
    QMat trial = basis;
    trial.push_back(row);
    if (rank(trial) == trial.size()) basis.push_back(row);
  }
  return basis;
}

QVec primitive(const QVec& v) {
  if (is_zero(v)) throw std::invalid_argument("primitive(): zero vector");
  Integer den_lcm = 1;
  for (const auto& x : v) {
    Integer d = boost::multiprecision::denominator(x);
    den_lcm = boost::multiprecision::lcm(den_lcm, d);
  }
  Integer g = 0;
  std::vector<Integer> ints;
  for (const auto& x : v) {
    Rational y = x * Rational(den_lcm);
    Integer n = boost::multiprecision::numerator(y);
    ints.push_back(n);
    g = boost::multiprecision::gcd(g, n);
  }
  QVec out;
  out.reserve(v.size());
  for (const auto& n : ints) out.emplace_back(n / g);
  return out;
}

bool lex_less(const QVec& a, const QVec& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

}  // namespace manin
