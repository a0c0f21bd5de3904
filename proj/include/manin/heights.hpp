#pragma once

// Canonical heights of torus points over Q. A point x in (Q^*)^d only
// enters through its valuations n_p = ord_p(x) and its signs.
//
// Convention: n_inf = -log|x| componentwise, so sum_v n_v log q_v = 0
// (product formula) with log q_inf = 1. H_v(lambda, x) = exp(phi(n_v) log q_v).

#include "manin/fan.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <optional>

namespace manin {

using PrimeMap = std::map<std::uint64_t, std::vector<long>>;

struct ValuationProfile {
  int dim = 0;
  PrimeMap val;           // only primes with n_p != 0
  std::vector<int> sign;  // +-1 per coordinate

  std::vector<double> n_inf() const;
  std::vector<Rational> reconstruct() const;
  // Profile of the product of two points.
  ValuationProfile operator*(const ValuationProfile& o) const;
  bool operator==(const ValuationProfile& o) const = default;
};

// Offsets g in G(A_Q) up to K_G: integer vectors at finitely many primes and
// a real vector at infinity.
struct AdelicOffset {
  PrimeMap finite;
  std::vector<double> arch;  // empty = zero
};

ValuationProfile valuation_profile(const std::vector<Rational>& x);
// Factorization of a nonzero integer (trial division; desk-scale inputs).
std::map<std::uint64_t, long> factor_integer(Integer n);

struct Place {
  std::uint64_t p = 0;  // 0 = archimedean
  static Place infinity() { return {0}; }
  static Place prime(std::uint64_t q) { return {q}; }
  bool is_infinite() const { return p == 0; }
};

std::complex<double> local_height(const PLFunction& f, Place v, const ValuationProfile& x,
                                  const AdelicOffset* g = nullptr);
std::complex<double> global_height(const PLFunction& f, const ValuationProfile& x,
                                   const AdelicOffset* g = nullptr);
double global_height_real(const PLFunction& f, const ValuationProfile& x,
                          const AdelicOffset* g = nullptr);

// Exact height for integer lambda (then every factor is an integer power of
// a prime): H = prod_p p^{phi(n_p) - psi_sigma(n_p)}, sigma the maximal cone
// holding n_inf, located by exact integer comparisons.
Rational global_height_exact(const Fan& fan, const std::vector<long>& lambda,
                             const ValuationProfile& x);

// chi_m(x g) = exp(-i sum_v <m, n_v + g_v> log q_v). Trivial on rational
// points without offset.
std::complex<double> character_pairing(std::span<const double> m, const ValuationProfile& x,
                                       const AdelicOffset* g = nullptr);

}  // namespace manin
