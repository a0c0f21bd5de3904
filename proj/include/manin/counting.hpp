#pragma once

// N(B), truncated height zeta sums and asymptotic fits on top of the
// enumerator.

#include "manin/enumerate.hpp"
#include "manin/heights.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace manin {

struct ExecPolicy {
  int threads = 0;      // 0 = OpenMP default (MANIN_TORIC_THREADS is read by the CLI)
  bool serial = false;  // plain recursive reference driver
};

// Profiles (signs all +) of the x with H(lambda, x) <= B, sorted. Each stands
// for 2^d points.
std::vector<ValuationProfile> enumerate_bounded(const Fan& fan, const std::vector<double>& lambda,
                                                double B, ExecPolicy exec = {});

// Exact N(B) for every B in the grid (bounds need not be sorted). Borderline
// points (|log H - log B| < 1e-9) are decided in exact arithmetic when lambda
// and B are integers and there is no offset, in long double otherwise.
std::vector<std::uint64_t> count_points(const Fan& fan, const std::vector<double>& lambda,
                                        const std::vector<double>& bounds, ExecPolicy exec = {},
                                        const AdelicOffset* offset = nullptr,
                                        std::uint64_t* nodes = nullptr);

struct AsymptoticFit {
  double a = 1.0;
  int b = 1;
  std::vector<double> coeffs;  // N(X) ~ X^a sum_k coeffs[k] (log X)^k, k < b
  double leading = 0.0;        // coeffs[b-1]
  double rel_residual = 0.0;   // rms of (fit - N)/N
  double condition = 0.0;
};

// Least squares on N(X)/X^a in powers of log X. Throws std::domain_error on
// fewer than b+1 points or a numerically singular design.
AsymptoticFit fit_asymptotic(const std::vector<double>& X, const std::vector<double>& N, double a,
                             int b);

struct CountReport {
  std::string fan;
  std::vector<double> lambda;
  std::vector<double> bounds;
  std::vector<std::uint64_t> counts;
  std::vector<double> predicted;  // NaN unless lambda = rho
  std::vector<double> ratio;      // N / predicted
  int rank = 1;
  double theta = 0.0;
  std::optional<AsymptoticFit> fit;
  std::uint64_t nodes = 0;
  double seconds = 0.0;
};

CountReport count_N(const Fan& fan, const std::vector<double>& lambda,
                    const std::vector<double>& bounds, ExecPolicy exec = {},
                    std::uint64_t pmax = 1000000);

struct ZetaPartial {
  std::complex<double> value;
  double tail = 0.0;  // rough size of the omitted part, from the count growth
  std::uint64_t points = 0;
};

// sum over H(rho, x) <= B of H(-lambda, x); requires Re lambda_j > 1.
ZetaPartial zeta_partial(const Fan& fan, const std::vector<std::complex<double>>& lambda, double B,
                         ExecPolicy exec = {});

// Per-point data for cross-checks: sorted multiset of H(rho, x) and the
// matching H(-lambda, x) values.
std::vector<double> height_multiset(const Fan& fan, const std::vector<double>& lambda, double B,
                                    ExecPolicy exec = {}, const AdelicOffset* offset = nullptr);

}  // namespace manin
