#pragma once

// Complete regular fans in Z^d and piecewise-linear functions on them.
//
// A fan is given by its rays and maximal cones; every lower-dimensional cone
// is a face of a maximal one (all cones are simplicial), so the full cone
// list is derived as the set of subsets of maximal cones.

#include "manin/rational.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace manin {

// Structural problems with fan input (bad indices, wrong sizes, bad JSON).
class FanFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Fan {
 public:
  Fan() = default;
  Fan(int dim, std::vector<std::vector<long>> rays, std::vector<std::vector<int>> max_cones,
      std::string name = {});

  static Fan from_json(const nlohmann::json& j, std::string name = {});
  nlohmann::json to_json() const;

  int dim() const { return dim_; }
  std::size_t num_rays() const { return rays_.size(); }
  const std::vector<std::vector<long>>& rays() const { return rays_; }
  const std::vector<std::vector<int>>& max_cones() const { return max_cones_; }
  // All cones including {0} (empty index list), sorted by (dim, indices).
  const std::vector<std::vector<int>>& cones() const { return cones_; }
  const std::string& name() const { return name_; }

  // Inverse of the matrix whose columns are the rays of maximal cone c;
  // integer-valued exactly when the cone is unimodular.
  const QMat& cone_inverse(std::size_t c) const { return inverses_[c]; }
  const std::vector<double>& cone_inverse_flat(std::size_t c) const { return inverses_flat_[c]; }
  bool cone_is_unimodular(std::size_t c) const { return unimodular_[c]; }

  std::size_t count_cones_of_dim(int k) const;

 private:
  int dim_ = 0;
  std::vector<std::vector<long>> rays_;
  std::vector<std::vector<int>> max_cones_;
  std::vector<std::vector<int>> cones_;
  std::vector<QMat> inverses_;
  std::vector<std::vector<double>> inverses_flat_;  // row-major d x d
  std::vector<bool> unimodular_;
  std::string name_;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks primitivity, unimodularity, completeness (random-vector coverage
// sampler plus the Euler characteristic identity) and face closure.
ValidationReport validate_fan(const Fan& fan, std::uint64_t seed = 12345, int samples = 4000);

struct ConeLocation {
  std::size_t cone = 0;
  std::vector<double> coeffs;  // n = sum coeffs[k] * rays[max_cones[cone][k]]
};

struct ConeLocationQ {
  std::size_t cone = 0;
  QVec coeffs;
};

// Lowest-indexed maximal cone containing n. Throws std::domain_error if no
// cone contains n (only possible for incomplete fans).
ConeLocation locate_cone(const Fan& fan, std::span<const double> n);
ConeLocationQ locate_cone(const Fan& fan, const QVec& n);

// phi_lambda with phi(e_j) = coeffs[j].
struct PLFunction {
  Fan fan;
  std::vector<std::complex<double>> coeffs;

  static PLFunction real(Fan fan, const std::vector<double>& values);
  static PLFunction anticanonical(const Fan& fan);  // rho = (1, ..., 1)

  bool is_real() const;
  std::vector<double> real_coeffs() const;
};

std::complex<double> pl_evaluate(const PLFunction& f, std::span<const double> n);
double pl_evaluate_real(const PLFunction& f, std::span<const double> n);
// Exact evaluation for rational coefficients and a rational point.
Rational pl_evaluate(const Fan& fan, const QVec& coeffs, const QVec& n);

// Named fans shipped with the library: p1, p2, p1xp1, hirzebruch-<n>.
Fan builtin_fan(const std::string& name);
// Hirzebruch surface F_n: rays e1, e2, (-1, orientation * n), -e2.
Fan hirzebruch_fan(int n, int orientation = +1);
// Product fan (rays embedded blockwise, maximal cones all pairs).
Fan product_fan(const Fan& a, const Fan& b);

// "builtin:<name>" or a path to a JSON file.
Fan load_fan(const std::string& spec);

}  // namespace manin
