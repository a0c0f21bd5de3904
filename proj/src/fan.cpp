#include "manin/fan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace manin {

Fan::Fan(int dim, std::vector<std::vector<long>> rays, std::vector<std::vector<int>> max_cones,
         std::string name)
    : dim_(dim), rays_(std::move(rays)), max_cones_(std::move(max_cones)), name_(std::move(name)) {
  if (dim_ <= 0) throw FanFormatError("fan dimension must be positive");
  for (const auto& r : rays_) {
    if (static_cast<int>(r.size()) != dim_) throw FanFormatError("ray has wrong dimension");
    if (std::all_of(r.begin(), r.end(), [](long x) { return x == 0; }))
      throw FanFormatError("zero ray");
  }
  if (max_cones_.empty()) throw FanFormatError("fan has no maximal cones");
  for (auto& c : max_cones_) {
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw FanFormatError("repeated ray index in cone");
    for (int idx : c)
      if (idx < 0 || idx >= static_cast<int>(rays_.size()))
        throw FanFormatError("ray index out of range: " + std::to_string(idx));
    if (static_cast<int>(c.size()) > dim_) throw FanFormatError("cone has more rays than dim");
  }

  std::set<std::vector<int>> all;
  for (const auto& c : max_cones_) {
    const std::size_t k = c.size();
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::vector<int> face;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (1u << i)) face.push_back(c[i]);
      all.insert(face);
    }
  }
  cones_.assign(all.begin(), all.end());
  std::stable_sort(cones_.begin(), cones_.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });

  for (const auto& c : max_cones_) {
    QMat m(dim_, QVec(dim_, Rational(0)));
    bool full = static_cast<int>(c.size()) == dim_;
    std::optional<QMat> inv;
    if (full) {
      for (int col = 0; col < dim_; ++col)
        for (int row = 0; row < dim_; ++row) m[row][col] = rays_[c[col]][row];
      inv = inverse(m);
    }
    if (inv) {
      Rational det = determinant(m);
      unimodular_.push_back(det == 1 || det == -1);
      std::vector<double> flat;
      for (const auto& row : *inv)
        for (const auto& x : row) flat.push_back(to_double(x));
      inverses_.push_back(*inv);
      inverses_flat_.push_back(std::move(flat));
    } else {
      unimodular_.push_back(false);
      inverses_.emplace_back();
      inverses_flat_.emplace_back();
    }
  }
}

Fan Fan::from_json(const nlohmann::json& j, std::string name) {
  try {
    int dim = j.at("dim").get<int>();
    auto rays = j.at("rays").get<std::vector<std::vector<long>>>();
    auto cones = j.at("maxCones").get<std::vector<std::vector<int>>>();
    if (name.empty() && j.contains("name")) name = j["name"].get<std::string>();
    return Fan(dim, std::move(rays), std::move(cones), std::move(name));
  } catch (const nlohmann::json::exception& e) {
    throw FanFormatError(std::string("malformed fan JSON: ") + e.what());
  }
}

nlohmann::json Fan::to_json() const {
  nlohmann::json j;
  j["dim"] = dim_;
  j["rays"] = rays_;
  j["maxCones"] = max_cones_;
  return j;
}

std::size_t Fan::count_cones_of_dim(int k) const {
  return static_cast<std::size_t>(std::count_if(
      cones_.begin(), cones_.end(), [k](const auto& c) { return static_cast<int>(c.size()) == k; }));
}

ValidationReport validate_fan(const Fan& fan, std::uint64_t seed, int samples) {
  ValidationReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.violations.push_back(std::move(msg));
  };
  const int d = fan.dim();

  for (std::size_t i = 0; i < fan.num_rays(); ++i) {
    long g = 0;
    for (long x : fan.rays()[i]) g = std::gcd(g, std::labs(x));
    if (g != 1) fail("ray " + std::to_string(i) + " is not primitive");
  }

  bool all_full = true;
  for (std::size_t c = 0; c < fan.max_cones().size(); ++c) {
    if (static_cast<int>(fan.max_cones()[c].size()) != d) {
      fail("maximal cone " + std::to_string(c) + " is not full-dimensional");
      all_full = false;
    } else if (!fan.cone_is_unimodular(c)) {
      fail("maximal cone " + std::to_string(c) + " is not unimodular");
    }
  }

  // Euler characteristic of a complete fan: sum over cones of (-1)^dim = (-1)^d.
  long euler = 0;
  for (const auto& c : fan.cones()) euler += (c.size() % 2 == 0) ? 1 : -1;
  const long expected = (d % 2 == 0) ? 1 : -1;
  bool euler_ok = euler == expected;

  bool gap = false, overlap = false;
  if (all_full) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coord(-1000, 1000);
    for (int s = 0; s < samples && !(gap && overlap); ++s) {
      QVec n(d);
      bool zero = true;
      for (int i = 0; i < d; ++i) {
        long v = coord(rng);
        n[i] = v;
        zero = zero && v == 0;
      }
      if (zero) continue;
      int containing = 0, interior = 0;
      for (std::size_t c = 0; c < fan.max_cones().size(); ++c) {
        const QMat& inv = fan.cone_inverse(c);
        if (inv.empty()) continue;
        QVec t = mat_vec(inv, n);
        bool nonneg = std::all_of(t.begin(), t.end(), [](const Rational& x) { return x >= 0; });
        bool pos = std::all_of(t.begin(), t.end(), [](const Rational& x) { return x > 0; });
        containing += nonneg;
        interior += pos;
      }
      if (containing == 0) gap = true;
      if (interior >= 1 && containing >= 2) overlap = true;
    }
  }
  if (gap) fail("not complete: coverage gap found by sampling");
  if (overlap) fail("maximal cones overlap in their interiors");
  if (!euler_ok && !gap)
    fail("Euler characteristic " + std::to_string(euler) + " != " + std::to_string(expected) +
         " (not complete)");
  if (!euler_ok && gap) fail("not complete: Euler characteristic mismatch");
  return rep;
}

ConeLocation locate_cone(const Fan& fan, std::span<const double> n) {
  const int d = fan.dim();
  double scale = 1.0;
  for (double x : n) scale = std::max(scale, std::fabs(x));
  const double tol = 1e-12 * scale;
  for (std::size_t c = 0; c < fan.max_cones().size(); ++c) {
    const auto& inv = fan.cone_inverse_flat(c);
    if (inv.empty()) continue;
    std::vector<double> t(d, 0.0);
    bool ok = true;
    for (int i = 0; i < d && ok; ++i) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += inv[i * d + k] * n[k];
      if (s < -tol) ok = false;
      t[i] = s < 0.0 ? 0.0 : s;
    }
    if (ok) return {c, std::move(t)};
  }
  throw std::domain_error("locate_cone: point not covered by any maximal cone");
}

ConeLocationQ locate_cone(const Fan& fan, const QVec& n) {
  for (std::size_t c = 0; c < fan.max_cones().size(); ++c) {
    const QMat& inv = fan.cone_inverse(c);
    if (inv.empty()) continue;
    QVec t = mat_vec(inv, n);
    if (std::all_of(t.begin(), t.end(), [](const Rational& x) { return x >= 0; }))
      return {c, std::move(t)};
  }
  throw std::domain_error("locate_cone: point not covered by any maximal cone");
}

PLFunction PLFunction::real(Fan fan, const std::vector<double>& values) {
  if (values.size() != fan.num_rays())
    throw std::invalid_argument("PL function needs one value per ray");
  PLFunction f{std::move(fan), {}};
  for (double v : values) f.coeffs.emplace_back(v, 0.0);
  return f;
}

PLFunction PLFunction::anticanonical(const Fan& fan) {
  return real(fan, std::vector<double>(fan.num_rays(), 1.0));
}

bool PLFunction::is_real() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](auto z) { return z.imag() == 0.0; });
}

std::vector<double> PLFunction::real_coeffs() const {
  std::vector<double> out;
  for (auto z : coeffs) out.push_back(z.real());
  return out;
}

std::complex<double> pl_evaluate(const PLFunction& f, std::span<const double> n) {
  auto loc = locate_cone(f.fan, n);
  std::complex<double> s = 0.0;
  const auto& cone = f.fan.max_cones()[loc.cone];
  for (std::size_t k = 0; k < cone.size(); ++k) s += loc.coeffs[k] * f.coeffs[cone[k]];
  return s;
}

double pl_evaluate_real(const PLFunction& f, std::span<const double> n) {
  return pl_evaluate(f, n).real();
}

Rational pl_evaluate(const Fan& fan, const QVec& coeffs, const QVec& n) {
  auto loc = locate_cone(fan, n);
  Rational s = 0;
  const auto& cone = fan.max_cones()[loc.cone];
  for (std::size_t k = 0; k < cone.size(); ++k) s += loc.coeffs[k] * coeffs[cone[k]];
  return s;
}

namespace {

const char* kBuiltinP1 = R"({"dim": 1, "rays": [[1], [-1]], "maxCones": [[0], [1]]})";
const char* kBuiltinP2 =
    R"({"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "maxCones": [[0, 1], [1, 2], [0, 2]]})";
const char* kBuiltinP1xP1 =
    R"({"dim": 2, "rays": [[1, 0], [-1, 0], [0, 1], [0, -1]],
        "maxCones": [[0, 2], [0, 3], [1, 2], [1, 3]]})";

std::string hirzebruch_json(int n, int orientation) {
  std::ostringstream os;
  os << R"({"dim": 2, "rays": [[1, 0], [0, 1], [-1, )" << orientation * n
     << R"(], [0, -1]], "maxCones": [[0, 1], [1, 2], [2, 3], [0, 3]]})";
  return os.str();
}

}  // namespace

Fan hirzebruch_fan(int n, int orientation) {
  return Fan::from_json(nlohmann::json::parse(hirzebruch_json(n, orientation)),
                        "hirzebruch-" + std::to_string(n));
}

Fan builtin_fan(const std::string& name) {
  if (name == "p1") return Fan::from_json(nlohmann::json::parse(kBuiltinP1), name);
  if (name == "p2") return Fan::from_json(nlohmann::json::parse(kBuiltinP2), name);
  if (name == "p1xp1") return Fan::from_json(nlohmann::json::parse(kBuiltinP1xP1), name);
  const std::string prefix = "hirzebruch-";
  if (name.rfind(prefix, 0) == 0) {
    try {
      return hirzebruch_fan(std::stoi(name.substr(prefix.size())));
    } catch (const std::logic_error&) {
      throw FanFormatError("bad hirzebruch parameter in '" + name + "'");
    }
  }
  throw FanFormatError("unknown builtin fan '" + name + "'");
}

Fan product_fan(const Fan& a, const Fan& b) {
  const int d = a.dim() + b.dim();
  std::vector<std::vector<long>> rays;
  for (const auto& r : a.rays()) {
    auto v = r;
    v.resize(d, 0);
    rays.push_back(v);
  }
  for (const auto& r : b.rays()) {
    std::vector<long> v(a.dim(), 0);
    v.insert(v.end(), r.begin(), r.end());
    rays.push_back(v);
  }
  std::vector<std::vector<int>> cones;
  const int off = static_cast<int>(a.num_rays());
  for (const auto& ca : a.max_cones())
    for (const auto& cb : b.max_cones()) {
      std::vector<int> c = ca;
      for (int j : cb) c.push_back(j + off);
      cones.push_back(c);
    }
  return Fan(d, rays, cones, a.name() + "x" + b.name());
}

Fan load_fan(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) return builtin_fan(spec.substr(prefix.size()));
  std::ifstream in(spec);
  if (!in) throw FanFormatError("cannot open fan file '" + spec + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FanFormatError(std::string("malformed fan JSON: ") + e.what());
  }
  return Fan::from_json(j, spec);
}

}  // namespace manin
