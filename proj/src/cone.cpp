#include "manin/cone.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace manin {

namespace {

Rational abs_q(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational parse_entry(const nlohmann::json& e) {
  if (e.is_string()) return parse_rational(e.get<std::string>());
  if (e.is_number_integer()) return Rational(e.get<long long>());
  if (e.is_number()) return parse_rational(std::to_string(e.get<double>()));
  throw ConeError("cone entries must be numbers or rational strings");
}

nlohmann::json qvec_json(const QVec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

QVec qvec_from_json(const nlohmann::json& j) {
  QVec v;
  for (const auto& e : j) v.push_back(parse_entry(e));
  return v;
}

void sort_unique(QMat& rows) {
  std::sort(rows.begin(), rows.end(), lex_less);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

}  // namespace

Rational PolyhedralCone::measure_det() const {
  if (measure.empty()) return 1;
  return abs_q(determinant(measure));
}

nlohmann::json PolyhedralCone::to_json() const {
  nlohmann::json j;
  j["dim"] = dim;
  j["generators"] = nlohmann::json::array();
  for (const auto& g : generators) j["generators"].push_back(qvec_json(g));
  if (!measure.empty()) {
    j["measure"] = nlohmann::json::array();
    for (const auto& b : measure) j["measure"].push_back(qvec_json(b));
  }
  return j;
}

PolyhedralCone PolyhedralCone::from_json(const nlohmann::json& j) {
  try {
    PolyhedralCone c;
    c.dim = j.at("dim").get<int>();
    for (const auto& g : j.at("generators")) c.generators.push_back(qvec_from_json(g));
    if (j.contains("measure"))
      for (const auto& b : j["measure"]) c.measure.push_back(qvec_from_json(b));
    for (const auto& g : c.generators)
      if (static_cast<int>(g.size()) != c.dim) throw ConeError("generator has wrong dimension");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConeError(std::string("malformed cone JSON: ") + e.what());
  }
}

PolyhedralCone PolyhedralCone::from_ints(const std::vector<std::vector<long>>& gens) {
  PolyhedralCone c;
  if (gens.empty()) throw ConeError("cone needs generators");
  c.dim = static_cast<int>(gens[0].size());
  for (const auto& g : gens) c.generators.push_back(to_qvec(g));
  return c;
}

nlohmann::json RationalConeForm::to_json() const {
  nlohmann::json j;
  j["dim"] = dim;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : terms) {
    nlohmann::json tj;
    tj["coeff"] = to_string(t.coeff);
    tj["forms"] = nlohmann::json::array();
    for (const auto& f : t.forms) tj["forms"].push_back(qvec_json(f));
    j["terms"].push_back(tj);
  }
  return j;
}

RationalConeForm RationalConeForm::from_json(const nlohmann::json& j) {
  RationalConeForm f;
  f.dim = j.value("dim", 0);
  for (const auto& tj : j.at("terms")) {
    FormTerm t;
    t.coeff = parse_entry(tj.at("coeff"));
    for (const auto& fj : tj.at("forms")) t.forms.push_back(qvec_from_json(fj));
    if (f.dim == 0 && !t.forms.empty()) f.dim = static_cast<int>(t.forms[0].size());
    f.terms.push_back(std::move(t));
  }
  return f;
}

// Double description: start from the simplicial cone cut out by n
// independent rows, then intersect with one half-space at a time. Two rays
// are combined only when adjacent (combinatorial test on zero sets).
QMat extreme_rays(const QMat& a) {
  if (a.empty()) throw ConeError("extreme_rays: no constraints");
  const std::size_t n = a[0].size();
  const std::size_t m = a.size();

  std::vector<std::size_t> order;
  {
    QMat chosen;
    for (std::size_t i = 0; i < m && chosen.size() < n; ++i) {
      QMat trial = chosen;
      trial.push_back(a[i]);
      if (rank(trial) == trial.size()) {
        chosen = std::move(trial);
        order.push_back(i);
      }
    }
    if (chosen.size() < n) throw ConeError("extreme_rays: constraints not of full column rank");
  }
  std::vector<bool> in_initial(m, false);
  for (auto i : order) in_initial[i] = true;
  QMat ak;
  for (auto i : order) ak.push_back(a[i]);
  for (std::size_t i = 0; i < m; ++i)
    if (!in_initial[i]) order.push_back(i);

  struct Ray {
    QVec v;
    std::vector<char> zero;  // indexed by row of a
  };
  std::vector<Ray> rays;
  QMat inv = *inverse(ak);
  for (std::size_t k = 0; k < n; ++k) {
    Ray r;
    for (std::size_t i = 0; i < n; ++i) r.v.push_back(inv[i][k]);
    r.v = primitive(r.v);
    r.zero.assign(m, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (i != k) r.zero[order[i]] = 1;
    rays.push_back(std::move(r));
  }

  for (std::size_t step = n; step < m; ++step) {
    const std::size_t row = order[step];
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(a[row], rays[r].v);
      if (val[r] > 0) pos.push_back(r);
      if (val[r] < 0) neg.push_back(r);
      if (val[r] >= 0) {
        Ray keep = rays[r];
        if (val[r] == 0) keep.zero[row] = 1;
        next.push_back(std::move(keep));
      }
    }
    for (auto p : pos)
      for (auto q : neg) {
        std::vector<char> common(m, 0);
        std::size_t count = 0;
        for (std::size_t i = 0; i < m; ++i) {
          common[i] = rays[p].zero[i] && rays[q].zero[i];
          count += common[i];
        }
        if (count + 2 < n) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          bool superset = true;
          for (std::size_t i = 0; i < m && superset; ++i)
            if (common[i] && !rays[r].zero[i]) superset = false;
          if (superset) adjacent = false;
        }
        if (!adjacent) continue;
        Ray nr;
        nr.v = primitive(sub(scale(rays[q].v, val[p]), scale(rays[p].v, val[q])));
        nr.zero = common;
        nr.zero[row] = 1;
        next.push_back(std::move(nr));
      }
    rays = std::move(next);
  }
  QMat out;
  for (auto& r : rays) out.push_back(std::move(r.v));
  sort_unique(out);
  return out;
}

PolyhedralCone dual_cone(const PolyhedralCone& c) {
  if (c.generators.empty()) throw ConeError("dual_cone: cone has no generators");
  for (const auto& g : c.generators)
    if (is_zero(g)) throw ConeError("dual_cone: zero generator");
  const std::size_t n = static_cast<std::size_t>(c.dim);
  PolyhedralCone d;
  d.dim = c.dim;
  if (!c.measure.empty()) {
    auto inv = inverse(c.measure);
    if (inv) d.measure = transpose(*inv);  // dual basis
  }
  const std::size_t r = rank(c.generators);
  if (r == n) {
    d.generators = extreme_rays(c.generators);
    return d;
  }
  QMat span = row_basis(c.generators);
  QMat lineality = nullspace(c.generators, n);
  QMat out;
  if (!span.empty()) {
    QMat reduced = mat_mul(c.generators, transpose(span));  // m x r
    for (const auto& a : extreme_rays(reduced)) {
      QVec y(n, Rational(0));
      for (std::size_t i = 0; i < a.size(); ++i) y = add(y, scale(span[i], a[i]));
      out.push_back(primitive(y));
    }
  }
  for (const auto& l : lineality) {
    out.push_back(l);
    out.push_back(scale(l, -1));
  }
  sort_unique(out);
  d.generators = std::move(out);
  return d;
}

bool contains_line(const PolyhedralCone& c) {
  auto d = dual_cone(c);
  return rank(d.generators) < static_cast<std::size_t>(c.dim);
}

std::vector<std::vector<std::size_t>> triangulate_indices(const QMat& gens,
                                                          const std::vector<std::size_t>& order) {
  if (gens.empty()) return {};
  const std::size_t d = gens[0].size();
  if (d == 0) return {{}};
  std::vector<std::size_t> initial;
  {
    QMat chosen;
    for (auto i : order) {
      QMat trial = chosen;
      trial.push_back(gens[i]);
      if (rank(trial) == trial.size()) {
        chosen = std::move(trial);
        initial.push_back(i);
        if (chosen.size() == d) break;
      }
    }
    if (initial.size() < d) throw ConeError("triangulate: cone is not full-dimensional");
  }
  std::vector<std::vector<std::size_t>> simplices{initial};
  if (d == 1) return simplices;

  for (auto g : order) {
    if (std::find(initial.begin(), initial.end(), g) != initial.end()) continue;
    // boundary facets: (d-1)-subsets of simplices occurring exactly once
    std::map<std::vector<std::size_t>, std::pair<int, std::size_t>> facets;  // -> (count, opposite)
    for (const auto& s : simplices)
      for (std::size_t drop = 0; drop < d; ++drop) {
        std::vector<std::size_t> f;
        for (std::size_t k = 0; k < d; ++k)
          if (k != drop) f.push_back(s[k]);
        std::sort(f.begin(), f.end());
        auto& e = facets[f];
        e.first += 1;
        e.second = s[drop];
      }
    std::vector<std::vector<std::size_t>> added;
    for (const auto& [f, info] : facets) {
      if (info.first != 1) continue;
      QMat rows;
      for (auto i : f) rows.push_back(gens[i]);
      QVec nu = nullspace(rows, d).at(0);
      if (dot(nu, gens[info.second]) > 0) nu = scale(nu, -1);
      if (dot(nu, gens[g]) > 0) {
        auto s = f;
        s.push_back(g);
        added.push_back(std::move(s));
      }
    }
    for (auto& s : added) simplices.push_back(std::move(s));
  }
  return simplices;
}

std::vector<PolyhedralCone> triangulate(const PolyhedralCone& c) {
  std::vector<std::size_t> order(c.generators.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<PolyhedralCone> out;
  for (const auto& s : triangulate_indices(c.generators, order)) {
    PolyhedralCone piece;
    piece.dim = c.dim;
    piece.measure = c.measure;
    for (auto i : s) piece.generators.push_back(c.generators[i]);
    out.push_back(std::move(piece));
  }
  return out;
}

namespace {

RationalConeForm char_function_ordered(const PolyhedralCone& c, bool reversed) {
  RationalConeForm f;
  f.dim = c.dim;
  if (c.dim == 0) {
    f.terms.push_back({c.measure_det(), {}});
    return f;
  }
  PolyhedralCone d = dual_cone(c);
  if (rank(d.generators) < static_cast<std::size_t>(c.dim))
    throw ConeError("char_function: closure of the cone contains a line");
  std::vector<std::size_t> order(d.generators.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = reversed ? order.size() - 1 - i : i;
  const Rational mdet = c.measure_det();
  for (const auto& s : triangulate_indices(d.generators, order)) {
    FormTerm t;
    for (auto i : s) t.forms.push_back(d.generators[i]);
    t.coeff = mdet * abs_q(determinant(t.forms));
    f.terms.push_back(std::move(t));
  }
  return f;
}

}  // namespace

RationalConeForm char_function(const PolyhedralCone& c) { return char_function_ordered(c, false); }

RationalConeForm char_function_reversed(const PolyhedralCone& c) {
  return char_function_ordered(c, true);
}

std::complex<double> char_evaluate(const RationalConeForm& f,
                                   std::span<const std::complex<double>> z) {
  std::complex<double> sum = 0.0;
  for (std::size_t a = 0; a < f.terms.size(); ++a) {
    const auto& t = f.terms[a];
    std::complex<double> prod = 1.0;
    for (std::size_t j = 0; j < t.forms.size(); ++j) {
      std::complex<double> l = 0.0;
      for (std::size_t i = 0; i < t.forms[j].size(); ++i) l += to_double(t.forms[j][i]) * z[i];
      if (l == 0.0)
        throw PoleError("char_evaluate: form " + std::to_string(j) + " of term " +
                            std::to_string(a) + " vanishes at z",
                        a, j);
      prod *= l;
    }
    sum += to_double(t.coeff) / prod;
  }
  return sum;
}

double char_evaluate(const RationalConeForm& f, std::span<const double> z) {
  std::vector<std::complex<double>> zc(z.begin(), z.end());
  return char_evaluate(f, std::span<const std::complex<double>>(zc)).real();
}

Rational char_evaluate(const RationalConeForm& f, const QVec& z) {
  Rational sum = 0;
  for (std::size_t a = 0; a < f.terms.size(); ++a) {
    const auto& t = f.terms[a];
    Rational prod = 1;
    for (std::size_t j = 0; j < t.forms.size(); ++j) {
      Rational l = dot(t.forms[j], z);
      if (l == 0)
        throw PoleError("char_evaluate: form " + std::to_string(j) + " of term " +
                            std::to_string(a) + " vanishes at z",
                        a, j);
      prod *= l;
    }
    sum += t.coeff / prod;
  }
  return sum;
}

QuotientForm quotient_char_reduced(const PolyhedralCone& c, const QMat& m) {
  const std::size_t n = static_cast<std::size_t>(c.dim);
  QuotientForm out;
  if (m.empty()) {
    out.projection = identity(n);
    out.form = char_function(c);
    return out;
  }
  if (rank(m) != m.size()) throw ConeError("quotient_char: subspace basis is not independent");
  if (contains_line(c)) throw ConeError("quotient_char: cone closure contains a line");
  QMat u = nullspace(m, n);
  const std::size_t q = u.size();

  // complete m by standard vectors
  QMat full = m;
  QMat w;
  for (std::size_t i = 0; i < n && full.size() < n; ++i) {
    QVec e(n, Rational(0));
    e[i] = 1;
    QMat trial = full;
    trial.push_back(e);
    if (rank(trial) == trial.size()) {
      full = std::move(trial);
      w.push_back(e);
    }
  }
  Rational uw_det = 1;
  if (q > 0) uw_det = abs_q(determinant(mat_mul(u, transpose(w))));
  // quotient measure = factor * Lebesgue in the u-coordinates
  Rational factor = abs_q(determinant(full)) / (c.measure_det() * uw_det);

  PolyhedralCone image;
  image.dim = static_cast<int>(q);
  for (const auto& g : c.generators) {
    QVec pg = mat_vec(u, g);
    if (is_zero(pg)) throw ConeError("quotient_char: a generator lies in M");
    image.generators.push_back(pg);
  }
  if (q == 0) {
    out.form.dim = 0;
    out.form.terms.push_back({1 / factor, {}});
    return out;
  }
  if (contains_line(image)) throw ConeError("quotient_char: closure of the cone meets M");
  image.measure = identity(q);
  image.measure[0][0] = 1 / factor;
  out.projection = u;
  out.form = char_function(image);
  return out;
}

RationalConeForm quotient_char(const PolyhedralCone& c, const QMat& m) {
  QuotientForm qf = quotient_char_reduced(c, m);
  RationalConeForm f;
  f.dim = c.dim;
  QMat ut = transpose(qf.projection);
  for (const auto& t : qf.form.terms) {
    FormTerm pulled;
    pulled.coeff = t.coeff;
    for (const auto& l : t.forms) pulled.forms.push_back(mat_vec(ut, l));
    f.terms.push_back(std::move(pulled));
  }
  return f;
}

RationalConeForm residue_step(const RationalConeForm& f, const QVec& m0, const QVec& z_ref) {
  bool any_moving = false;
  for (const auto& t : f.terms)
    for (const auto& l : t.forms)
      if (dot(l, m0) != 0) any_moving = true;
  if (!any_moving) return f;  // nothing depends on t: the projection is the form itself

  RationalConeForm out;
  out.dim = f.dim;
  for (std::size_t a = 0; a < f.terms.size(); ++a) {
    FormTerm t = f.terms[a];
    for (std::size_t j = 0; j < t.forms.size(); ++j) {
      Rational v = dot(t.forms[j], z_ref);
      if (v == 0) throw PoleError("residue_step: reference point lies on a pole", a, j);
      if (v < 0) {
        t.forms[j] = scale(t.forms[j], -1);
        t.coeff = -t.coeff;
      }
    }
    std::vector<std::size_t> plus;
    for (std::size_t j = 0; j < t.forms.size(); ++j)
      if (dot(t.forms[j], m0) > 0) plus.push_back(j);
    for (std::size_t x = 0; x < plus.size(); ++x)
      for (std::size_t y = x + 1; y < plus.size(); ++y) {
        const QVec& p = t.forms[plus[x]];
        const QVec& q = t.forms[plus[y]];
        if (is_zero(sub(scale(p, dot(q, m0)), scale(q, dot(p, m0)))))
          throw PoleError("residue_step: coincident poles (forms " + std::to_string(plus[x]) +
                              ", " + std::to_string(plus[y]) + ")",
                          a, plus[y]);
      }
    for (auto j : plus) {
      const QVec& phi = t.forms[j];
      const Rational phi_m0 = dot(phi, m0);
      FormTerm r;
      r.coeff = t.coeff / phi_m0;
      for (std::size_t k = 0; k < t.forms.size(); ++k) {
        if (k == j) continue;
        const QVec& psi = t.forms[k];
        r.forms.push_back(sub(psi, scale(phi, dot(psi, m0) / phi_m0)));
      }
      out.terms.push_back(std::move(r));
    }
  }
  return out;
}

RationalConeForm residue_pushforward(const RationalConeForm& f, const QMat& m, const QVec& z_ref) {
  RationalConeForm cur = f;
  for (const auto& m0 : m) cur = residue_step(cur, m0, z_ref);
  return cur;
}

ControlCheck check_control_bound(
    const std::function<double(std::span<const double>)>& h, const ControlCandidate& cand,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& samples) {
  ControlCheck out;
  for (const auto& [v, m] : samples) {
    std::vector<double> x(v.size());
    double nv = 0.0, nm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      x[i] = v[i] + m[i];
      nv += v[i] * v[i];
      nm += m[i] * m[i];
    }
    double bound = cand.c * std::pow(1.0 + std::sqrt(nv), cand.beta) /
                   std::pow(1.0 + std::sqrt(nm), 1.0 - cand.eps);
    for (const auto& l : cand.forms) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += l[i] * x[i];
      bound /= 1.0 + std::fabs(s);
    }
    double ratio = h(x) / bound;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (ratio > 1.0) out.holds = false;
  }
  return out;
}

}  // namespace manin
