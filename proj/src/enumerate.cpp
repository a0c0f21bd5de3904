#include "manin/enumerate.hpp"

#include "manin/primes.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace manin {

namespace {

// All t in Z_{>=0}^k with sum t_j w_j <= cap, appended as ray combinations.
void cone_points(const Fan& fan, const std::vector<int>& cone, const std::vector<double>& lam,
                 std::size_t idx, double cap, std::vector<int>& cur,
                 std::map<std::vector<int>, double>& out, double phi) {
  if (idx == cone.size()) {
    bool zero = true;
    for (int c : cur) zero = zero && c == 0;
    if (!zero) out.emplace(cur, phi);
    return;
  }
  const auto& ray = fan.rays()[cone[idx]];
  const double w = lam[cone[idx]];
  std::vector<int> saved = cur;
  for (long t = 0; t * w <= cap + 1e-12; ++t) {
    cone_points(fan, cone, lam, idx + 1, cap - t * w, cur, out, phi + t * w);
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] += static_cast<int>(ray[i]);
  }
  cur = saved;
}

}  // namespace

Enumerator::Enumerator(const Fan& fan, std::vector<double> lambda, double bound,
                       const AdelicOffset* offset)
    : fan_(fan), d_(fan.dim()), lambda_(std::move(lambda)) {
  if (lambda_.size() != fan_.num_rays())
    throw std::invalid_argument("enumerate: lambda has wrong length");
  phi_min_ = lambda_.empty() ? 0.0 : lambda_[0];
  for (double l : lambda_) {
    if (!(l > 0.0)) throw std::domain_error("enumerate: every lambda_j must be > 0 (count is infinite)");
    phi_min_ = std::min(phi_min_, l);
  }
  if (!(bound >= 1.0)) throw std::domain_error("enumerate: bound must be >= 1");
  log_b_ = std::log(bound);
  zero_.assign(d_, 0);

  // candidate exponent vectors: phi(n) <= log B / log 2
  const double cap = log_b_ / std::log(2.0) + 1e-9;
  std::map<std::vector<int>, double> cands;
  for (const auto& cone : fan_.max_cones()) {
    std::vector<int> cur(d_, 0);
    cone_points(fan_, cone, lambda_, 0, cap, cur, cands, 0.0);
  }
  std::vector<std::pair<double, std::vector<int>>> sorted;
  for (auto& [v, phi] : cands) sorted.emplace_back(phi, v);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [phi, v] : sorted) {
    cand_phi_.push_back(phi);
    cand_vec_.insert(cand_vec_.end(), v.begin(), v.end());
  }

  if (offset) {
    for (const auto& [p, g] : offset->finite) {
      bool zero = true;
      for (long e : g) zero = zero && e == 0;
      if (zero) continue;
      if (g.size() != static_cast<std::size_t>(d_))
        throw std::invalid_argument("enumerate: offset has wrong dimension");
      special_.push_back(static_cast<std::uint32_t>(p));
      special_g_.push_back(g);
    }
    if (!offset->arch.empty()) g_inf_ = offset->arch;
  }
  if (g_inf_.empty()) g_inf_.assign(d_, 0.0);

  const double pmax = std::exp(log_b_ / phi_min_) * (1.0 + 1e-9) + 1.0;
  if (pmax > 4e9) throw std::domain_error("enumerate: bound too large for the prime table");
  for (std::uint32_t p : primes_up_to(static_cast<std::uint64_t>(pmax))) {
    if (std::find(special_.begin(), special_.end(), p) != special_.end()) continue;
    primes_.push_back(p);
    log_primes_.push_back(std::log(static_cast<double>(p)));
  }
}

const std::vector<long>* Enumerator::offset_at(std::uint32_t p) const {
  for (std::size_t i = 0; i < special_.size(); ++i)
    if (special_[i] == p) return &special_g_[i];
  return nullptr;
}

double Enumerator::phi(const double* v) const {
  double scale = 1.0;
  for (int i = 0; i < d_; ++i) scale = std::max(scale, std::fabs(v[i]));
  const double tol = -1e-12 * scale;
  double best_min = -1e300, best_val = 0.0;
  for (std::size_t c = 0; c < fan_.max_cones().size(); ++c) {
    const auto& inv = fan_.cone_inverse_flat(c);
    const auto& cone = fan_.max_cones()[c];
    double mn = 1e300, val = 0.0;
    for (int k = 0; k < d_; ++k) {
      double s = 0.0;
      for (int i = 0; i < d_; ++i) s += inv[k * d_ + i] * v[i];
      mn = std::min(mn, s);
      val += s * lambda_[cone[k]];
    }
    if (mn >= tol) return val;
    if (mn > best_min) {
      best_min = mn;
      best_val = val;
    }
  }
  return best_val;
}

std::vector<Enumerator::Task> Enumerator::build_frontier(std::size_t target) const {
  std::vector<Task> tasks;
  // offset primes are expanded completely: each assignment is a task root
  {
    State st;
    st.n_inf = g_inf_;
    st.budget = log_b_;
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
      if (idx == special_.size()) {
        Task t;
        t.st = st;
        t.special = special_.size();
        tasks.push_back(std::move(t));
        return;
      }
      const double lp = std::log(static_cast<double>(special_[idx]));
      for (int k = -1; k < static_cast<int>(cand_phi_.size()); ++k) {
        const double cost = candidate_phi(k) * lp;
        if (cost > st.budget + 1e-9) break;
        push(st, special_[idx], lp, k, 1, cost);
        rec(idx + 1);
        pop(st, cost);
      }
    };
    rec(0);
  }
  // split the task with the largest remaining budget until there are enough
  using Key = std::pair<double, long>;  // (budget, -index)
  std::priority_queue<Key> pq;
  for (std::size_t i = 0; i < tasks.size(); ++i) pq.push({tasks[i].st.budget, -static_cast<long>(i)});
  while (tasks.size() < target && !pq.empty()) {
    const std::size_t i = static_cast<std::size_t>(-pq.top().second);
    pq.pop();
    Task parent = tasks[i];
    tasks[i].leaf_only = true;
    const double slack = parent.st.budget + 1e-9;
    for (std::size_t j = parent.next; j < primes_.size(); ++j) {
      const double lp = log_primes_[j];
      if (phi_min_ * lp > slack) break;
      for (std::size_t k = 0; k < cand_phi_.size(); ++k) {
        const double cost = cand_phi_[k] * lp;
        if (cost > slack) break;
        Task child;
        child.st = parent.st;
        push(child.st, primes_[j], lp, static_cast<int>(k), 0, cost);
        child.next = j + 1;
        child.special = special_.size();
        pq.push({child.st.budget, -static_cast<long>(tasks.size())});
        tasks.push_back(std::move(child));
      }
    }
  }
  return tasks;
}

std::vector<long> LeafView::own(int i) const {
  const int d = en->dim();
  const int* v = shifted(i);
  const std::vector<long>* g = stack[i].level_kind == 1 ? en->offset_at(stack[i].prime) : nullptr;
  std::vector<long> n(d);
  for (int k = 0; k < d; ++k) n[k] = v[k] - (g ? (*g)[k] : 0);
  return n;
}

ValuationProfile LeafView::profile() const {
  ValuationProfile prof;
  prof.dim = en->dim();
  prof.sign.assign(prof.dim, 1);
  for (int i = 0; i < depth; ++i) {
    std::vector<long> n = own(i);
    bool zero = true;
    for (long e : n) zero = zero && e == 0;
    if (!zero) prof.val[stack[i].prime] = std::move(n);
  }
  return prof;
}

}  // namespace manin
