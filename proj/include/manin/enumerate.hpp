#pragma once

// Exact enumeration of torus points x in (Q^*)^d with H(lambda, x g) <= B.
//
// Points are valuation profiles. The search runs over primes in ascending
// order, assigning n_p != 0 from a candidate list sorted by phi(n); the
// finite part prod p^{phi(n_p)} bounds the search (every archimedean factor
// is >= 1) and the archimedean factor is applied at the leaves. Signs are
// not enumerated: every profile stands for 2^d points.
//
// Two drivers: a plain recursive one (reference) and an OpenMP one that cuts
// the tree into a fixed frontier of tasks, accumulates per task and merges in
// task order, so results do not depend on the thread count.

#include "manin/fan.hpp"
#include "manin/heights.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

namespace manin {

class Enumerator;

struct StackEntry {
  std::uint32_t prime = 0;
  double log_p = 0.0;
  int cand = -1;  // index into the candidate list; -1 = zero vector
  int level_kind = 0;  // 0 = ordinary prime, 1 = offset prime
};

// What a visitor sees at an accepted point.
struct LeafView {
  const Enumerator* en = nullptr;
  const StackEntry* stack = nullptr;
  int depth = 0;
  double log_finite = 0.0;    // sum phi(n_p + g_p) log p
  const double* n_inf = nullptr;  // -sum n_p log p + g_inf
  double log_height = 0.0;    // log_finite + phi(n_inf)

  // shifted exponent n_p + g_p at level i
  const int* shifted(int i) const;
  // the point's own exponent n_p at level i
  std::vector<long> own(int i) const;
  ValuationProfile profile() const;
};

class Enumerator {
 public:
  // lambda: real, all entries > 0. offset may be null.
  Enumerator(const Fan& fan, std::vector<double> lambda, double bound,
             const AdelicOffset* offset = nullptr);

  const Fan& fan() const { return fan_; }
  int dim() const { return d_; }
  double log_bound() const { return log_b_; }
  std::size_t num_candidates() const { return cand_phi_.size(); }
  const int* candidate(int k) const { return k < 0 ? zero_.data() : &cand_vec_[k * d_]; }
  double candidate_phi(int k) const { return k < 0 ? 0.0 : cand_phi_[k]; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  const std::vector<long>* offset_at(std::uint32_t p) const;
  double phi(const double* v) const;  // phi_lambda at a real point
  const std::vector<double>& arch_offset() const { return g_inf_; }

  template <class Acc>
  Acc run_serial(Acc acc) const;
  template <class Acc>
  Acc run_parallel(const Acc& proto, int threads, std::size_t target_tasks = 4096) const;

  std::uint64_t last_nodes() const { return nodes_; }

 private:
  struct State {
    std::vector<StackEntry> stack;
    std::vector<double> n_inf;
    double log_finite = 0.0;
    double budget = 0.0;
  };
  struct Task {
    State st;
    std::size_t next = 0;     // next ordinary prime index
    std::size_t special = 0;  // offset primes assigned so far
    bool leaf_only = false;
  };

  template <class Acc>
  void visit_leaf(const State& st, Acc& acc) const;
  template <class Acc>
  void dfs(State& st, std::size_t next, Acc& acc, std::uint64_t& nodes) const;
  template <class Acc>
  void special_phase(State& st, std::size_t idx, Acc& acc, std::uint64_t& nodes) const;
  template <class Acc>
  void run_task(const Task& t, Acc& acc, std::uint64_t& nodes) const;
  std::vector<Task> build_frontier(std::size_t target) const;
  void push(State& st, std::uint32_t prime, double lp, int cand, int kind, double cost) const;
  void pop(State& st, double cost) const;

  Fan fan_;
  int d_;
  std::vector<double> lambda_;
  double log_b_;
  double phi_min_;
  std::vector<int> cand_vec_;     // flattened, d per candidate
  std::vector<double> cand_phi_;  // sorted ascending
  std::vector<int> zero_;
  std::vector<std::uint32_t> primes_;  // ordinary primes (offset primes removed)
  std::vector<double> log_primes_;
  std::vector<std::uint32_t> special_;  // offset primes
  std::vector<std::vector<long>> special_g_;
  std::vector<double> g_inf_;
  mutable std::uint64_t nodes_ = 0;
};

// --- template implementation

inline void Enumerator::push(State& st, std::uint32_t prime, double lp, int cand, int kind,
                             double cost) const {
  st.stack.push_back({prime, lp, cand, kind});
  const int* v = candidate(cand);
  const std::vector<long>* g = kind == 1 ? offset_at(prime) : nullptr;
  for (int i = 0; i < d_; ++i) {
    double n = v[i] - (g ? (*g)[i] : 0);
    st.n_inf[i] -= n * lp;
  }
  st.log_finite += cost;
  st.budget -= cost;
}

inline void Enumerator::pop(State& st, double cost) const {
  const StackEntry e = st.stack.back();
  st.stack.pop_back();
  const int* v = candidate(e.cand);
  const std::vector<long>* g = e.level_kind == 1 ? offset_at(e.prime) : nullptr;
  for (int i = 0; i < d_; ++i) {
    double n = v[i] - (g ? (*g)[i] : 0);
    st.n_inf[i] += n * e.log_p;
  }
  st.log_finite -= cost;
  st.budget += cost;
}

template <class Acc>
void Enumerator::visit_leaf(const State& st, Acc& acc) const {
  const double lh = st.log_finite + phi(st.n_inf.data());
  if (lh > log_b_ + 1e-9 * std::max(1.0, log_b_)) return;
  LeafView view;
  view.en = this;
  view.stack = st.stack.data();
  view.depth = static_cast<int>(st.stack.size());
  view.log_finite = st.log_finite;
  view.n_inf = st.n_inf.data();
  view.log_height = lh;
  acc.leaf(view);
}

template <class Acc>
void Enumerator::dfs(State& st, std::size_t next, Acc& acc, std::uint64_t& nodes) const {
  ++nodes;
  visit_leaf(st, acc);
  const double slack = st.budget + 1e-9;
  const std::size_t nc = cand_phi_.size();
  for (std::size_t j = next; j < primes_.size(); ++j) {
    const double lp = log_primes_[j];
    if (phi_min_ * lp > slack) break;
    for (std::size_t k = 0; k < nc; ++k) {
      const double cost = cand_phi_[k] * lp;
      if (cost > slack) break;
      push(st, primes_[j], lp, static_cast<int>(k), 0, cost);
      dfs(st, j + 1, acc, nodes);
      pop(st, cost);
    }
  }
}

template <class Acc>
void Enumerator::special_phase(State& st, std::size_t idx, Acc& acc, std::uint64_t& nodes) const {
  if (idx == special_.size()) {
    dfs(st, 0, acc, nodes);
    return;
  }
  const std::uint32_t p = special_[idx];
  const double lp = std::log(static_cast<double>(p));
  const double slack = st.budget + 1e-9;
  // shifted exponent v = n + g ranges over 0 and the candidates
  for (int k = -1; k < static_cast<int>(cand_phi_.size()); ++k) {
    const double cost = candidate_phi(k) * lp;
    if (cost > slack) break;
    push(st, p, lp, k, 1, cost);
    special_phase(st, idx + 1, acc, nodes);
    pop(st, cost);
  }
}

template <class Acc>
Acc Enumerator::run_serial(Acc acc) const {
  State st;
  st.n_inf = g_inf_;
  st.budget = log_b_;
  std::uint64_t nodes = 0;
  special_phase(st, 0, acc, nodes);
  nodes_ = nodes;
  return acc;
}

template <class Acc>
void Enumerator::run_task(const Task& t, Acc& acc, std::uint64_t& nodes) const {
  State st = t.st;
  if (t.leaf_only) {
    ++nodes;
    visit_leaf(st, acc);
    return;
  }
  if (t.special < special_.size()) {
    special_phase(st, t.special, acc, nodes);
    return;
  }
  dfs(st, t.next, acc, nodes);
}

template <class Acc>
Acc Enumerator::run_parallel(const Acc& proto, int threads, std::size_t target_tasks) const {
  std::vector<Task> tasks = build_frontier(target_tasks);
  std::vector<Acc> partial(tasks.size(), proto);
  std::vector<std::uint64_t> nodes(tasks.size(), 0);
  const long nt = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : omp_get_max_threads())
  for (long i = 0; i < nt; ++i) run_task(tasks[i], partial[i], nodes[i]);
  Acc out = proto;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    out.merge(partial[i]);
    total += nodes[i];
  }
  nodes_ = total;
  return out;
}

inline const int* LeafView::shifted(int i) const { return en->candidate(stack[i].cand); }

}  // namespace manin
