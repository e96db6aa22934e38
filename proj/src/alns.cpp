#include "cdarp/alns.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace cdarp {

const char* to_string(DestroyOp op) {
  switch (op) {
    case DestroyOp::Random: return "random";
    case DestroyOp::Worst: return "worst";
    case DestroyOp::Related: return "related";
    case DestroyOp::Proximity: return "proximity";
    case DestroyOp::Closeness: return "closeness";
    case DestroyOp::Interchangeability: return "interchangeability";
  }
  return "?";
}

const char* to_string(RepairOp op) {
  switch (op) {
    case RepairOp::Best: return "best";
    case RepairOp::Regret2: return "regret2";
    case RepairOp::Regret3: return "regret3";
    case RepairOp::Regret4: return "regret4";
    case RepairOp::Closeness: return "closeness";
  }
  return "?";
}

int AlnsParams::resolved_q_max(int n_requests) const {
  int q = q_max > 0 ? q_max : std::max(4, static_cast<int>(std::ceil(0.4 * n_requests)));
  return std::min(q, n_requests);
}

int AlnsParams::resolved_q_min(int n_requests) const { return std::min(std::max(1, q_min), n_requests); }

int select_operator(std::span<const double> scores, Rng& rng) { return rng.pick_weighted(scores); }

void resize_neighborhood(int enlarge_threshold, int& stagnant, int& q, int q_min, int q_max,
                         double reduce_probability, Rng& rng) {
  if (stagnant > enlarge_threshold && q < q_max) {
    ++q;
    stagnant = 0;
  }
  const double reduc = rng.uniform01();
  if (reduc < reduce_probability && q > q_min) {
    --q;
    stagnant = 0;
  }
}

namespace {

// Removes the request's pickup and drop from its route.
void splice_out(const Instance& inst, Solution& sol, int route_idx, int request_idx) {
  auto& visits = sol.routes[route_idx].visits;
  const int o = inst.pickup_node(request_idx);
  const int d = inst.drop_node(request_idx);
  visits.erase(std::remove_if(visits.begin(), visits.end(), [&](int v) { return v == o || v == d; }), visits.end());
}

// Weighted draw of q distinct entries from `pool` (indices into weights),
// removing each pick from the pool.
template <typename OnPick>
void draw_without_replacement(std::vector<int>& pool, std::vector<double>& weights, int q, Rng& rng, OnPick on_pick) {
  for (int step = 0; step < q && !pool.empty(); ++step) {
    const int at = rng.pick_weighted(weights);
    const int chosen = pool[at];
    pool.erase(pool.begin() + at);
    weights.erase(weights.begin() + at);
    on_pick(chosen);
  }
}

}  // namespace

void destroy(DestroyOp op, const Instance& inst, const MeasureTable& table, Solution& sol, std::vector<int>& removed,
             int q, Rng& rng) {
  std::vector<int> route_of = route_assignment(inst, sol);
  std::vector<int> pool;
  for (int i = 0; i < static_cast<int>(route_of.size()); ++i)
    if (route_of[i] >= 0) pool.push_back(i);
  q = std::min<int>(q, static_cast<int>(pool.size()));

  auto remove_request = [&](int ri) {
    splice_out(inst, sol, route_of[ri], ri);
    removed.push_back(ri);
  };

  switch (op) {
    case DestroyOp::Random: {
      std::vector<double> w(pool.size(), 1.0);
      draw_without_replacement(pool, w, q, rng, remove_request);
      break;
    }
    case DestroyOp::Worst: {
      // Marginal costs are recomputed after each removal (sequential, exact).
      for (int step = 0; step < q && !pool.empty(); ++step) {
        std::vector<double> w(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
          const int ri = pool[i];
          const int k = route_of[ri];
          const Cost before = route_cost(inst, k, sol.routes[k].visits);
          std::vector<int> pruned = sol.routes[k].visits;
          const int o = inst.pickup_node(ri), d = inst.drop_node(ri);
          pruned.erase(std::remove_if(pruned.begin(), pruned.end(), [&](int v) { return v == o || v == d; }),
                       pruned.end());
          const Cost after = route_cost(inst, k, pruned);
          const double mc = static_cast<double>(before - after);
          w[i] = mc * mc;
        }
        const int at = rng.pick_weighted(w);
        const int chosen = pool[at];
        pool.erase(pool.begin() + at);
        remove_request(chosen);
      }
      break;
    }
    case DestroyOp::Related:
    case DestroyOp::Closeness: {
      if (pool.empty() || q == 0) break;
      const int first = pool[rng.below(static_cast<int>(pool.size()))];
      pool.erase(std::find(pool.begin(), pool.end(), first));
      remove_request(first);
      std::vector<double> w(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const double v = op == DestroyOp::Related ? table.rel(pool[i], first)
                                                  : static_cast<double>(table.close(pool[i], first));
        w[i] = v * v;
      }
      draw_without_replacement(pool, w, q - 1, rng, remove_request);
      break;
    }
    case DestroyOp::Proximity:
    case DestroyOp::Interchangeability: {
      std::vector<double> w(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const double v = op == DestroyOp::Proximity
                             ? proximity(inst, table, route_of, pool[i])
                             : static_cast<double>(interchangeability(inst, table, route_of, pool[i]));
        w[i] = v * v;
      }
      draw_without_replacement(pool, w, q, rng, remove_request);
      break;
    }
  }
}

namespace {

struct RepairContext {
  const Instance& inst;
  const MeasureTable& table;
  const BalanceSpec& spec;
  Solution& sol;
  ScheduleEvaluator eval;
  // best insertion delta per (pending slot, vehicle); nullopt = infeasible
  std::vector<std::vector<std::optional<Insertion>>> options;
  std::vector<int> pending;  // request indices
  Cost penalty = 0;

  RepairContext(const Instance& i, const MeasureTable& t, const BalanceSpec& s, Solution& so)
      : inst(i), table(t), spec(s), sol(so), eval(i) {}

  bool eligible(int request_idx, int vehicle_idx) const {
    if (!inst.lock_allows(request_idx, vehicle_idx)) return false;
    if (spec.mode == BalanceMode::NC && inst.vehicles[vehicle_idx].owner != inst.requests[request_idx].owner)
      return false;
    return true;
  }

  void compute_options(int slot) {
    auto& row = options[slot];
    row.assign(inst.vehicles.size(), std::nullopt);
    for (std::size_t k = 0; k < inst.vehicles.size(); ++k) {
      if (!eligible(pending[slot], static_cast<int>(k))) continue;
      row[k] = try_insert(inst, eval, static_cast<int>(k), sol.routes[k].visits, pending[slot]);
    }
  }

  // Globally cheapest insertion over vehicles; ties to the lowest vehicle idx.
  std::optional<std::pair<int, Insertion>> best_of(int slot) const {
    std::optional<std::pair<int, Insertion>> best;
    for (std::size_t k = 0; k < options[slot].size(); ++k) {
      const auto& ins = options[slot][k];
      if (!ins) continue;
      if (!best || ins->delta < best->second.delta) best = std::make_pair(static_cast<int>(k), *ins);
    }
    return best;
  }

  // h-th smallest per-vehicle best delta (h is 1-based); the penalty stands in
  // when fewer than h routes admit the request.
  Cost nth_cost(int slot, int h) const {
    std::vector<Cost> deltas;
    for (const auto& ins : options[slot])
      if (ins) deltas.push_back(ins->delta);
    std::sort(deltas.begin(), deltas.end());
    if (h <= static_cast<int>(deltas.size())) return deltas[h - 1];
    return penalty;
  }

  void apply(int slot, int vehicle_idx, const Insertion& ins) {
    auto& visits = sol.routes[vehicle_idx].visits;
    const int ri = pending[slot];
    visits.insert(visits.begin() + ins.pickup_pos, inst.pickup_node(ri));
    visits.insert(visits.begin() + ins.drop_pos, inst.drop_node(ri));
    pending.erase(pending.begin() + slot);
    options.erase(options.begin() + slot);
    for (std::size_t s = 0; s < pending.size(); ++s) {
      options[s][vehicle_idx] =
          eligible(pending[s], vehicle_idx)
              ? try_insert(inst, eval, vehicle_idx, sol.routes[vehicle_idx].visits, pending[s])
              : std::nullopt;
    }
  }
};

}  // namespace

bool repair(RepairOp op, const Instance& inst, const MeasureTable& table, const BalanceSpec& spec, Solution& sol,
            std::vector<int>& removed, Rng& rng) {
  RepairContext ctx(inst, table, spec, sol);
  ctx.pending = removed;
  std::sort(ctx.pending.begin(), ctx.pending.end());
  ctx.penalty = 2 * (solution_cost(inst, sol) + inst.horizon);
  ctx.options.resize(ctx.pending.size());
  for (std::size_t s = 0; s < ctx.pending.size(); ++s) ctx.compute_options(static_cast<int>(s));

  // Running min-closeness to the requests already in the solution.
  std::vector<Seconds> min_close(inst.requests.size(), ctx.table.close_cap());
  bool any_reference = false;
  if (op == RepairOp::Closeness) {
    const auto route_of = route_assignment(inst, sol);
    for (int c = 0; c < static_cast<int>(route_of.size()); ++c) {
      if (route_of[c] < 0) continue;
      any_reference = true;
      for (int a : ctx.pending) min_close[a] = std::min(min_close[a], table.close(a, c));
    }
  }

  while (!ctx.pending.empty()) {
    int slot = 0;
    switch (op) {
      case RepairOp::Best:
        slot = rng.below(static_cast<int>(ctx.pending.size()));
        break;
      case RepairOp::Regret2:
      case RepairOp::Regret3:
      case RepairOp::Regret4: {
        const int k = op == RepairOp::Regret2 ? 2 : op == RepairOp::Regret3 ? 3 : 4;
        std::vector<double> w(ctx.pending.size(), 0.0);
        for (std::size_t s = 0; s < ctx.pending.size(); ++s) {
          const Cost c1 = ctx.nth_cost(static_cast<int>(s), 1);
          Cost regret = 0;
          for (int h = 2; h <= k; ++h) regret += ctx.nth_cost(static_cast<int>(s), h) - c1;
          w[s] = static_cast<double>(regret);
        }
        slot = rng.pick_weighted(w);
        break;
      }
      case RepairOp::Closeness: {
        std::vector<double> w(ctx.pending.size(), 1.0);
        if (any_reference) {
          bool zero_exists = false;
          for (int a : ctx.pending) zero_exists = zero_exists || min_close[a] <= 0;
          for (std::size_t s = 0; s < ctx.pending.size(); ++s) {
            const Seconds mc = min_close[ctx.pending[s]];
            w[s] = zero_exists ? (mc <= 0 ? 1.0 : 0.0) : 1.0 / static_cast<double>(mc);
          }
        }
        slot = rng.pick_weighted(w);
        break;
      }
    }

    const auto choice = ctx.best_of(slot);
    if (!choice) return false;  // selected request cannot be placed
    const int inserted = ctx.pending[slot];
    ctx.apply(slot, choice->first, choice->second);
    if (op == RepairOp::Closeness) {
      any_reference = true;
      for (int a : ctx.pending) min_close[a] = std::min(min_close[a], table.close(a, inserted));
    }
  }

  removed.clear();
  return check_solution(inst, sol, spec).empty();
}

AlnsResult run_alns(const Instance& inst, const BalanceSpec& spec, const AlnsParams& params, const Solution& initial,
                    const MeasureTable* table) {
  const int n = static_cast<int>(inst.requests.size());
  if (!(params.t_max > 1)) {
    // Loop guard T_max > 1 never admits an iteration; hand back the start.
    AlnsResult res{initial, solution_cost(inst, initial), {}};
    res.stats.best_trace.emplace_back(0, res.best_cost);
    return res;
  }
  if (!(params.gamma > 0 && params.gamma < 1)) throw AlnsError("gamma must be in (0,1)");
  if (params.reduce_probability < 0 || params.reduce_probability > 1) throw AlnsError("p must be in [0,1]");
  const int q_min = params.resolved_q_min(n);
  const int q_max = params.resolved_q_max(n);
  if (q_min > q_max || q_min < 1) throw AlnsError("destruction bounds must satisfy 1 <= q_min <= q_max <= |C|");
  if (!check_solution(inst, initial, spec).empty()) throw AlnsError("initial solution is infeasible for the mode");

  MeasureTable local;
  if (!table) {
    local = MeasureTable::build(inst);
    table = &local;
  }

  Rng rng(params.seed);
  Solution current = initial;
  Cost current_cost = solution_cost(inst, current);
  AlnsResult res{current, current_cost, {}};

  std::vector<double> destroy_scores(kDestroyOps, params.score_init);
  std::vector<double> repair_scores(kRepairOps, params.score_init);
  int q = q_min;
  int improvements_since_refresh = 0;  // r
  int stagnant = 0;                    // w

  double temperature = params.t_max;
  std::vector<int> removed;
  Solution candidate;
  res.stats.best_trace.emplace_back(0, res.best_cost);

  while (temperature > 1.0) {
    resize_neighborhood(params.enlarge_threshold, stagnant, q, q_min, q_max, params.reduce_probability, rng);
    const int d = select_operator(destroy_scores, rng);
    const int rp = select_operator(repair_scores, rng);

    candidate = current;
    removed.clear();
    destroy(static_cast<DestroyOp>(d), inst, *table, candidate, removed, q, rng);
    Cost candidate_cost;
    if (repair(static_cast<RepairOp>(rp), inst, *table, spec, candidate, removed, rng)) {
      candidate_cost = solution_cost(inst, candidate);
    } else {
      candidate = current;
      candidate_cost = current_cost;
      ++res.stats.repair_failures;
    }

    if (candidate_cost >= res.best_cost) ++stagnant;
    const double u = rng.uniform01();
    const Cost reference = params.accept_vs_current ? current_cost : res.best_cost;
    const bool accept =
        candidate_cost <= reference ||
        u < std::exp(static_cast<double>(reference - candidate_cost) / temperature);
    if (accept) {
      current = candidate;
      current_cost = candidate_cost;
      ++res.stats.accepted;
      if (candidate_cost < res.best_cost) {
        res.best = candidate;
        res.best_cost = candidate_cost;
        ++res.stats.improvements;
        ++res.stats.destroy_hits[d];
        ++res.stats.repair_hits[rp];
        if (improvements_since_refresh > params.refresh_threshold) {
          improvements_since_refresh = 0;
          std::fill(destroy_scores.begin(), destroy_scores.end(), params.score_init);
          std::fill(repair_scores.begin(), repair_scores.end(), params.score_init);
        } else {
          destroy_scores[d] += params.score_improve;
          repair_scores[rp] += params.score_improve;
        }
        ++improvements_since_refresh;
      }
    }

    temperature *= params.gamma;
    ++res.stats.iterations;
    if (params.trace_every > 0 && res.stats.iterations % params.trace_every == 0)
      res.stats.best_trace.emplace_back(res.stats.iterations, res.best_cost);
  }
  res.stats.best_trace.emplace_back(res.stats.iterations, res.best_cost);
  return res;
}

std::optional<Solution> construct_initial(const Instance& inst, const BalanceSpec& spec, std::uint64_t seed,
                                          const MeasureTable* table) {
  Rng rng(seed);
  ScheduleEvaluator eval(inst);

  auto greedy_own = [&](const std::vector<int>& order) -> std::optional<Solution> {
    Solution sol = empty_solution(inst);
    for (int ri : order) {
      const Request& r = inst.requests[ri];
      std::optional<std::pair<int, Insertion>> best;
      for (std::size_t k = 0; k < inst.vehicles.size(); ++k) {
        if (inst.vehicles[k].owner != r.owner) continue;
        if (!inst.lock_allows(ri, static_cast<int>(k))) continue;
        const auto ins = try_insert(inst, eval, static_cast<int>(k), sol.routes[k].visits, ri);
        if (ins && (!best || ins->delta < best->second.delta)) best = std::make_pair(static_cast<int>(k), *ins);
      }
      if (!best) return std::nullopt;
      auto& visits = sol.routes[best->first].visits;
      visits.insert(visits.begin() + best->second.pickup_pos, inst.pickup_node(ri));
      visits.insert(visits.begin() + best->second.drop_pos, inst.drop_node(ri));
    }
    return sol;
  };

  std::vector<int> order(inst.requests.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ra = inst.requests[a];
    const auto& rb = inst.requests[b];
    if (ra.pickup_window.earliest != rb.pickup_window.earliest)
      return ra.pickup_window.earliest < rb.pickup_window.earliest;
    return ra.id < rb.id;
  });

  std::optional<Solution> routing;
  for (int attempt = 0; attempt < 60 && !routing; ++attempt) {
    routing = greedy_own(order);
    if (!routing) {  // reshuffle and retry
      for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    }
  }
  if (!routing) return std::nullopt;
  if (check_solution(inst, *routing, spec).empty()) return routing;

  // Zero balances already violate the thresholds (memory offsets); probe for
  // a feasible solution with randomized destroy/repair rounds in mode.
  MeasureTable local;
  if (!table) {
    local = MeasureTable::build(inst);
    table = &local;
  }
  const int n = static_cast<int>(inst.requests.size());
  for (int attempt = 0; attempt < 400; ++attempt) {
    Solution probe = *routing;
    std::vector<int> removed;
    const int q = std::max(1, std::min(n, 1 + static_cast<int>(rng.below(n))));
    destroy(static_cast<DestroyOp>(rng.below(kDestroyOps)), inst, *table, probe, removed, q, rng);
    if (repair(static_cast<RepairOp>(rng.below(kRepairOps)), inst, *table, spec, probe, removed, rng)) return probe;
  }
  return std::nullopt;
}

}  // namespace cdarp
