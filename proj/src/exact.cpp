#include "cdarp/exact.hpp"

#include <algorithm>
#include <chrono>

namespace cdarp {

namespace {

using Clock = std::chrono::steady_clock;

struct DfsState {
  const Instance& inst;
  const Vehicle& veh;
  int vehicle_idx;
  ScheduleEvaluator& eval;
  std::vector<Cost>& best_cost;
  std::vector<std::vector<int>>& best_visits;
  Clock::time_point deadline;
  std::uint64_t nodes = 0;
  bool timed_out = false;

  std::vector<int> seq;              // visit node ids
  std::vector<Seconds> ride_floor;   // per request: path time since pickup departure
  std::uint32_t done = 0, onboard = 0;
  int load = 0;
  Seconds depart = 0;   // earliest departure at the last node
  Seconds legsum = 0;   // sum of (travel + service) along the path so far
  Cost arc_cost = 0;

  void record() {
    const Cost total = arc_cost + inst.c(seq.empty() ? veh.start_depot : seq.back(), veh.end_depot);
    const std::uint32_t mask = done;
    if (best_cost[mask] != -1 && best_cost[mask] <= total) return;
    if (eval.feasible(vehicle_idx, seq)) {
      best_cost[mask] = total;
      best_visits[mask] = seq;
    }
  }

  void run() {
    ride_floor.assign(inst.requests.size(), 0);
    record();  // empty tour
    expand();
  }

  void expand() {
    if (timed_out) return;
    if ((++nodes & 0x3FFF) == 0 && Clock::now() > deadline) {
      timed_out = true;
      return;
    }
    const int last = seq.empty() ? veh.start_depot : seq.back();
    for (int ri = 0; ri < static_cast<int>(inst.requests.size()); ++ri) {
      const std::uint32_t bit = 1u << ri;
      const Request& r = inst.requests[ri];
      if (onboard & bit) {
        // drop
        const int d = r.destination;
        const Seconds leg = inst.t(last, d);
        const Seconds arrive = depart + leg;
        const Seconds begin = std::max(arrive, inst.nodes[d].window.earliest);
        if (begin > inst.nodes[d].window.latest) continue;
        if (ride_floor[ri] + leg > r.max_ride) continue;  // no delay can shorten the path
        if (legsum + leg > veh.max_duration) continue;

        const auto saved_depart = depart;
        const auto saved_legsum = legsum;
        const auto saved_cost = arc_cost;
        const Seconds delta = leg + r.service_drop;
        const std::uint32_t members = onboard & ~bit;  // still riding through this stop
        seq.push_back(d);
        onboard &= ~bit;
        done |= bit;
        load -= r.passengers;
        depart = begin + r.service_drop;
        legsum += delta;
        arc_cost += inst.c(last, d);
        for (int ob = 0; ob < static_cast<int>(inst.requests.size()); ++ob)
          if (members & (1u << ob)) ride_floor[ob] += delta;

        if (onboard == 0) record();
        expand();

        seq.pop_back();
        onboard |= bit;
        done &= ~bit;
        load += r.passengers;
        depart = saved_depart;
        legsum = saved_legsum;
        arc_cost = saved_cost;
        for (int ob = 0; ob < static_cast<int>(inst.requests.size()); ++ob)
          if (members & (1u << ob)) ride_floor[ob] -= delta;
        if (timed_out) return;
      } else if (!(done & bit)) {
        // pickup
        if (!inst.lock_allows(ri, vehicle_idx)) continue;
        if (load + r.passengers > veh.capacity) continue;
        const int o = r.origin;
        const Seconds leg = inst.t(last, o);
        const Seconds arrive = depart + leg;
        const Seconds begin = std::max(arrive, inst.nodes[o].window.earliest);
        if (begin > inst.nodes[o].window.latest) continue;
        if (legsum + leg > veh.max_duration) continue;

        const auto saved_depart = depart;
        const auto saved_legsum = legsum;
        const auto saved_cost = arc_cost;
        const Seconds delta = leg + r.service_pickup;
        const std::uint32_t members = onboard;  // riders present before this pickup
        seq.push_back(o);
        onboard |= bit;
        load += r.passengers;
        depart = begin + r.service_pickup;
        legsum += delta;
        arc_cost += inst.c(last, o);
        for (int ob = 0; ob < static_cast<int>(inst.requests.size()); ++ob)
          if (members & (1u << ob)) ride_floor[ob] += delta;
        ride_floor[ri] = 0;

        expand();

        seq.pop_back();
        onboard &= ~bit;
        load -= r.passengers;
        depart = saved_depart;
        legsum = saved_legsum;
        arc_cost = saved_cost;
        for (int ob = 0; ob < static_cast<int>(inst.requests.size()); ++ob)
          if (members & (1u << ob)) ride_floor[ob] -= delta;
        if (timed_out) return;
      }
    }
  }
};

}  // namespace

ExactSolver::ExactSolver(const Instance& inst, EnumerationBudget budget) : inst_(inst), budget_(budget) {}

bool ExactSolver::ensure_cache() {
  if (cache_ready_) return !cache_failed_;
  cache_ready_ = true;

  const int n = static_cast<int>(inst_.requests.size());
  const int k = static_cast<int>(inst_.vehicles.size());
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(budget_.time_limit_s));
  ScheduleEvaluator eval(inst_);

  best_cost_.assign(k, std::vector<Cost>(1u << n, kNoRoute));
  best_visits_.assign(k, std::vector<std::vector<int>>(1u << n));
  for (int v = 0; v < k; ++v) {
    DfsState dfs{inst_, inst_.vehicles[v], v, eval, best_cost_[v], best_visits_[v], deadline};
    dfs.run();
    if (dfs.timed_out) {
      cache_failed_ = true;
      return false;
    }
  }
  return true;
}

ExactResult ExactSolver::solve(const BalanceSpec& spec) {
  ExactResult res;
  const int n = static_cast<int>(inst_.requests.size());
  const int k = static_cast<int>(inst_.vehicles.size());
  if (n > budget_.max_requests || n > 20 || k > budget_.max_vehicles || inst_.node_count() > budget_.max_nodes) {
    res.status = ExactStatus::BudgetExceeded;
    return res;
  }
  if (!ensure_cache()) {
    res.status = ExactStatus::BudgetExceeded;
    return res;
  }

  const auto thresholds = compute_thresholds(inst_, spec);

  // Eligible vehicles per request under locks and mode.
  std::vector<std::vector<int>> eligible(n);
  for (int ri = 0; ri < n; ++ri) {
    for (int v = 0; v < k; ++v) {
      if (!inst_.lock_allows(ri, v)) continue;
      if (spec.mode == BalanceMode::NC && inst_.vehicles[v].owner != inst_.requests[ri].owner) continue;
      eligible[ri].push_back(v);
    }
    if (eligible[ri].empty()) {
      res.status = ExactStatus::Infeasible;
      return res;
    }
  }

  std::vector<std::uint32_t> masks(k, 0);
  std::vector<int> assign(n, -1);
  Cost best_total = -1;
  std::vector<std::uint32_t> best_masks;

  auto balance_ok = [&]() {
    if (spec.mode != BalanceMode::T && spec.mode != BalanceMode::C && spec.mode != BalanceMode::TC) return true;
    for (std::size_t m = 0; m < inst_.companies.size(); ++m) {
      const int company = inst_.companies[m].id;
      Seconds s = 0;
      std::int64_t u = 0;
      for (int ri = 0; ri < n; ++ri) {
        const int server = inst_.vehicles[assign[ri]].owner;
        const Request& r = inst_.requests[ri];
        if (server == r.owner) continue;
        if (server == company) {
          s += r.direct_time;
          u += r.passengers;
        } else if (r.owner == company) {
          s -= r.direct_time;
          u -= r.passengers;
        }
      }
      const auto off = spec.offset_for(company);
      if (spec.checks_time() && !abs_within(s + off.s_prime, thresholds[m].s_tilde)) return false;
      if (spec.checks_customers()) {
        const std::int64_t total = u + off.u_prime;
        if ((total < 0 ? -total : total) > thresholds[m].u_tilde) return false;
      }
    }
    return true;
  };

  // Depth-first over assignments in canonical order; strict improvement keeps
  // the first (lexicographically smallest) optimum for deterministic goldens.
  auto enumerate = [&](auto&& self, int ri) -> void {
    if (ri == n) {
      Cost total = 0;
      for (int v = 0; v < k; ++v) {
        const Cost c = best_cost_[v][masks[v]];
        if (c == kNoRoute) return;
        total += c;
      }
      if (best_total != -1 && total >= best_total) return;
      if (!balance_ok()) return;
      best_total = total;
      best_masks = masks;
      return;
    }
    for (int v : eligible[ri]) {
      masks[v] |= 1u << ri;
      assign[ri] = v;
      self(self, ri + 1);
      masks[v] &= ~(1u << ri);
      assign[ri] = -1;
    }
  };
  enumerate(enumerate, 0);

  if (best_total == -1) {
    res.status = ExactStatus::Infeasible;
    return res;
  }
  res.status = ExactStatus::Optimal;
  res.cost = best_total;
  res.solution = empty_solution(inst_);
  for (int v = 0; v < k; ++v) res.solution.routes[v].visits = best_visits_[v][best_masks[v]];
  return res;
}

ExactResult solve_exact(const Instance& inst, const BalanceSpec& spec, const EnumerationBudget& budget) {
  ExactSolver solver(inst, budget);
  return solver.solve(spec);
}

}  // namespace cdarp
