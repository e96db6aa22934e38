#include "cdarp/schedule.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <limits>
#include <unordered_map>

namespace cdarp {

namespace {

constexpr Seconds kInf = std::numeric_limits<Seconds>::max() / 4;

std::string format_rat(const Rat& r) {
  const Rat n = r.normalized();
  if (n.den == 1) return std::to_string(n.num);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", n.value());
  return buf;
}

}  // namespace

std::string Infeasibility::describe() const {
  std::string what;
  switch (which) {
    case ConstraintClass::Window: what = "window"; break;
    case ConstraintClass::RideTime: what = "ride-time"; break;
    case ConstraintClass::Capacity: what = "capacity"; break;
    case ConstraintClass::Duration: what = "duration"; break;
    case ConstraintClass::Structure: what = "structure"; break;
  }
  if (node >= 0) what += " at node " + std::to_string(node);
  if (request >= 0) what += " for request " + std::to_string(request);
  return what;
}

bool ScheduleEvaluator::evaluate(int vehicle_idx, std::span<const int> visits, RouteSchedule* out,
                                 Infeasibility* why) {
  const Vehicle& veh = inst_.vehicles[vehicle_idx];
  const int n = static_cast<int>(visits.size());
  const int last = n + 1;  // end depot position

  auto fail = [&](ConstraintClass cls, int node, int request) {
    if (why) *why = Infeasibility{cls, node, request};
    return false;
  };

  // Structure and capacity are schedule-independent. pickup_pos_[p] holds,
  // for every drop position p, the position of the matching pickup.
  pickup_pos_.assign(n + 2, -1);
  {
    for (int p = 1; p <= n; ++p) {
      const int v = visits[p - 1];
      if (inst_.request_of_node(v) < 0) return fail(ConstraintClass::Structure, v, -1);
      for (int q = 1; q < p; ++q)
        if (visits[q - 1] == v) return fail(ConstraintClass::Structure, v, inst_.requests[inst_.request_of_node(v)].id);
    }
    int load = 0;
    for (int p = 1; p <= n; ++p) {
      const int v = visits[p - 1];
      const int ri = inst_.request_of_node(v);
      if (inst_.is_pickup_node(v)) {
        load += inst_.requests[ri].passengers;
        if (load > veh.capacity) return fail(ConstraintClass::Capacity, v, inst_.requests[ri].id);
        bool dropped = false;
        for (int q = p + 1; q <= n; ++q)
          if (visits[q - 1] == inst_.drop_node(ri)) dropped = true;
        if (!dropped) return fail(ConstraintClass::Structure, v, inst_.requests[ri].id);
      } else {
        load -= inst_.requests[ri].passengers;
        const int o = inst_.pickup_node(ri);
        for (int q = 1; q < p; ++q)
          if (visits[q - 1] == o) pickup_pos_[p] = q;
        if (pickup_pos_[p] < 0) return fail(ConstraintClass::Structure, v, inst_.requests[ri].id);
      }
    }
  }

  arrive_.assign(n + 2, 0);
  begin_.assign(n + 2, 0);
  depart_.assign(n + 2, 0);
  wait_.assign(n + 2, 0);

  auto node_at = [&](int p) -> int {
    if (p == 0) return veh.start_depot;
    if (p == last) return veh.end_depot;
    return visits[p - 1];
  };

  // Forward pass from position `from`, assuming begin_[from] is set.
  // Enforces window latest; service starts never before the earliest window
  // edge nor before pickup departure + direct time (minimum ride) at drops.
  auto recompute_from = [&](int from, int* bad_pos) -> bool {
    const int vfrom = node_at(from);
    wait_[from] = begin_[from] - arrive_[from];
    depart_[from] = begin_[from] + (from == 0 || from == last ? 0 : inst_.nodes[vfrom].service);
    for (int p = from + 1; p <= last; ++p) {
      const int v = node_at(p);
      arrive_[p] = depart_[p - 1] + inst_.t(node_at(p - 1), v);
      Seconds b = std::max(arrive_[p], inst_.nodes[v].window.earliest);
      if (p != last && !inst_.is_pickup_node(v)) {
        const int ri = inst_.request_of_node(v);
        b = std::max(b, depart_[pickup_pos_[p]] + inst_.requests[ri].direct_time);
      }
      if (b > inst_.nodes[v].window.latest) {
        if (bad_pos) *bad_pos = p;
        return false;
      }
      begin_[p] = b;
      wait_[p] = b - arrive_[p];
      depart_[p] = b + (p == last ? 0 : inst_.nodes[v].service);
    }
    return true;
  };

  arrive_[0] = 0;
  begin_[0] = 0;
  int bad = -1;
  if (!recompute_from(0, &bad)) {
    const int v = node_at(bad);
    return fail(ConstraintClass::Window, v, inst_.request_of_node(v) >= 0 ? inst_.requests[inst_.request_of_node(v)].id : -1);
  }

  auto ride_of = [&](int drop_pos) {
    return begin_[drop_pos] - depart_[pickup_pos_[drop_pos]];
  };

  // Forward time slack at `pos`: the largest delay of begin_[pos] that keeps
  // downstream windows and the ride times of already-onboard requests intact.
  auto forward_slack = [&](int pos) -> Seconds {
    Seconds slack = kInf;
    Seconds cum_wait = 0;
    for (int j = pos + 1; j <= last; ++j) {
      const int v = node_at(j);
      cum_wait += wait_[j];  // waiting at j itself absorbs the delay before service
      Seconds allowance = inst_.nodes[v].window.latest - begin_[j];
      if (j != last && !inst_.is_pickup_node(v) && pickup_pos_[j] < pos) {
        const int ri = inst_.request_of_node(v);
        allowance = std::min(allowance, inst_.requests[ri].max_ride - ride_of(j));
      }
      slack = std::min(slack, cum_wait + std::max<Seconds>(0, allowance));
      if (slack == 0) break;
    }
    return slack;
  };

  // Apply the largest safe delay <= want at pos. The slack formula can be
  // optimistic on matrices without the triangle inequality (minimum-ride
  // waiting is not absorbable), so fall back to a search if the plain delay
  // breaks a window.
  auto delayed_recompute = [&](int pos, Seconds want) {
    if (want <= 0) return;
    const Seconds base = begin_[pos];
    begin_[pos] = base + want;
    if (recompute_from(pos, nullptr)) return;
    Seconds lo = 0, hi = want - 1;
    while (lo < hi) {
      const Seconds mid = lo + (hi - lo + 1) / 2;
      begin_[pos] = base + mid;
      if (recompute_from(pos, nullptr))
        lo = mid;
      else
        hi = mid - 1;
    }
    begin_[pos] = base + lo;
    recompute_from(pos, nullptr);
  };

  // Delay the depot departure to absorb waiting (reduces duration and all
  // ride times downstream of the waiting).
  {
    Seconds total_wait = 0;
    for (int p = 1; p <= last; ++p) total_wait += wait_[p];
    delayed_recompute(0, std::min(forward_slack(0), total_wait));
  }

  // Delay the pickups of ride-time violating requests within their forward
  // slack; the waiting between pickup and drop is what actually shrinks the
  // ride, so over-delaying gains nothing and only inflates the duration.
  for (int p = 1; p <= n; ++p) {
    if (pickup_pos_[p] < 0) continue;  // not a drop
    const int ri = inst_.request_of_node(node_at(p));
    const Seconds excess = ride_of(p) - inst_.requests[ri].max_ride;
    if (excess <= 0) continue;
    const int op = pickup_pos_[p];
    delayed_recompute(op, std::min(forward_slack(op), excess));
  }

  // Final verdict.
  for (int p = 1; p <= n; ++p) {
    if (pickup_pos_[p] < 0) continue;
    const int ri = inst_.request_of_node(node_at(p));
    if (ride_of(p) > inst_.requests[ri].max_ride)
      return fail(ConstraintClass::RideTime, node_at(p), inst_.requests[ri].id);
  }
  if (begin_[last] - begin_[0] > veh.max_duration) return fail(ConstraintClass::Duration, veh.end_depot, -1);

  if (out) {
    out->service_start.assign(begin_.begin() + 1, begin_.begin() + 1 + n);
    out->load_after.assign(n, 0);
    int load = 0;
    for (int p = 1; p <= n; ++p) {
      load += inst_.nodes[node_at(p)].flow;
      out->load_after[p - 1] = load;
    }
    out->depot_departure = begin_[0];
    out->depot_arrival = begin_[last];
    out->duration = begin_[last] - begin_[0];
    out->ride_times.clear();
    for (int p = 1; p <= n; ++p)
      if (pickup_pos_[p] >= 0)
        out->ride_times.emplace_back(inst_.requests[inst_.request_of_node(node_at(p))].id, ride_of(p));
    std::sort(out->ride_times.begin(), out->ride_times.end());
  }
  return true;
}

ScheduleResult earliest_schedule(const Instance& inst, const Route& route) {
  ScheduleResult res;
  const int ki = inst.vehicle_index(route.vehicle);
  if (ki < 0) {
    res.reason = Infeasibility{ConstraintClass::Structure, -1, -1};
    return res;
  }
  ScheduleEvaluator eval(inst);
  res.feasible = eval.evaluate(ki, route.visits, &res.schedule, &res.reason);
  return res;
}

Solution empty_solution(const Instance& inst) {
  Solution sol;
  for (const Vehicle& v : inst.vehicles) sol.routes.push_back(Route{v.id, {}});
  return sol;
}

Cost route_cost(const Instance& inst, int vehicle_idx, std::span<const int> visits) {
  const Vehicle& veh = inst.vehicles[vehicle_idx];
  int prev = veh.start_depot;
  Cost total = 0;
  for (int v : visits) {
    total += inst.c(prev, v);
    prev = v;
  }
  total += inst.c(prev, veh.end_depot);
  return total;
}

Cost solution_cost(const Instance& inst, const Solution& sol) {
  Cost total = 0;
  for (std::size_t k = 0; k < sol.routes.size(); ++k) total += route_cost(inst, static_cast<int>(k), sol.routes[k].visits);
  return total;
}

std::vector<CompanyBalance> balances(const Instance& inst, const Solution& sol) {
  std::vector<CompanyBalance> out;
  out.reserve(inst.companies.size());
  for (const Company& co : inst.companies) out.push_back(CompanyBalance{co.id, 0, 0});
  auto slot = [&](int company_id) -> CompanyBalance& { return out[inst.company_index(company_id)]; };

  for (std::size_t k = 0; k < sol.routes.size(); ++k) {
    const int server = inst.vehicles[k].owner;
    for (int v : sol.routes[k].visits) {
      if (!inst.is_pickup_node(v)) continue;
      const Request& r = inst.requests[inst.request_of_node(v)];
      if (r.owner == server) continue;
      slot(server).s += r.direct_time;
      slot(server).u += r.passengers;
      slot(r.owner).s -= r.direct_time;
      slot(r.owner).u -= r.passengers;
    }
  }
  return out;
}

std::vector<Violation> check_solution(const Instance& inst, const Solution& sol, const BalanceSpec& spec) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string subject, std::string message) {
    out.push_back(Violation{std::move(code), std::move(subject), std::move(message)});
  };

  if (sol.routes.size() != inst.vehicles.size()) {
    add("solution.routes", "solution", "expected one route per vehicle");
    return out;
  }
  for (std::size_t k = 0; k < sol.routes.size(); ++k)
    if (sol.routes[k].vehicle != inst.vehicles[k].id) {
      add("solution.routes", "solution", "routes are not aligned with the vehicle list");
      return out;
    }

  // Coverage: each request exactly once, pickup and drop on the same route.
  std::vector<int> served_by(inst.requests.size(), -1);
  std::vector<int> times_served(inst.requests.size(), 0);
  for (std::size_t k = 0; k < sol.routes.size(); ++k) {
    for (int v : sol.routes[k].visits) {
      const int ri = inst.request_of_node(v);
      if (ri < 0) {
        add("route.structure", "vehicle " + std::to_string(sol.routes[k].vehicle),
            "visit list contains non-request node " + std::to_string(v));
        continue;
      }
      if (inst.is_pickup_node(v)) {
        ++times_served[ri];
        served_by[ri] = static_cast<int>(k);
      }
    }
  }
  for (std::size_t ri = 0; ri < inst.requests.size(); ++ri) {
    if (times_served[ri] == 0)
      add("request.uncovered", "request " + std::to_string(inst.requests[ri].id), "request is not served");
    else if (times_served[ri] > 1)
      add("request.duplicated", "request " + std::to_string(inst.requests[ri].id), "request is served more than once");
  }

  ScheduleEvaluator eval(inst);
  for (std::size_t k = 0; k < sol.routes.size(); ++k) {
    Infeasibility why;
    if (!eval.evaluate(static_cast<int>(k), sol.routes[k].visits, nullptr, &why))
      add("route.infeasible", "vehicle " + std::to_string(sol.routes[k].vehicle), why.describe());
  }

  for (std::size_t ri = 0; ri < inst.requests.size(); ++ri) {
    if (times_served[ri] != 1) continue;
    const Request& r = inst.requests[ri];
    const int server = inst.vehicles[served_by[ri]].owner;
    if (!r.lock.allows_company(r.owner, server))
      add("request.lock", "request " + std::to_string(r.id),
          "lock forbids service by company " + std::to_string(server));
    if (spec.mode == BalanceMode::NC && server != r.owner)
      add("mode.nc", "request " + std::to_string(r.id), "cross-company assignment in NC mode");
  }

  if (spec.checks_time() || spec.checks_customers()) {
    const auto bal = balances(inst, sol);
    const auto thresholds = compute_thresholds(inst, spec);
    for (std::size_t i = 0; i < bal.size(); ++i) {
      const auto off = spec.offset_for(bal[i].company);
      if (spec.checks_time()) {
        const Seconds total = bal[i].s + off.s_prime;
        if (!abs_within(total, thresholds[i].s_tilde))
          add("balance.time", "company " + std::to_string(bal[i].company),
              "time balance company " + std::to_string(bal[i].company) + ": " +
                  std::to_string(total < 0 ? -total : total) + " > " + format_rat(thresholds[i].s_tilde));
      }
      if (spec.checks_customers()) {
        const std::int64_t total = bal[i].u + off.u_prime;
        const std::int64_t a = total < 0 ? -total : total;
        if (a > thresholds[i].u_tilde)
          add("balance.customers", "company " + std::to_string(bal[i].company),
              "customer balance company " + std::to_string(bal[i].company) + ": " + std::to_string(a) + " > " +
                  std::to_string(thresholds[i].u_tilde));
      }
    }
  }

  return out;
}

std::optional<Insertion> try_insert(const Instance& inst, ScheduleEvaluator& eval, int vehicle_idx,
                                    std::span<const int> visits, int request_idx) {
  const Vehicle& veh = inst.vehicles[vehicle_idx];
  const int o = inst.pickup_node(request_idx);
  const int d = inst.drop_node(request_idx);
  const int n = static_cast<int>(visits.size());

  thread_local std::vector<int> candidate;
  std::optional<Insertion> best;

  auto at = [&](int pos) -> int {  // node at old position, depots at the rims
    if (pos < 0) return veh.start_depot;
    if (pos >= n) return veh.end_depot;
    return visits[pos];
  };

  for (int i = 0; i <= n; ++i) {
    const int before_o = at(i - 1);
    for (int j = i + 1; j <= n + 1; ++j) {
      Cost delta;
      if (j == i + 1) {
        const int after = at(i);
        delta = inst.c(before_o, o) + inst.c(o, d) + inst.c(d, after) - inst.c(before_o, after);
      } else {
        const int after_o = at(i);
        const int before_d = at(j - 2);
        const int after_d = at(j - 1);
        delta = inst.c(before_o, o) + inst.c(o, after_o) - inst.c(before_o, after_o) + inst.c(before_d, d) +
                inst.c(d, after_d) - inst.c(before_d, after_d);
      }
      if (best && delta >= best->delta) continue;

      candidate.clear();
      candidate.reserve(n + 2);
      for (int p = 0; p < i; ++p) candidate.push_back(visits[p]);
      candidate.push_back(o);
      for (int p = i; p < j - 1; ++p) candidate.push_back(visits[p]);
      candidate.push_back(d);
      for (int p = j - 1; p < n; ++p) candidate.push_back(visits[p]);

      if (eval.feasible(vehicle_idx, candidate)) best = Insertion{i, j, delta};
    }
  }
  return best;
}

std::optional<Insertion> try_insert(const Instance& inst, const Route& route, int request_id) {
  const int ki = inst.vehicle_index(route.vehicle);
  const int ri = inst.request_index(request_id);
  if (ki < 0 || ri < 0) return std::nullopt;
  ScheduleEvaluator eval(inst);
  return try_insert(inst, eval, ki, route.visits, ri);
}

std::optional<Seconds> min_sequence_time(const Instance& inst, std::span<const int> visits) {
  const int k = static_cast<int>(visits.size());
  if (k == 0) return Seconds{0};
  const int anchor = k;
  const int nv = k + 1;
  std::array<std::array<Seconds, 9>, 9> dist{};
  assert(nv <= 9);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) dist[i][j] = i == j ? 0 : kInf;
  auto edge = [&](int from, int to, Seconds w) { dist[from][to] = std::min(dist[from][to], w); };

  for (int p = 0; p + 1 < k; ++p) {
    const Seconds lb = inst.nodes[visits[p]].service + inst.t(visits[p], visits[p + 1]);
    edge(p + 1, p, -lb);  // x_{p+1} - x_p >= lb
  }
  for (int p = 0; p < k; ++p) {
    const Node& nd = inst.nodes[visits[p]];
    const Seconds latest = std::min(nd.window.latest, inst.horizon);
    edge(anchor, p, latest);                  // x_p <= l
    edge(p, anchor, -nd.window.earliest);     // x_p >= e
  }
  // ride-time caps for request pairs fully contained in the sequence
  for (int a = 0; a < k; ++a) {
    if (!inst.is_pickup_node(visits[a])) continue;
    const int ri = inst.request_of_node(visits[a]);
    for (int b = a + 1; b < k; ++b) {
      if (visits[b] != inst.drop_node(ri)) continue;
      edge(a, b, inst.requests[ri].max_ride + inst.requests[ri].service_pickup);
    }
  }

  for (int m = 0; m < nv; ++m)
    for (int i = 0; i < nv; ++i) {
      if (dist[i][m] == kInf) continue;
      for (int j = 0; j < nv; ++j) {
        if (dist[m][j] == kInf) continue;
        dist[i][j] = std::min(dist[i][j], dist[i][m] + dist[m][j]);
      }
    }
  for (int i = 0; i < nv; ++i)
    if (dist[i][i] < 0) return std::nullopt;  // negative cycle: infeasible

  // min(x_last - x_first) = -max(x_first - x_last) = -dist(last -> first)
  const Seconds d = dist[k - 1][0];
  if (d == kInf) return std::nullopt;  // unbounded would mean missing windows
  return -d - inst.nodes[visits[0]].service;
}

}  // namespace cdarp
