#include "cdarp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace cdarp {

Rat Rat::from_double(double v, std::int64_t scale) {
  Rat r{static_cast<std::int64_t>(std::llround(v * static_cast<double>(scale))), scale};
  return r.normalized();
}

Rat Rat::normalized() const {
  std::int64_t n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return Rat{n, d == 0 ? 1 : d};
}

std::int64_t Rat::floor() const {
  std::int64_t q = num / den;
  if (num % den != 0 && (num < 0) != (den < 0)) --q;
  return q;
}

const char* to_string(BalanceMode m) {
  switch (m) {
    case BalanceMode::NC: return "nc";
    case BalanceMode::UC: return "uc";
    case BalanceMode::T: return "t";
    case BalanceMode::C: return "c";
    case BalanceMode::TC: return "tc";
  }
  return "?";
}

std::optional<BalanceMode> balance_mode_from_string(const std::string& s) {
  std::string l;
  for (char c : s) l.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (l == "nc") return BalanceMode::NC;
  if (l == "uc") return BalanceMode::UC;
  if (l == "t") return BalanceMode::T;
  if (l == "c") return BalanceMode::C;
  if (l == "tc") return BalanceMode::TC;
  return std::nullopt;
}

namespace {

template <typename T>
int index_of(const std::vector<T>& v, int id) {
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (v[i].id == id) return i;
  return -1;
}

}  // namespace

int Instance::company_index(int id) const { return index_of(companies, id); }
int Instance::vehicle_index(int id) const { return index_of(vehicles, id); }
int Instance::request_index(int id) const { return index_of(requests, id); }

Instance build_instance(Seconds horizon, std::uint64_t seed, std::vector<int> company_ids,
                        std::vector<VehicleSpec> vehicle_specs, std::vector<RequestSpec> request_specs,
                        std::vector<Seconds> travel, std::vector<Cost> cost) {
  Instance inst;
  inst.horizon = horizon;
  inst.seed = seed;

  std::sort(company_ids.begin(), company_ids.end());
  std::sort(vehicle_specs.begin(), vehicle_specs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(request_specs.begin(), request_specs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  const int m = static_cast<int>(company_ids.size());
  const int c = static_cast<int>(request_specs.size());
  const int v = 2 * m + 2 * c;
  if (travel.size() != static_cast<std::size_t>(v) * v)
    throw ModelError("travel matrix size " + std::to_string(travel.size()) + " does not match " +
                     std::to_string(v) + "x" + std::to_string(v) + " nodes");
  if (!cost.empty() && cost.size() != travel.size()) throw ModelError("cost matrix size mismatch");

  for (int i = 0; i < m; ++i) {
    if (i > 0 && company_ids[i] == company_ids[i - 1])
      throw ModelError("duplicate company id " + std::to_string(company_ids[i]));
    inst.companies.push_back(Company{company_ids[i], i, m + i});
  }

  auto company_idx = [&](int id) {
    const auto it = std::lower_bound(company_ids.begin(), company_ids.end(), id);
    if (it == company_ids.end() || *it != id) throw ModelError("unknown company id " + std::to_string(id));
    return static_cast<int>(it - company_ids.begin());
  };

  for (const auto& vs : vehicle_specs) {
    const int oi = company_idx(vs.owner);
    inst.vehicles.push_back(Vehicle{vs.id, vs.owner, vs.capacity, vs.max_duration, oi, m + oi});
  }
  for (std::size_t i = 1; i < inst.vehicles.size(); ++i)
    if (inst.vehicles[i].id == inst.vehicles[i - 1].id)
      throw ModelError("duplicate vehicle id " + std::to_string(inst.vehicles[i].id));

  inst.nodes.resize(v);
  for (int i = 0; i < m; ++i) {
    inst.nodes[i] = Node{i, NodeKind::DepotStart, TimeWindow{0, horizon}, 0, 0};
    inst.nodes[m + i] = Node{m + i, NodeKind::DepotEnd, TimeWindow{0, horizon}, 0, 0};
  }

  inst.travel = std::move(travel);
  inst.cost = cost.empty() ? inst.travel : std::move(cost);

  for (int j = 0; j < c; ++j) {
    const auto& rs = request_specs[j];
    if (j > 0 && rs.id == request_specs[j - 1].id) throw ModelError("duplicate request id " + std::to_string(rs.id));
    company_idx(rs.owner);  // existence check
    Request r;
    r.id = rs.id;
    r.owner = rs.owner;
    r.origin = 2 * m + j;
    r.destination = 2 * m + c + j;
    r.passengers = rs.passengers;
    r.service_pickup = rs.service_pickup;
    r.service_drop = rs.service_drop;
    r.pickup_window = rs.pickup_window;
    r.drop_window = rs.drop_window;
    r.max_ride = rs.max_ride;
    r.lock = rs.lock;
    r.direct_time = inst.travel[static_cast<std::size_t>(r.origin) * v + r.destination];
    inst.requests.push_back(r);
    inst.nodes[r.origin] = Node{r.origin, NodeKind::Pickup, rs.pickup_window, rs.service_pickup, rs.passengers};
    inst.nodes[r.destination] = Node{r.destination, NodeKind::Drop, rs.drop_window, rs.service_drop, -rs.passengers};
  }

  return inst;
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string subject, std::string message) {
    out.push_back(Violation{std::move(code), std::move(subject), std::move(message)});
  };

  const int m = static_cast<int>(inst.companies.size());
  const int c = static_cast<int>(inst.requests.size());
  const int v = inst.node_count();

  if (v != 2 * m + 2 * c)
    add("instance.node_count", "instance",
        "node count " + std::to_string(v) + " != 2*" + std::to_string(m) + " + 2*" + std::to_string(c));
  if (inst.travel.size() != static_cast<std::size_t>(v) * v) {
    add("instance.matrix", "instance", "travel matrix is not |V|x|V|");
    return out;  // further checks index the matrix
  }
  if (inst.cost.size() != inst.travel.size()) add("instance.matrix", "instance", "cost matrix is not |V|x|V|");

  for (int i = 0; i < v; ++i) {
    if (inst.t(i, i) != 0) add("matrix.diagonal", "node " + std::to_string(i), "t_ii != 0");
    for (int j = 0; j < v; ++j)
      if (inst.t(i, j) < 0) {
        add("matrix.negative", "node " + std::to_string(i), "negative travel time to node " + std::to_string(j));
        break;
      }
  }

  for (int i = 0; i < v; ++i) {
    const Node& n = inst.nodes[i];
    if (n.id != i) add("node.id", "node " + std::to_string(i), "node id must equal its canonical index");
    if (n.window.earliest > n.window.latest)
      add("node.window", "node " + std::to_string(i), "window start after window end");
    if (n.kind == NodeKind::DepotStart || n.kind == NodeKind::DepotEnd) {
      if (n.flow != 0) add("depot.flow", "node " + std::to_string(i), "depot flow must be 0");
      if (n.window.earliest != 0 || n.window.latest != inst.horizon)
        add("depot.window", "node " + std::to_string(i), "depot window must be [0, horizon]");
    }
  }

  for (int ci = 0; ci < m; ++ci) {
    const Company& co = inst.companies[ci];
    if (co.start_depot != inst.start_depot_node(ci) || co.end_depot != inst.end_depot_node(ci))
      add("company.depots", "company " + std::to_string(co.id), "depot node ids are not canonical");
  }

  for (const Vehicle& veh : inst.vehicles) {
    const std::string subj = "vehicle " + std::to_string(veh.id);
    if (veh.capacity < 1) add("vehicle.capacity", subj, "capacity must be >= 1");
    if (veh.max_duration <= 0) add("vehicle.max_duration", subj, "max duration must be > 0");
    const int oi = inst.company_index(veh.owner);
    if (oi < 0) {
      add("vehicle.owner", subj, "unknown owner company " + std::to_string(veh.owner));
    } else if (veh.start_depot != inst.companies[oi].start_depot || veh.end_depot != inst.companies[oi].end_depot) {
      add("vehicle.depots", subj, "depots do not belong to owner company");
    }
  }

  for (int ri = 0; ri < c; ++ri) {
    const Request& r = inst.requests[ri];
    const std::string subj = "request " + std::to_string(r.id);
    if (r.passengers < 1) add("request.passengers", subj, "p_c must be >= 1");
    if (r.max_ride < r.direct_time)
      add("request.max_ride", subj,
          "T_c " + std::to_string(r.max_ride) + " < direct time " + std::to_string(r.direct_time));
    if (r.pickup_window.earliest > r.pickup_window.latest) add("request.pickup_window", subj, "pickup window empty");
    if (r.drop_window.earliest > r.drop_window.latest) add("request.drop_window", subj, "drop window empty");
    if (inst.company_index(r.owner) < 0) add("request.owner", subj, "unknown owner company");
    if (r.origin != inst.pickup_node(ri) || r.destination != inst.drop_node(ri))
      add("request.nodes", subj, "origin/destination node ids are not canonical");
    else {
      if (r.direct_time != inst.t(r.origin, r.destination))
        add("request.direct_time", subj, "t_c does not equal the travel matrix entry");
      const Node& o = inst.nodes[r.origin];
      const Node& d = inst.nodes[r.destination];
      if (o.flow != r.passengers)
        add("node.flow", "node " + std::to_string(r.origin), "pickup flow must equal +p_c");
      if (d.flow != -r.passengers)
        add("node.flow", "node " + std::to_string(r.destination), "drop flow must equal -p_c");
      if (o.kind != NodeKind::Pickup) add("node.kind", "node " + std::to_string(r.origin), "expected pickup node");
      if (d.kind != NodeKind::Drop) add("node.kind", "node " + std::to_string(r.destination), "expected drop node");
    }
    if (r.lock.kind == LockKind::Denylist) {
      bool someone = false;
      for (const Company& co : inst.companies)
        if (r.lock.allows_company(r.owner, co.id)) someone = true;
      for (int d : r.lock.denied)
        if (inst.company_index(d) < 0) add("request.lock", subj, "denylist names unknown company " + std::to_string(d));
      if (!someone) add("request.lock", subj, "denylist leaves no company able to serve the request");
    }
  }

  std::int64_t flow_sum = 0;
  for (const Node& n : inst.nodes) flow_sum += n.flow;
  if (flow_sum != 0) add("instance.flow_sum", "instance", "sum of node flows is not 0");

  return out;
}

std::vector<CompanyThreshold> compute_thresholds(const Instance& inst, const BalanceSpec& spec) {
  if (spec.alpha_t.num < 0 || spec.alpha_c.num < 0) throw ModelError("alpha must be non-negative");

  std::vector<CompanyThreshold> out;
  for (const Company& co : inst.companies) {
    Seconds total_t = 0;
    std::int64_t total_p = 0;
    for (const Request& r : inst.requests) {
      if (r.owner != co.id) continue;
      total_t += r.direct_time;
      total_p += r.passengers;
    }
    CompanyThreshold th;
    th.company = co.id;
    th.s_tilde = Rat{spec.alpha_t.num * total_t, spec.alpha_t.den}.normalized();
    const Rat u_exact{spec.alpha_c.num * total_p, spec.alpha_c.den};
    if (spec.u_rounding == URounding::Floor) {
      th.u_tilde = u_exact.floor();
    } else {
      // round half up: floor(x + 1/2)
      th.u_tilde = Rat{2 * u_exact.num + u_exact.den, 2 * u_exact.den}.floor();
    }
    for (const auto& e : spec.explicit_thresholds)
      if (e.company == co.id) {
        th.s_tilde = e.s_tilde;
        th.u_tilde = e.u_tilde;
      }
    if (th.s_tilde.num < 0 || th.u_tilde < 0) throw ModelError("thresholds must be non-negative");
    out.push_back(th);
  }
  return out;
}

}  // namespace cdarp
