#include "cdarp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace cdarp {

namespace {

// Exact decimal rendering for rationals whose denominator divides a power of
// ten (the only kind produced by alpha parsing and integer thresholds).
std::string decimal(const Rat& r0) {
  const Rat r = r0.normalized();
  std::int64_t scale = 1;
  int digits = 0;
  while (scale % r.den != 0 && digits < 12) {
    scale *= 10;
    ++digits;
  }
  if (scale % r.den != 0) {  // fall back, should not happen for our alphas
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", r.value());
    return buf;
  }
  const std::int64_t scaled = r.num * (scale / r.den);
  const bool neg = scaled < 0;
  std::int64_t mag = neg ? -scaled : scaled;
  std::string frac;
  if (digits > 0) {
    std::string tail = std::to_string(mag % scale);
    tail.insert(tail.begin(), static_cast<std::size_t>(digits) - tail.size(), '0');
    while (!tail.empty() && tail.back() == '0') tail.pop_back();
    if (!tail.empty()) frac = "." + tail;
    mag /= scale;
  }
  return (neg ? "-" : "") + std::to_string(mag) + frac;
}

struct Names {
  static std::string y(int c, int k) { return "y_" + std::to_string(c) + "_" + std::to_string(k); }
  static std::string x(int i, int j, int k) {
    return "x_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
  }
  static std::string w(int i, int k) { return "w_" + std::to_string(i) + "_" + std::to_string(k); }
  static std::string u(int i, int k) { return "u_" + std::to_string(i) + "_" + std::to_string(k); }
  static std::string r(int c, int k) { return "r_" + std::to_string(c) + "_" + std::to_string(k); }
  static std::string S(int m) { return "S_" + std::to_string(m); }
  static std::string U(int m) { return "U_" + std::to_string(m); }
};

}  // namespace

std::string export_lp(const Instance& inst, const BalanceSpec& spec, const LpExportOptions& opts) {
  const int V = inst.node_count();
  const int K = static_cast<int>(inst.vehicles.size());
  const int C = static_cast<int>(inst.requests.size());
  const int M = static_cast<int>(inst.companies.size());

  long var_count = static_cast<long>(C) * K + static_cast<long>(V) * V * K + 2L * V * K + static_cast<long>(C) * K;
  if (spec.checks_time()) var_count += M;
  if (spec.checks_customers()) var_count += M;
  if (var_count > opts.max_variables)
    throw LpError("model would have " + std::to_string(var_count) + " variables, cap is " +
                  std::to_string(opts.max_variables));

  const auto thresholds = compute_thresholds(inst, spec);

  std::ostringstream os;
  os << "\\ collaborative dial-a-ride model, mode " << to_string(spec.mode) << "\n";
  os << "Minimize\n obj:";
  {
    int terms = 0;
    for (int k = 0; k < K; ++k)
      for (int i = 0; i < V; ++i)
        for (int j = 0; j < V; ++j) {
          if (i == j || inst.c(i, j) == 0) continue;
          os << (terms++ % 8 == 0 ? "\n  " : " ") << "+ " << inst.c(i, j) << " " << Names::x(i, j, k);
        }
    if (terms == 0) os << " 0 " << Names::x(0, 0, inst.vehicles.empty() ? 0 : inst.vehicles[0].id);
  }
  os << "\nSubject To\n";

  // one departure from h'_m and one arrival at h''_m per own vehicle
  for (int k = 0; k < K; ++k) {
    const Vehicle& veh = inst.vehicles[k];
    os << " depart_" << veh.id << ":";
    for (int j = 0; j < V; ++j) os << " + " << Names::x(veh.start_depot, j, veh.id);
    os << " = 1\n";
    os << " arrive_" << veh.id << ":";
    for (int i = 0; i < V; ++i) os << " + " << Names::x(i, veh.end_depot, veh.id);
    os << " = 1\n";
  }

  // flow conservation at every pickup and drop node
  for (int k = 0; k < K; ++k)
    for (int l = 2 * M; l < V; ++l) {
      os << " flow_" << l << "_" << inst.vehicles[k].id << ":";
      for (int i = 0; i < V; ++i) os << " + " << Names::x(i, l, inst.vehicles[k].id);
      for (int j = 0; j < V; ++j) os << " - " << Names::x(l, j, inst.vehicles[k].id);
      os << " = 0\n";
    }

  // each request is serviced by exactly one vehicle
  for (const Request& r : inst.requests) {
    os << " assign_" << r.id << ":";
    for (const Vehicle& veh : inst.vehicles) os << " + " << Names::y(r.id, veh.id);
    os << " = 1\n";
  }

  // leaving the pickup node iff assigned; pickup visited iff drop visited
  for (const Request& r : inst.requests)
    for (const Vehicle& veh : inst.vehicles) {
      os << " link_" << r.id << "_" << veh.id << ":";
      for (int j = 0; j < V; ++j) os << " + " << Names::x(r.origin, j, veh.id);
      os << " - " << Names::y(r.id, veh.id) << " = 0\n";
      os << " pair_" << r.id << "_" << veh.id << ":";
      for (int j = 0; j < V; ++j) os << " + " << Names::x(r.origin, j, veh.id);
      for (int i = 0; i < V; ++i) os << " - " << Names::x(i, r.destination, veh.id);
      os << " = 0\n";
    }

  // big-M linearized time and load propagation
  for (int k = 0; k < K; ++k) {
    const Vehicle& veh = inst.vehicles[k];
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) {
        const Node& ni = inst.nodes[i];
        const Node& nj = inst.nodes[j];
        // u_j >= u_i + s_i + t_ij - U(1 - x)  ==>  u_j - u_i - U x >= s_i + t_ij - U
        const Seconds big_u =
            std::max<Seconds>(0, ni.window.latest + ni.service + inst.t(i, j) - nj.window.earliest);
        os << " time_" << i << "_" << j << "_" << veh.id << ": " << Names::u(j, veh.id) << " - "
           << Names::u(i, veh.id) << " - " << big_u << " " << Names::x(i, j, veh.id)
           << " >= " << (ni.service + inst.t(i, j) - big_u) << "\n";
        // w_j >= w_i + q_j - W(1 - x)  ==>  w_j - w_i - W x >= q_j - W
        const std::int64_t big_w = std::min<std::int64_t>(veh.capacity, veh.capacity + ni.flow);
        os << " load_" << i << "_" << j << "_" << veh.id << ": " << Names::w(j, veh.id) << " - "
           << Names::w(i, veh.id) << " - " << big_w << " " << Names::x(i, j, veh.id) << " >= "
           << (nj.flow - big_w) << "\n";
      }
  }

  // on-board time definition and route duration
  for (const Request& r : inst.requests)
    for (const Vehicle& veh : inst.vehicles)
      os << " ride_" << r.id << "_" << veh.id << ": " << Names::r(r.id, veh.id) << " - "
         << Names::u(r.destination, veh.id) << " + " << Names::u(r.origin, veh.id) << " = " << -r.service_pickup
         << "\n";
  for (const Vehicle& veh : inst.vehicles)
    os << " dur_" << veh.id << ": " << Names::u(veh.end_depot, veh.id) << " - " << Names::u(veh.start_depot, veh.id)
       << " <= " << veh.max_duration << "\n";

  // balance definitions
  if (spec.checks_time()) {
    for (const Company& co : inst.companies) {
      os << " sbal_" << co.id << ": " << Names::S(co.id);
      for (const Request& r : inst.requests)
        for (const Vehicle& veh : inst.vehicles) {
          if (veh.owner == co.id && r.owner != co.id)
            os << " - " << r.direct_time << " " << Names::y(r.id, veh.id);
          else if (veh.owner != co.id && r.owner == co.id)
            os << " + " << r.direct_time << " " << Names::y(r.id, veh.id);
        }
      os << " = 0\n";
    }
  }
  if (spec.checks_customers()) {
    for (const Company& co : inst.companies) {
      os << " ubal_" << co.id << ": " << Names::U(co.id);
      for (const Request& r : inst.requests)
        for (const Vehicle& veh : inst.vehicles) {
          if (veh.owner == co.id && r.owner != co.id)
            os << " - " << r.passengers << " " << Names::y(r.id, veh.id);
          else if (veh.owner != co.id && r.owner == co.id)
            os << " + " << r.passengers << " " << Names::y(r.id, veh.id);
        }
      os << " = 0\n";
    }
  }

  os << "Bounds\n";
  for (int k = 0; k < K; ++k) {
    const Vehicle& veh = inst.vehicles[k];
    for (int i = 0; i < V; ++i) os << " " << Names::x(i, i, veh.id) << " = 0\n";
    for (int i = 0; i < V; ++i)
      os << " " << inst.nodes[i].window.earliest << " <= " << Names::u(i, veh.id)
         << " <= " << inst.nodes[i].window.latest << "\n";
    for (int i = 0; i < V; ++i) {
      std::int64_t lo = std::max<std::int64_t>(0, inst.nodes[i].flow);
      std::int64_t hi = std::min<std::int64_t>(veh.capacity, veh.capacity + inst.nodes[i].flow);
      if (i == veh.start_depot) lo = hi = 0;  // initial load
      os << " " << lo << " <= " << Names::w(i, veh.id) << " <= " << hi << "\n";
    }
    for (const Request& r : inst.requests)
      os << " " << r.direct_time << " <= " << Names::r(r.id, veh.id) << " <= " << r.max_ride << "\n";
  }
  if (spec.mode == BalanceMode::NC) {
    for (const Request& r : inst.requests)
      for (const Vehicle& veh : inst.vehicles)
        if (veh.owner != r.owner) os << " " << Names::y(r.id, veh.id) << " = 0\n";
  }
  // lock restrictions hold in every mode
  for (int ri = 0; ri < C; ++ri)
    for (int k = 0; k < K; ++k)
      if (!inst.lock_allows(ri, k) &&
          !(spec.mode == BalanceMode::NC && inst.vehicles[k].owner != inst.requests[ri].owner))
        os << " " << Names::y(inst.requests[ri].id, inst.vehicles[k].id) << " = 0\n";
  if (spec.checks_time()) {
    for (std::size_t m = 0; m < inst.companies.size(); ++m) {
      const auto off = spec.offset_for(inst.companies[m].id);
      const Rat lo{-thresholds[m].s_tilde.num - off.s_prime * thresholds[m].s_tilde.den, thresholds[m].s_tilde.den};
      const Rat hi{thresholds[m].s_tilde.num - off.s_prime * thresholds[m].s_tilde.den, thresholds[m].s_tilde.den};
      os << " " << decimal(lo) << " <= " << Names::S(inst.companies[m].id) << " <= " << decimal(hi) << "\n";
    }
  }
  if (spec.checks_customers()) {
    for (std::size_t m = 0; m < inst.companies.size(); ++m) {
      const auto off = spec.offset_for(inst.companies[m].id);
      os << " " << (-thresholds[m].u_tilde - off.u_prime) << " <= " << Names::U(inst.companies[m].id)
         << " <= " << (thresholds[m].u_tilde - off.u_prime) << "\n";
    }
  }

  os << "Generals\n";
  for (const Vehicle& veh : inst.vehicles)
    for (int i = 0; i < V; ++i) os << " " << Names::w(i, veh.id) << "\n";

  os << "Binaries\n";
  for (const Request& r : inst.requests)
    for (const Vehicle& veh : inst.vehicles) os << " " << Names::y(r.id, veh.id) << "\n";
  for (const Vehicle& veh : inst.vehicles)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) os << " " << Names::x(i, j, veh.id) << "\n";
  os << "End\n";
  return os.str();
}

Solution import_lp_solution(const Instance& inst, const std::string& solution_text) {
  const int V = inst.node_count();
  // per vehicle id -> arc matrix of chosen x values
  std::map<int, std::vector<int>> arcs;
  std::map<std::pair<int, int>, int> y;  // (request id, vehicle id) -> value

  std::istringstream in(solution_text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string name;
    double value;
    if (!(ls >> name)) continue;
    if (name[0] == '#' || name[0] == '\\') continue;
    if (!(ls >> value)) throw LpError("line " + std::to_string(line_no) + ": missing value for " + name);
    if (name[0] != 'x' && name[0] != 'y') continue;

    std::vector<long> parts;
    std::size_t pos = 1;
    while (pos < name.size() && name[pos] == '_') {
      std::size_t end = name.find('_', pos + 1);
      if (end == std::string::npos) end = name.size();
      parts.push_back(std::strtol(name.c_str() + pos + 1, nullptr, 10));
      pos = end;
    }
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-6)
      throw LpError("fractional value " + std::to_string(value) + " for " + name);
    const int iv = static_cast<int>(rounded);
    if (name[0] == 'x') {
      if (parts.size() != 3) throw LpError("malformed variable name " + name);
      const int i = static_cast<int>(parts[0]);
      const int j = static_cast<int>(parts[1]);
      const int k = static_cast<int>(parts[2]);
      if (i < 0 || i >= V || j < 0 || j >= V || inst.vehicle_index(k) < 0)
        throw LpError("variable " + name + " references an unknown node or vehicle");
      auto& mat = arcs[k];
      if (mat.empty()) mat.assign(static_cast<std::size_t>(V) * V, 0);
      mat[static_cast<std::size_t>(i) * V + j] = iv;
    } else {
      if (parts.size() != 2) throw LpError("malformed variable name " + name);
      y[{static_cast<int>(parts[0]), static_cast<int>(parts[1])}] = iv;
    }
  }

  Solution sol = empty_solution(inst);
  for (std::size_t k = 0; k < inst.vehicles.size(); ++k) {
    const Vehicle& veh = inst.vehicles[k];
    auto it = arcs.find(veh.id);
    if (it == arcs.end()) throw LpError("no arc variables for vehicle " + std::to_string(veh.id));
    const auto& mat = it->second;
    int used = 0, total = 0;
    for (int v : mat) total += v != 0;
    int cur = veh.start_depot;
    for (int step = 0; step <= V; ++step) {
      int next = -1;
      for (int j = 0; j < V; ++j) {
        if (mat[static_cast<std::size_t>(cur) * V + j] == 0) continue;
        if (next != -1)
          throw LpError("vehicle " + std::to_string(veh.id) + " branches at node " + std::to_string(cur));
        next = j;
      }
      if (next == -1) throw LpError("vehicle " + std::to_string(veh.id) + " is stuck at node " + std::to_string(cur));
      ++used;
      if (next == veh.end_depot) break;
      if (inst.request_of_node(next) < 0)
        throw LpError("vehicle " + std::to_string(veh.id) + " passes through depot node " + std::to_string(next));
      sol.routes[k].visits.push_back(next);
      cur = next;
      if (step == V) throw LpError("vehicle " + std::to_string(veh.id) + " tour does not reach its end depot");
    }
    if (used != total)
      throw LpError("vehicle " + std::to_string(veh.id) + " has " + std::to_string(total - used) +
                    " arc(s) disconnected from its tour");
  }

  // cross-check the y variables against the reconstructed visits
  for (const Request& r : inst.requests) {
    for (const Vehicle& veh : inst.vehicles) {
      const auto it = y.find({r.id, veh.id});
      const int want = it == y.end() ? 0 : it->second;
      const auto& visits = sol.routes[inst.vehicle_index(veh.id)].visits;
      const bool has = std::find(visits.begin(), visits.end(), r.origin) != visits.end();
      if (want != (has ? 1 : 0))
        throw LpError("assignment variable y_" + std::to_string(r.id) + "_" + std::to_string(veh.id) +
                      " disagrees with the reconstructed route");
    }
  }
  return sol;
}

}  // namespace cdarp
