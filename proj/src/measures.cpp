#include "cdarp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace cdarp {

namespace {

double half_width(const Instance& inst, int node) {
  const Node& n = inst.nodes[node];
  const Seconds latest = std::min(n.window.latest, inst.horizon);
  return static_cast<double>(latest - n.window.earliest) / 2.0;
}

}  // namespace

std::optional<double> relatedness(const Instance& inst, int request_a, int request_r) {
  const Request& a = inst.requests[request_a];
  const Request& r = inst.requests[request_r];

  Seconds max_t = 0;
  Seconds max_l = std::numeric_limits<Seconds>::min();
  Seconds min_e = std::numeric_limits<Seconds>::max();
  for (int i = 0; i < inst.node_count(); ++i) {
    const Node& n = inst.nodes[i];
    max_l = std::max(max_l, std::min(n.window.latest, inst.horizon));
    min_e = std::min(min_e, n.window.earliest);
    for (int j = 0; j < inst.node_count(); ++j) max_t = std::max(max_t, inst.t(i, j));
  }

  double spatial = 0;
  if (max_t > 0)
    spatial = static_cast<double>(inst.t(a.origin, r.origin) + inst.t(a.destination, r.destination)) /
              static_cast<double>(max_t);
  double temporal = 0;
  const Seconds span = max_l - min_e;
  if (span > 0)
    temporal = (std::abs(half_width(inst, a.origin) - half_width(inst, r.origin)) +
                std::abs(half_width(inst, a.destination) - half_width(inst, r.destination))) /
               static_cast<double>(span);

  const double bracket = spatial + temporal;
  if (bracket <= 0) return std::nullopt;
  return 1.0 / bracket;
}

std::optional<Seconds> closeness(const Instance& inst, int request_a, int request_r, int* argmin_order) {
  const Request& a = inst.requests[request_a];
  const Request& r = inst.requests[request_r];
  const int oa = a.origin, da = a.destination;
  const int orr = r.origin, dr = r.destination;

  // Fig. 3 sequences; the last four stack both requests on board.
  const int orders[kClosenessOrders][4] = {
      {orr, dr, oa, da}, {oa, da, orr, dr}, {orr, oa, dr, da},
      {oa, orr, da, dr}, {orr, oa, da, dr}, {oa, orr, dr, da},
  };

  int min_capacity = std::numeric_limits<int>::max();
  for (const Vehicle& v : inst.vehicles) min_capacity = std::min(min_capacity, v.capacity);
  const bool stacking_ok = a.passengers + r.passengers <= min_capacity;

  std::optional<Seconds> best;
  int best_order = -1;
  for (int s = 0; s < kClosenessOrders; ++s) {
    if (s >= 2 && !stacking_ok) continue;
    const auto time = min_sequence_time(inst, std::span<const int>(orders[s], 4));
    if (!time) continue;
    const Seconds close_s = *time - r.direct_time;
    if (!best || close_s < *best) {
      best = close_s;
      best_order = s;
    }
  }
  if (argmin_order) *argmin_order = best_order;
  return best;
}

MeasureTable MeasureTable::build(const Instance& inst) {
  MeasureTable t;
  t.n_ = static_cast<int>(inst.requests.size());
  const std::size_t cells = static_cast<std::size_t>(t.n_) * t.n_;
  t.rel_.assign(cells, 0);
  t.close_.assign(cells, 0);
  t.close_finite_.assign(cells, 0);
  t.close_order_.assign(cells, -1);

  std::vector<char> rel_finite(cells, 0);
  double max_rel = 0;
  Seconds max_close = 0;
  for (int a = 0; a < t.n_; ++a) {
    for (int r = 0; r < t.n_; ++r) {
      if (a == r) continue;
      const std::size_t i = t.idx(a, r);
      if (const auto rel = relatedness(inst, a, r)) {
        t.rel_[i] = *rel;
        rel_finite[i] = 1;
        max_rel = std::max(max_rel, *rel);
      }
      int order = -1;
      if (const auto cl = closeness(inst, a, r, &order)) {
        t.close_[i] = *cl;
        t.close_finite_[i] = 1;
        t.close_order_[i] = static_cast<signed char>(order);
        max_close = std::max(max_close, *cl);
      }
    }
  }

  t.rel_cap_ = max_rel > 0 ? 10.0 * max_rel : 1.0;
  t.close_cap_ = max_close > 0 ? 10 * max_close : 1;
  for (int a = 0; a < t.n_; ++a)
    for (int r = 0; r < t.n_; ++r) {
      if (a == r) continue;
      const std::size_t i = t.idx(a, r);
      if (!rel_finite[i]) t.rel_[i] = t.rel_cap_;
      if (!t.close_finite_[i]) t.close_[i] = t.close_cap_;
    }
  return t;
}

void MeasureTable::dump_csv(std::ostream& os) const {
  os << "a,r,rel,close,close_finite,argmin_order\n";
  char buf[64];
  for (int a = 0; a < n_; ++a)
    for (int r = 0; r < n_; ++r) {
      if (a == r) continue;
      std::snprintf(buf, sizeof(buf), "%.9g", rel(a, r));
      os << a << ',' << r << ',' << buf << ',' << close(a, r) << ',' << int(close_finite(a, r)) << ','
         << close_order(a, r) << '\n';
    }
}

std::vector<int> route_assignment(const Instance& inst, const Solution& sol) {
  std::vector<int> route_of(inst.requests.size(), -1);
  for (std::size_t k = 0; k < sol.routes.size(); ++k)
    for (int v : sol.routes[k].visits)
      if (inst.is_pickup_node(v)) route_of[inst.request_of_node(v)] = static_cast<int>(k);
  return route_of;
}

double proximity(const Instance& inst, const MeasureTable& table, const std::vector<int>& route_of, int request_a) {
  (void)inst;
  double best = table.rel_cap();
  bool any = false;
  for (int c = 0; c < table.size(); ++c) {
    if (c == request_a || route_of[c] < 0 || route_of[c] == route_of[request_a]) continue;
    const double v = table.rel(request_a, c);
    best = any ? std::min(best, v) : v;
    any = true;
  }
  return any ? best : table.rel_cap();
}

Seconds interchangeability(const Instance& inst, const MeasureTable& table, const std::vector<int>& route_of,
                           int request_a) {
  (void)inst;
  Seconds best = table.close_cap();
  bool any = false;
  for (int c = 0; c < table.size(); ++c) {
    if (c == request_a || route_of[c] < 0 || route_of[c] == route_of[request_a]) continue;
    const Seconds v = table.close(request_a, c);
    best = any ? std::min(best, v) : v;
    any = true;
  }
  return any ? best : table.close_cap();
}

}  // namespace cdarp
