#include "cdarp/generate.hpp"

#include <algorithm>
#include <cmath>

#include "cdarp/rng.hpp"
#include "cdarp/schedule.hpp"

namespace cdarp {

GenParams group_params(char group) {
  GenParams p;
  switch (group) {
    case 'A': case 'a': p.companies = 2; p.requests_per_company = 4; break;
    case 'B': case 'b': p.companies = 2; p.requests_per_company = 5; break;
    case 'C': case 'c': p.companies = 4; p.requests_per_company = 12; break;
    case 'D': case 'd': p.companies = 10; p.requests_per_company = 10; break;
    default: throw ModelError(std::string("unknown instance group '") + group + "'");
  }
  return p;
}

namespace {

struct Point {
  double x = 0, y = 0;
};

Seconds dist(const Point& a, const Point& b) {
  const double d = std::hypot(a.x - b.x, a.y - b.y);
  return static_cast<Seconds>(std::ceil(d));
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Instance assemble(const GenParams& p, std::uint64_t file_seed, const std::vector<Point>& depots, Rng& req_rng) {
  const int m = p.companies;
  const int c = m * p.requests_per_company;
  const double side = static_cast<double>(p.max_trip_time) / std::sqrt(2.0);

  std::vector<Point> pickups(c), drops(c);
  for (int i = 0; i < c; ++i) {
    pickups[i] = Point{req_rng.uniform01() * side, req_rng.uniform01() * side};
    drops[i] = Point{req_rng.uniform01() * side, req_rng.uniform01() * side};
  }

  // canonical node coordinates: depot starts, depot ends, pickups, drops
  std::vector<Point> coords;
  coords.reserve(2 * m + 2 * c);
  for (int i = 0; i < m; ++i) coords.push_back(depots[i]);
  for (int i = 0; i < m; ++i) coords.push_back(depots[i]);
  for (int i = 0; i < c; ++i) coords.push_back(pickups[i]);
  for (int i = 0; i < c; ++i) coords.push_back(drops[i]);

  const int v = static_cast<int>(coords.size());
  std::vector<Seconds> travel(static_cast<std::size_t>(v) * v, 0);
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j)
      if (i != j) travel[static_cast<std::size_t>(i) * v + j] = dist(coords[i], coords[j]);

  std::vector<int> company_ids(m);
  std::vector<VehicleSpec> vehicles;
  for (int i = 0; i < m; ++i) {
    company_ids[i] = i + 1;
    for (int k = 0; k < p.vehicles_per_company; ++k)
      vehicles.push_back(VehicleSpec{i * p.vehicles_per_company + k + 1, i + 1, p.capacity, p.max_route_duration});
  }

  std::vector<RequestSpec> requests;
  for (int i = 0; i < c; ++i) {
    RequestSpec r;
    r.id = i + 1;
    r.owner = i / p.requests_per_company + 1;
    r.passengers = p.passengers;
    r.service_pickup = p.service;
    r.service_drop = p.service;
    r.max_ride = p.max_ride;
    r.pickup_window = TimeWindow{0, p.horizon};
    r.drop_window = TimeWindow{0, p.horizon};
    requests.push_back(r);
  }

  Instance inst = build_instance(p.horizon, file_seed, company_ids, std::move(vehicles), std::move(requests), travel);

  // Place one window per request so that the request stays serviceable by an
  // owner vehicle on its own; draws are retried until that holds.
  ScheduleEvaluator eval(inst);
  for (int ri = 0; ri < c; ++ri) {
    Request& r = inst.requests[ri];
    const int own_vehicle = inst.vehicle_index(inst.vehicles[inst.company_index(r.owner) * p.vehicles_per_company].id);
    const bool window_on_pickup = req_rng.uniform01() < 0.5;
    const Seconds span = p.horizon - p.window_width;
    const int route[2] = {r.origin, r.destination};
    for (int attempt = 0;; ++attempt) {
      const Seconds start =
          span > 0 ? static_cast<Seconds>(req_rng.uniform01() * static_cast<double>(span + 1)) : 0;
      const TimeWindow w{start, start + p.window_width};
      const TimeWindow full{0, p.horizon};
      r.pickup_window = window_on_pickup ? w : full;
      r.drop_window = window_on_pickup ? full : w;
      inst.nodes[r.origin].window = r.pickup_window;
      inst.nodes[r.destination].window = r.drop_window;
      if (eval.feasible(own_vehicle, route)) break;
      if (attempt > 200) {  // fall back to an untimed request
        r.pickup_window = full;
        r.drop_window = full;
        inst.nodes[r.origin].window = full;
        inst.nodes[r.destination].window = full;
        break;
      }
    }
  }
  return inst;
}

}  // namespace

Instance generate(const GenParams& p, std::uint64_t seed) {
  Rng rng(mix(seed, 0));
  const double side = static_cast<double>(p.max_trip_time) / std::sqrt(2.0);
  std::vector<Point> depots(p.companies);
  for (auto& d : depots) d = Point{rng.uniform01() * side, rng.uniform01() * side};
  return assemble(p, seed, depots, rng);
}

std::vector<Instance> generate_days(const GenParams& p, std::uint64_t seed, int days) {
  Rng depot_rng(mix(seed, 0));
  const double side = static_cast<double>(p.max_trip_time) / std::sqrt(2.0);
  std::vector<Point> depots(p.companies);
  for (auto& d : depots) d = Point{depot_rng.uniform01() * side, depot_rng.uniform01() * side};

  std::vector<Instance> out;
  for (int d = 0; d < days; ++d) {
    Rng day_rng(mix(seed, static_cast<std::uint64_t>(d) + 1));
    out.push_back(assemble(p, seed + static_cast<std::uint64_t>(d), depots, day_rng));
  }
  return out;
}

}  // namespace cdarp
