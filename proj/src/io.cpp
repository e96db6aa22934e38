#include "cdarp/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cdarp {

using nlohmann::json;

namespace {

json must_get(const json& j, const char* key, const std::string& origin) {
  if (!j.contains(key)) throw IoError(origin + ": missing key '" + key + "'");
  return j.at(key);
}

json lock_to_json(const Lock& lock) {
  switch (lock.kind) {
    case LockKind::Free: return json("free");
    case LockKind::MustStayWithOwner: return json("must-stay-with-owner");
    case LockKind::Denylist: return json{{"denylist", lock.denied}};
  }
  return json("free");
}

Lock lock_from_json(const json& j, const std::string& origin) {
  Lock lock;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "free") return lock;
    if (s == "must-stay-with-owner") {
      lock.kind = LockKind::MustStayWithOwner;
      return lock;
    }
    throw IoError(origin + ": unknown lock '" + s + "'");
  }
  if (j.is_object() && j.contains("denylist")) {
    lock.kind = LockKind::Denylist;
    lock.denied = j.at("denylist").get<std::vector<int>>();
    return lock;
  }
  throw IoError(origin + ": malformed lock field");
}

TimeWindow window_from_json(const json& j, const std::string& origin, const char* field) {
  if (!j.is_array() || j.size() != 2) throw IoError(origin + ": " + field + " must be [earliest, latest]");
  return TimeWindow{j.at(0).get<Seconds>(), j.at(1).get<Seconds>()};
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

Instance instance_from_json_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(origin + ": " + e.what());
  }

  try {
    const Seconds horizon = j.value("horizon", Seconds{86400});
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});

    std::vector<int> company_ids;
    std::vector<std::pair<int, std::pair<int, int>>> company_depots;  // id -> (start, end) as stated in the file
    for (const auto& cj : must_get(j, "companies", origin)) {
      const int id = must_get(cj, "id", origin).get<int>();
      company_ids.push_back(id);
      company_depots.push_back({id,
                                {cj.value("start_depot", -1), cj.value("end_depot", -1)}});
    }

    std::vector<VehicleSpec> vehicles;
    for (const auto& vj : must_get(j, "vehicles", origin)) {
      VehicleSpec v;
      v.id = must_get(vj, "id", origin).get<int>();
      v.owner = must_get(vj, "owner", origin).get<int>();
      v.capacity = must_get(vj, "capacity", origin).get<int>();
      v.max_duration = must_get(vj, "max_duration", origin).get<Seconds>();
      vehicles.push_back(v);
    }

    struct Declared {
      int id, origin_node, destination_node;
      Seconds direct_time;
    };
    std::vector<Declared> declared;
    std::vector<RequestSpec> requests;
    for (const auto& rj : must_get(j, "requests", origin)) {
      RequestSpec r;
      r.id = must_get(rj, "id", origin).get<int>();
      r.owner = must_get(rj, "owner", origin).get<int>();
      r.passengers = must_get(rj, "passengers", origin).get<int>();
      r.service_pickup = must_get(rj, "service_pickup", origin).get<Seconds>();
      r.service_drop = must_get(rj, "service_drop", origin).get<Seconds>();
      r.pickup_window = window_from_json(must_get(rj, "pickup_window", origin), origin, "pickup_window");
      r.drop_window = window_from_json(must_get(rj, "drop_window", origin), origin, "drop_window");
      r.max_ride = must_get(rj, "max_ride", origin).get<Seconds>();
      if (rj.contains("lock")) r.lock = lock_from_json(rj.at("lock"), origin);
      requests.push_back(r);
      declared.push_back(Declared{r.id, must_get(rj, "origin", origin).get<int>(),
                                  must_get(rj, "destination", origin).get<int>(),
                                  rj.value("direct_time", Seconds{-1})});
    }

    const auto travel = must_get(j, "matrix", origin).get<std::vector<Seconds>>();
    std::vector<Cost> cost;
    if (j.contains("cost_matrix")) cost = j.at("cost_matrix").get<std::vector<Cost>>();

    Instance inst = build_instance(horizon, seed, company_ids, std::move(vehicles), std::move(requests),
                                   travel, std::move(cost));

    // The file's node references are redundant but must agree with canonical ids.
    for (const auto& d : declared) {
      const int ri = inst.request_index(d.id);
      const Request& r = inst.requests[ri];
      if (d.origin_node != r.origin || d.destination_node != r.destination)
        throw IoError(origin + ": request " + std::to_string(d.id) +
                      ": origin/destination do not match canonical node ids (expected " + std::to_string(r.origin) +
                      "/" + std::to_string(r.destination) + ")");
      if (d.direct_time >= 0 && d.direct_time != r.direct_time)
        throw IoError(origin + ": request " + std::to_string(d.id) + ": direct_time " +
                      std::to_string(d.direct_time) + " does not match the matrix entry " +
                      std::to_string(r.direct_time));
    }
    for (const auto& [id, depots] : company_depots) {
      const int ci = inst.company_index(id);
      if (depots.first >= 0 && depots.first != inst.companies[ci].start_depot)
        throw IoError(origin + ": company " + std::to_string(id) + ": start_depot is not the canonical node id");
      if (depots.second >= 0 && depots.second != inst.companies[ci].end_depot)
        throw IoError(origin + ": company " + std::to_string(id) + ": end_depot is not the canonical node id");
    }
    return inst;
  } catch (const json::exception& e) {
    throw IoError(origin + ": " + e.what());
  } catch (const ModelError& e) {
    throw IoError(origin + ": " + e.what());
  }
}

Instance read_instance(const std::string& path) { return instance_from_json_text(read_text_file(path), path); }

std::string instance_to_json_text(const Instance& inst) {
  json j;
  j["horizon"] = inst.horizon;
  j["seed"] = inst.seed;
  j["companies"] = json::array();
  for (const Company& c : inst.companies)
    j["companies"].push_back({{"id", c.id}, {"start_depot", c.start_depot}, {"end_depot", c.end_depot}});
  j["vehicles"] = json::array();
  for (const Vehicle& v : inst.vehicles)
    j["vehicles"].push_back({{"id", v.id},
                             {"owner", v.owner},
                             {"capacity", v.capacity},
                             {"max_duration", v.max_duration},
                             {"start_depot", v.start_depot},
                             {"end_depot", v.end_depot}});
  j["requests"] = json::array();
  for (const Request& r : inst.requests)
    j["requests"].push_back({{"id", r.id},
                             {"owner", r.owner},
                             {"origin", r.origin},
                             {"destination", r.destination},
                             {"passengers", r.passengers},
                             {"direct_time", r.direct_time},
                             {"service_pickup", r.service_pickup},
                             {"service_drop", r.service_drop},
                             {"pickup_window", {r.pickup_window.earliest, r.pickup_window.latest}},
                             {"drop_window", {r.drop_window.earliest, r.drop_window.latest}},
                             {"max_ride", r.max_ride},
                             {"lock", lock_to_json(r.lock)}});
  j["matrix"] = inst.travel;
  if (inst.cost != inst.travel) j["cost_matrix"] = inst.cost;
  return j.dump(2) + "\n";
}

void write_instance(const Instance& inst, const std::string& path) {
  write_text_file(path, instance_to_json_text(inst));
}

namespace {

json spec_to_json(const BalanceSpec& spec) {
  json j;
  j["mode"] = to_string(spec.mode);
  j["alpha_t"] = spec.alpha_t.value();
  j["alpha_c"] = spec.alpha_c.value();
  j["u_rounding"] = spec.u_rounding == URounding::Floor ? "floor" : "half-up";
  j["offsets"] = json::array();
  for (const auto& o : spec.offsets)
    j["offsets"].push_back({{"company", o.company}, {"s_prime", o.s_prime}, {"u_prime", o.u_prime}});
  j["explicit_thresholds"] = json::array();
  for (const auto& t : spec.explicit_thresholds)
    j["explicit_thresholds"].push_back({{"company", t.company}, {"s_tilde", t.s_tilde.value()}, {"u_tilde", t.u_tilde}});
  return j;
}

BalanceSpec spec_from_json(const json& j, const std::string& origin) {
  BalanceSpec spec;
  const auto mode = balance_mode_from_string(must_get(j, "mode", origin).get<std::string>());
  if (!mode) throw IoError(origin + ": unknown mode");
  spec.mode = *mode;
  spec.alpha_t = Rat::from_double(j.value("alpha_t", 0.0));
  spec.alpha_c = Rat::from_double(j.value("alpha_c", 0.0));
  if (j.value("u_rounding", "floor") == std::string("half-up")) spec.u_rounding = URounding::HalfUp;
  if (j.contains("offsets"))
    for (const auto& oj : j.at("offsets"))
      spec.offsets.push_back(CompanyOffset{must_get(oj, "company", origin).get<int>(),
                                           oj.value("s_prime", Seconds{0}), oj.value("u_prime", std::int64_t{0})});
  if (j.contains("explicit_thresholds"))
    for (const auto& tj : j.at("explicit_thresholds"))
      spec.explicit_thresholds.push_back(CompanyThreshold{must_get(tj, "company", origin).get<int>(),
                                                          Rat::from_double(tj.value("s_tilde", 0.0)),
                                                          tj.value("u_tilde", std::int64_t{0})});
  return spec;
}

}  // namespace

std::string solution_to_json_text(const Instance& inst, const SolutionFile& file) {
  json j = spec_to_json(file.spec);
  j["backend"] = file.backend;
  j["rng_seed"] = file.rng_seed;
  j["cost"] = file.cost;

  const auto thresholds = compute_thresholds(inst, file.spec);
  j["thresholds"] = json::array();
  for (const auto& t : thresholds)
    j["thresholds"].push_back({{"company", t.company}, {"s_tilde", t.s_tilde.value()}, {"u_tilde", t.u_tilde}});

  const auto bal = balances(inst, file.solution);
  j["balances"] = json::array();
  for (const auto& b : bal) j["balances"].push_back({{"company", b.company}, {"s", b.s}, {"u", b.u}});

  j["routes"] = json::array();
  for (std::size_t k = 0; k < file.solution.routes.size(); ++k) {
    const Route& r = file.solution.routes[k];
    json rj{{"vehicle", r.vehicle}, {"visits", r.visits}};
    const auto sched = earliest_schedule(inst, r);
    if (sched.feasible) {
      rj["service_start"] = sched.schedule.service_start;
      rj["load_after"] = sched.schedule.load_after;
      rj["depot_departure"] = sched.schedule.depot_departure;
      rj["depot_arrival"] = sched.schedule.depot_arrival;
      rj["duration"] = sched.schedule.duration;
      json rt = json::array();
      for (const auto& [req, ride] : sched.schedule.ride_times) rt.push_back({{"request", req}, {"ride", ride}});
      rj["ride_times"] = rt;
    }
    j["routes"].push_back(rj);
  }

  if (file.stats) {
    json s;
    s["iterations"] = file.stats->iterations;
    s["improvements"] = file.stats->improvements;
    s["accepted"] = file.stats->accepted;
    s["repair_failures"] = file.stats->repair_failures;
    json dh = json::object(), rh = json::object();
    for (int i = 0; i < kDestroyOps; ++i) dh[to_string(static_cast<DestroyOp>(i))] = file.stats->destroy_hits[i];
    for (int i = 0; i < kRepairOps; ++i) rh[to_string(static_cast<RepairOp>(i))] = file.stats->repair_hits[i];
    s["destroy_hits"] = dh;
    s["repair_hits"] = rh;
    j["stats"] = s;
  }
  return j.dump(2) + "\n";
}

void write_solution(const Instance& inst, const SolutionFile& file, const std::string& path) {
  write_text_file(path, solution_to_json_text(inst, file));
}

SolutionFile read_solution(const Instance& inst, const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  try {
    SolutionFile file;
    file.spec = spec_from_json(j, path);
    file.cost = must_get(j, "cost", path).get<Cost>();
    file.backend = j.value("backend", "");
    file.rng_seed = j.value("rng_seed", std::uint64_t{0});
    for (const auto& rj : must_get(j, "routes", path)) {
      Route r;
      r.vehicle = must_get(rj, "vehicle", path).get<int>();
      r.visits = must_get(rj, "visits", path).get<std::vector<int>>();
      file.solution.routes.push_back(r);
    }
    return file;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

AlnsParams params_from_json_text(const std::string& text) {
  AlnsParams p;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("params: ") + e.what());
  }
  maybe(j, "t_max", p.t_max);
  maybe(j, "gamma", p.gamma);
  maybe(j, "refresh_threshold", p.refresh_threshold);
  maybe(j, "q_min", p.q_min);
  maybe(j, "q_max", p.q_max);
  maybe(j, "reduce_probability", p.reduce_probability);
  maybe(j, "enlarge_threshold", p.enlarge_threshold);
  maybe(j, "score_init", p.score_init);
  maybe(j, "score_improve", p.score_improve);
  maybe(j, "seed", p.seed);
  maybe(j, "accept_vs_current", p.accept_vs_current);
  maybe(j, "trace_every", p.trace_every);
  return p;
}

AlnsParams read_params(const std::string& path) { return params_from_json_text(read_text_file(path)); }

GenParams gen_params_from_json_text(const std::string& text) {
  GenParams p;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("generator params: ") + e.what());
  }
  if (j.contains("group")) p = group_params(j.at("group").get<std::string>().at(0));
  maybe(j, "companies", p.companies);
  maybe(j, "requests_per_company", p.requests_per_company);
  maybe(j, "vehicles_per_company", p.vehicles_per_company);
  maybe(j, "capacity", p.capacity);
  maybe(j, "max_route_duration", p.max_route_duration);
  maybe(j, "max_ride", p.max_ride);
  maybe(j, "service", p.service);
  maybe(j, "passengers", p.passengers);
  maybe(j, "window_width", p.window_width);
  maybe(j, "horizon", p.horizon);
  maybe(j, "max_trip_time", p.max_trip_time);
  return p;
}

GenParams read_gen_params(const std::string& path) { return gen_params_from_json_text(read_text_file(path)); }

EnumerationBudget budget_from_json_text(const std::string& text) {
  EnumerationBudget b;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("budget: ") + e.what());
  }
  maybe(j, "max_requests", b.max_requests);
  maybe(j, "max_vehicles", b.max_vehicles);
  maybe(j, "max_nodes", b.max_nodes);
  maybe(j, "time_limit_s", b.time_limit_s);
  return b;
}

std::vector<CompanyOffset> read_offsets(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  std::vector<CompanyOffset> out;
  for (const auto& oj : must_get(j, "offsets", path))
    out.push_back(CompanyOffset{must_get(oj, "company", path).get<int>(), oj.value("s_prime", Seconds{0}),
                                oj.value("u_prime", std::int64_t{0})});
  return out;
}

void write_offsets(const std::vector<CompanyOffset>& offsets, const std::string& path) {
  json j;
  j["offsets"] = json::array();
  for (const auto& o : offsets)
    j["offsets"].push_back({{"company", o.company}, {"s_prime", o.s_prime}, {"u_prime", o.u_prime}});
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace cdarp
