#ifndef CDARP_MODEL_HPP
#define CDARP_MODEL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdarp {

using Seconds = std::int64_t;
using Cost = std::int64_t;

// Exact rational with a small denominator (powers of ten in practice).
// Used for alpha fractions and the time-balance thresholds they induce,
// so that threshold comparisons stay exact on integral balances.
struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rat from_double(double v, std::int64_t scale = 1000000);
  static Rat integer(std::int64_t v) { return Rat{v, 1}; }

  Rat normalized() const;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::int64_t floor() const;

  bool operator==(const Rat& o) const { return num * o.den == o.num * den; }
  bool operator<(const Rat& o) const { return num * o.den < o.num * den; }
  bool operator<=(const Rat& o) const { return num * o.den <= o.num * den; }
};

// |x| <= r, compared exactly.
inline bool abs_within(std::int64_t x, const Rat& r) {
  const std::int64_t lhs = (x < 0 ? -x : x) * r.den;
  return lhs <= r.num;
}

struct TimeWindow {
  Seconds earliest = 0;
  Seconds latest = 0;
};

enum class NodeKind { DepotStart, DepotEnd, Pickup, Drop };

enum class LockKind { Free, MustStayWithOwner, Denylist };

struct Lock {
  LockKind kind = LockKind::Free;
  std::vector<int> denied;  // company ids, Denylist only

  bool allows_company(int owner, int company) const {
    switch (kind) {
      case LockKind::Free: return true;
      case LockKind::MustStayWithOwner: return company == owner;
      case LockKind::Denylist:
        for (int d : denied)
          if (d == company) return false;
        return true;
    }
    return true;
  }
};

struct Request {
  int id = 0;
  int owner = 0;            // company id
  int origin = 0;           // node id (canonical)
  int destination = 0;      // node id (canonical)
  int passengers = 1;       // p_c
  Seconds direct_time = 0;  // t_c, equals travel(origin, destination)
  Seconds service_pickup = 0;
  Seconds service_drop = 0;
  TimeWindow pickup_window;
  TimeWindow drop_window;
  Seconds max_ride = 0;  // T_c
  Lock lock;
};

struct Vehicle {
  int id = 0;
  int owner = 0;  // company id
  int capacity = 1;
  Seconds max_duration = 0;  // T_k
  int start_depot = 0;       // node id
  int end_depot = 0;         // node id
};

struct Company {
  int id = 0;
  int start_depot = 0;
  int end_depot = 0;
};

struct Node {
  int id = 0;
  NodeKind kind = NodeKind::Pickup;
  TimeWindow window;
  Seconds service = 0;
  int flow = 0;  // +p on pickups, -p on drops, 0 at depots
};

// Complete routing instance on the canonical node set:
// [depot-starts | depot-ends | pickups | drops], each block sorted by id.
// Node ids equal their canonical index. Immutable after construction.
class Instance {
 public:
  Seconds horizon = 86400;
  std::uint64_t seed = 0;
  std::vector<Company> companies;  // sorted by id
  std::vector<Vehicle> vehicles;   // sorted by id
  std::vector<Request> requests;   // sorted by id
  std::vector<Node> nodes;
  std::vector<Seconds> travel;  // row-major |V| x |V|
  std::vector<Cost> cost;       // row-major |V| x |V|

  int node_count() const { return static_cast<int>(nodes.size()); }
  Seconds t(int i, int j) const { return travel[static_cast<std::size_t>(i) * nodes.size() + j]; }
  Cost c(int i, int j) const { return cost[static_cast<std::size_t>(i) * nodes.size() + j]; }

  int company_index(int id) const;
  int vehicle_index(int id) const;
  int request_index(int id) const;

  // Canonical node ids.
  int start_depot_node(int company_idx) const { return company_idx; }
  int end_depot_node(int company_idx) const { return static_cast<int>(companies.size()) + company_idx; }
  int pickup_node(int request_idx) const { return 2 * static_cast<int>(companies.size()) + request_idx; }
  int drop_node(int request_idx) const {
    return 2 * static_cast<int>(companies.size()) + static_cast<int>(requests.size()) + request_idx;
  }
  // Inverse: request index of a pickup/drop node, -1 for depots.
  int request_of_node(int node_id) const {
    const int base = 2 * static_cast<int>(companies.size());
    if (node_id < base) return -1;
    const int c = static_cast<int>(requests.size());
    const int off = node_id - base;
    return off < c ? off : off - c;
  }
  bool is_pickup_node(int node_id) const {
    const int base = 2 * static_cast<int>(companies.size());
    return node_id >= base && node_id < base + static_cast<int>(requests.size());
  }

  // May the request ride on this vehicle at all (lock only; mode handled elsewhere)?
  bool lock_allows(int request_idx, int vehicle_idx) const {
    const Request& r = requests[request_idx];
    return r.lock.allows_company(r.owner, vehicles[vehicle_idx].owner);
  }
};

// Inputs for building an instance; depot node ids and t_c are derived.
struct RequestSpec {
  int id = 0;
  int owner = 0;
  int passengers = 1;
  Seconds service_pickup = 0;
  Seconds service_drop = 0;
  TimeWindow pickup_window;
  TimeWindow drop_window;
  Seconds max_ride = 0;
  Lock lock;
};

struct VehicleSpec {
  int id = 0;
  int owner = 0;
  int capacity = 1;
  Seconds max_duration = 0;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Assembles the canonical node set and matrices. The travel matrix is given in
// canonical row-major order; cost defaults to travel when empty. Structural
// errors (size mismatches, unknown owners) throw; semantic checks are the job
// of validate_instance.
Instance build_instance(Seconds horizon, std::uint64_t seed, std::vector<int> company_ids,
                        std::vector<VehicleSpec> vehicle_specs, std::vector<RequestSpec> request_specs,
                        std::vector<Seconds> travel, std::vector<Cost> cost = {});

struct Violation {
  std::string code;     // stable identifier, e.g. "request.max_ride"
  std::string subject;  // "request 3", "node 7", ...
  std::string message;
};

// Report-style: one entry per violated invariant, empty means valid.
std::vector<Violation> validate_instance(const Instance& inst);

enum class BalanceMode { NC, UC, T, C, TC };

enum class URounding { Floor, HalfUp };

const char* to_string(BalanceMode m);
std::optional<BalanceMode> balance_mode_from_string(const std::string& s);

struct CompanyThreshold {
  int company = 0;  // company id
  Rat s_tilde;      // seconds, exact rational
  std::int64_t u_tilde = 0;
};

struct CompanyOffset {
  int company = 0;  // company id
  Seconds s_prime = 0;
  std::int64_t u_prime = 0;
};

struct BalanceSpec {
  BalanceMode mode = BalanceMode::UC;
  Rat alpha_t = Rat::integer(0);
  Rat alpha_c = Rat::integer(0);
  // When present, overrides the alpha formula for listed companies.
  std::vector<CompanyThreshold> explicit_thresholds;
  // Memory offsets; companies not listed default to 0.
  std::vector<CompanyOffset> offsets;
  URounding u_rounding = URounding::Floor;

  bool checks_time() const { return mode == BalanceMode::T || mode == BalanceMode::TC; }
  bool checks_customers() const { return mode == BalanceMode::C || mode == BalanceMode::TC; }

  CompanyOffset offset_for(int company_id) const {
    for (const auto& o : offsets)
      if (o.company == company_id) return o;
    return CompanyOffset{company_id, 0, 0};
  }
};

// S~_m = alpha_T * sum of t_c over the company's requests;
// U~_m = floor(alpha_C * sum of p_c) (or half-up per spec.u_rounding).
// Explicit thresholds in the spec win. Throws ModelError on negative alpha.
std::vector<CompanyThreshold> compute_thresholds(const Instance& inst, const BalanceSpec& spec);

}  // namespace cdarp

#endif
