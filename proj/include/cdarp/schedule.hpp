#ifndef CDARP_SCHEDULE_HPP
#define CDARP_SCHEDULE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdarp/model.hpp"

namespace cdarp {

// Ordered visits of one vehicle; depots are implicit endpoints.
struct Route {
  int vehicle = 0;          // vehicle id
  std::vector<int> visits;  // node ids, pickups and drops only
};

struct RouteSchedule {
  std::vector<Seconds> service_start;  // u_i per visit, same order as Route::visits
  std::vector<int> load_after;         // w_i per visit
  Seconds depot_departure = 0;         // u at h'
  Seconds depot_arrival = 0;           // u at h''
  Seconds duration = 0;
  // (request id, ride time) for every request served by the route
  std::vector<std::pair<int, Seconds>> ride_times;
};

enum class ConstraintClass { Window, RideTime, Capacity, Duration, Structure };

struct Infeasibility {
  ConstraintClass which = ConstraintClass::Structure;
  int node = -1;     // offending node id, when applicable
  int request = -1;  // offending request id, when applicable
  std::string describe() const;
};

struct ScheduleResult {
  bool feasible = false;
  RouteSchedule schedule;
  Infeasibility reason;
};

// Forward-pass schedule evaluation with slack-based delays: earliest pass,
// delay the depot departure by the forward time slack to shrink duration,
// then delay the pickups of ride-time-violating requests by their forward
// slack; infeasible only if a violation persists. Deterministic, integral.
ScheduleResult earliest_schedule(const Instance& inst, const Route& route);

// Reusable evaluator; keeps scratch buffers so hot loops do not allocate.
class ScheduleEvaluator {
 public:
  explicit ScheduleEvaluator(const Instance& inst) : inst_(inst) {}

  // visits are node ids; vehicle_idx indexes Instance::vehicles.
  bool evaluate(int vehicle_idx, std::span<const int> visits, RouteSchedule* out, Infeasibility* why);
  bool feasible(int vehicle_idx, std::span<const int> visits) { return evaluate(vehicle_idx, visits, nullptr, nullptr); }

 private:
  const Instance& inst_;
  std::vector<Seconds> arrive_, begin_, depart_, wait_;
  std::vector<int> pickup_pos_;
};

struct Solution {
  std::vector<Route> routes;  // exactly one per vehicle, aligned with Instance::vehicles
};

Solution empty_solution(const Instance& inst);

// Sum of c_ij over all traversed arcs, depot legs included.
Cost solution_cost(const Instance& inst, const Solution& sol);
Cost route_cost(const Instance& inst, int vehicle_idx, std::span<const int> visits);

struct CompanyBalance {
  int company = 0;       // company id
  Seconds s = 0;         // time balance S_m
  std::int64_t u = 0;    // customer balance U_m
};

// S_m = sum of t_c over acquired requests minus sum over conceded requests;
// U_m analogously with p_c. Zero-sum across companies.
std::vector<CompanyBalance> balances(const Instance& inst, const Solution& sol);

// Feasibility report: empty iff routes schedulable, coverage exact, locks
// respected and the mode's balance constraints hold.
std::vector<Violation> check_solution(const Instance& inst, const Solution& sol, const BalanceSpec& spec);

struct Insertion {
  int pickup_pos = 0;  // index of the pickup in the new visit list
  int drop_pos = 0;    // index of the drop in the new visit list
  Cost delta = 0;
};

// Best feasible (pickup, drop) insertion positions by delta cost; ties go to
// the earliest pickup position, then the earliest drop position.
std::optional<Insertion> try_insert(const Instance& inst, const Route& route, int request_id);
std::optional<Insertion> try_insert(const Instance& inst, ScheduleEvaluator& eval, int vehicle_idx,
                                    std::span<const int> visits, int request_idx);

// Minimum time between departure at the first node and service start at the
// last node of a fixed visit sequence with a free start, subject to windows,
// chain consistency and the per-request ride-time caps. Capacity and depots
// are not considered. nullopt when the sequence admits no feasible timing.
// Exact (difference-constraint reduction), used by the closeness measure.
std::optional<Seconds> min_sequence_time(const Instance& inst, std::span<const int> visits);

}  // namespace cdarp

#endif
