#ifndef CDARP_EXACT_HPP
#define CDARP_EXACT_HPP

#include <cstdint>
#include <vector>

#include "cdarp/model.hpp"
#include "cdarp/schedule.hpp"

namespace cdarp {

struct EnumerationBudget {
  int max_requests = 5;
  int max_vehicles = 2;
  int max_nodes = 64;
  double time_limit_s = 120.0;
};

enum class ExactStatus { Optimal, Infeasible, BudgetExceeded };

struct ExactResult {
  ExactStatus status = ExactStatus::BudgetExceeded;
  Solution solution;
  Cost cost = 0;
};

// Exhaustive solver for desk-scale instances. Enumerates every
// request-to-vehicle assignment (locks and NC respected, balance thresholds
// applied per assignment) over minimum-cost feasible visit orders, which are
// enumerated once per (vehicle, request subset) and shared across modes.
class ExactSolver {
 public:
  explicit ExactSolver(const Instance& inst, EnumerationBudget budget = {});

  ExactResult solve(const BalanceSpec& spec);

 private:
  bool ensure_cache();  // false when the budget was exceeded

  const Instance& inst_;
  EnumerationBudget budget_;
  bool cache_ready_ = false;
  bool cache_failed_ = false;
  static constexpr Cost kNoRoute = -1;
  // indexed [vehicle][subset mask]
  std::vector<std::vector<Cost>> best_cost_;
  std::vector<std::vector<std::vector<int>>> best_visits_;
};

ExactResult solve_exact(const Instance& inst, const BalanceSpec& spec, const EnumerationBudget& budget = {});

}  // namespace cdarp

#endif
