#ifndef CDARP_ALNS_HPP
#define CDARP_ALNS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cdarp/measures.hpp"
#include "cdarp/model.hpp"
#include "cdarp/rng.hpp"
#include "cdarp/schedule.hpp"

namespace cdarp {

enum class DestroyOp { Random = 0, Worst, Related, Proximity, Closeness, Interchangeability };
enum class RepairOp { Best = 0, Regret2, Regret3, Regret4, Closeness };

inline constexpr int kDestroyOps = 6;
inline constexpr int kRepairOps = 5;

const char* to_string(DestroyOp op);
const char* to_string(RepairOp op);

struct AlnsParams {
  double t_max = 1e4;                // initial temperature; loop stops at <= 1
  double gamma = 0.999;              // cooling multiplier
  int refresh_threshold = 50;        // R: improvements before a score reset
  int q_min = 2;                     // destruction degree bounds
  int q_max = 0;                     // 0 = auto: max(4, ceil(0.4 |C|))
  double reduce_probability = 0.05;  // p: chance to shrink q each iteration
  int enlarge_threshold = 20;        // E: stagnant iterations before growing q
  double score_init = 1.0;
  double score_improve = 1.0;  // sigma added to the drawn operators' scores
  std::uint64_t seed = 1;
  bool accept_vs_current = false;  // classical SA variant: exponent vs cost(x)
  std::int64_t trace_every = 100;  // best-cost trace sampling; 0 disables

  int resolved_q_max(int n_requests) const;
  int resolved_q_min(int n_requests) const;
};

class AlnsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlnsStats {
  std::int64_t iterations = 0;
  std::int64_t improvements = 0;
  std::int64_t accepted = 0;
  std::int64_t repair_failures = 0;
  std::array<std::int64_t, kDestroyOps> destroy_hits{};
  std::array<std::int64_t, kRepairOps> repair_hits{};
  std::vector<std::pair<std::int64_t, Cost>> best_trace;  // (iteration, best cost)
};

struct AlnsResult {
  Solution best;
  Cost best_cost = 0;
  AlnsStats stats;
};

// Roulette-wheel draw: index i with probability score_i / sum(scores).
int select_operator(std::span<const double> scores, Rng& rng);

// Adaptive destruction degree: grow q after E stagnant iterations, then
// shrink with probability p; w resets whenever q changes. Both branches may
// fire in a single call.
void resize_neighborhood(int enlarge_threshold, int& stagnant, int& q, int q_min, int q_max,
                         double reduce_probability, Rng& rng);

// Removes exactly q distinct served requests from sol (their indices are
// appended to removed); remaining routes stay schedulable. Balance is not
// examined on partial solutions.
void destroy(DestroyOp op, const Instance& inst, const MeasureTable& table, Solution& sol, std::vector<int>& removed,
             int q, Rng& rng);

// Reinserts every removed request at its cheapest feasible position over all
// mode-eligible routes, selection order per operator. Returns false (leaving
// sol in an unspecified state) when some request cannot be placed or the
// finished solution fails the mode's feasibility check.
bool repair(RepairOp op, const Instance& inst, const MeasureTable& table, const BalanceSpec& spec, Solution& sol,
            std::vector<int>& removed, Rng& rng);

// Algorithm: simulated-annealing ALNS with roulette operator selection,
// score refresh every R improvements and the adaptive degree of destruction.
// initial must pass check_solution under spec. The measure table may be
// shared across runs; a fresh one is built when absent.
AlnsResult run_alns(const Instance& inst, const BalanceSpec& spec, const AlnsParams& params, const Solution& initial,
                    const MeasureTable* table = nullptr);

// Feasible starting point: greedy own-company insertion (zero balances), with
// seeded retries; when memory offsets already violate the thresholds at zero
// balance, falls back to randomized destroy/repair probes in the given mode.
std::optional<Solution> construct_initial(const Instance& inst, const BalanceSpec& spec, std::uint64_t seed,
                                          const MeasureTable* table = nullptr);

}  // namespace cdarp

#endif
