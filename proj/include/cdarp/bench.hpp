#ifndef CDARP_BENCH_HPP
#define CDARP_BENCH_HPP

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cdarp/alns.hpp"
#include "cdarp/exact.hpp"
#include "cdarp/io.hpp"
#include "cdarp/model.hpp"

namespace cdarp {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Backend { Alns, Oracle };
const char* to_string(Backend b);
std::optional<Backend> backend_from_string(const std::string& s);

struct SolveOptions {
  BalanceSpec spec;
  Backend backend = Backend::Alns;
  AlnsParams params;
  EnumerationBudget budget;
  bool compute_nc_reference = true;
};

struct SolveOutcome {
  Solution solution;
  Cost cost = 0;
  std::optional<Cost> nc_cost;      // same backend and seed
  std::optional<double> sav_pct;    // 100 * (nc - cost) / nc
  std::optional<AlnsStats> stats;   // alns backend only
  std::vector<CompanyBalance> company_balances;
  double runtime_s = 0;
};

// Solves one instance in the requested mode. Throws InfeasibleError when no
// feasible solution exists (oracle) or none could be constructed (alns).
SolveOutcome cmd_solve(const Instance& inst, const SolveOptions& options);

struct BenchmarkConfig {
  std::vector<std::string> instance_paths;
  std::vector<BalanceMode> modes;
  std::vector<double> alphas;         // applied to both alpha_t and alpha_c
  std::vector<std::uint64_t> seeds;
  Backend backend = Backend::Alns;
  AlnsParams params;
  EnumerationBudget budget;
  int workers = 1;
  bool timing = false;  // off by default so re-runs diff clean
};

// One CSV row per (instance, mode, alpha, seed); NC references and oracle
// optima are shared across rows. Row failures are recorded in the status
// column and do not stop the run.
void cmd_benchmark(const BenchmarkConfig& config, std::ostream& csv);

struct MultidayConfig {
  std::vector<std::string> day_paths;  // one instance per day, same companies
  BalanceMode mode = BalanceMode::T;
  double alpha_t = 0;
  double alpha_c = 0;
  std::uint64_t seed = 1;
  Backend backend = Backend::Oracle;
  AlnsParams params;
  EnumerationBudget budget;
  bool accumulate = false;  // S' of day d = S(d-1) + S'(d-1) instead of S(d-1)
  bool timing = false;
  std::string out_dir;  // when set, per-day solution files are written here
};

struct MultidayDayReport {
  int day = 0;
  Cost cost = 0;
  std::optional<Cost> nc_cost;
  std::optional<double> sav_pct;
  std::vector<CompanyBalance> balance;
  std::vector<CompanyOffset> offsets_in;   // S'/U' used on this day
  std::vector<CompanyOffset> offsets_out;  // S'/U' handed to the next day
};

struct MultidayResult {
  std::vector<MultidayDayReport> days;
  bool completed = false;
  std::string error;  // set when the chain aborted
};

// Day 1 runs without memory; day d takes S'_m from S_m of day d-1 (or the
// accumulated ledger with --accumulate). Aborts on the first infeasible day
// and reports the partial chain.
MultidayResult cmd_multiday(const MultidayConfig& config, std::ostream& csv);

// Rank string ("I".."VI" per operator, ties by operator order) for hit counts.
std::string rank_string(std::span<const std::int64_t> hits);

}  // namespace cdarp

#endif
