#include "cdarp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace cdarp {

const char* to_string(Backend b) { return b == Backend::Alns ? "alns" : "oracle"; }

std::optional<Backend> backend_from_string(const std::string& s) {
  if (s == "alns") return Backend::Alns;
  if (s == "oracle") return Backend::Oracle;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Solution solve_with_backend(const Instance& inst, const BalanceSpec& spec, Backend backend, const AlnsParams& params,
                            const EnumerationBudget& budget, ExactSolver* shared_oracle,
                            std::optional<AlnsStats>* stats_out) {
  if (backend == Backend::Oracle) {
    ExactSolver local(inst, budget);
    ExactSolver& solver = shared_oracle ? *shared_oracle : local;
    const ExactResult res = solver.solve(spec);
    if (res.status == ExactStatus::BudgetExceeded) throw ModelError("instance exceeds the oracle enumeration budget");
    if (res.status == ExactStatus::Infeasible) throw InfeasibleError("model is infeasible");
    return res.solution;
  }
  const MeasureTable table = MeasureTable::build(inst);
  const auto initial = construct_initial(inst, spec, params.seed, &table);
  if (!initial) throw InfeasibleError("no feasible starting solution found for the mode");
  AlnsResult res = run_alns(inst, spec, params, *initial, &table);
  if (stats_out) *stats_out = std::move(res.stats);
  return std::move(res.best);
}

}  // namespace

SolveOutcome cmd_solve(const Instance& inst, const SolveOptions& options) {
  const auto t0 = Clock::now();
  SolveOutcome out;
  std::optional<AlnsStats> stats;
  ExactSolver oracle(inst, options.budget);
  out.solution = solve_with_backend(inst, options.spec, options.backend, options.params, options.budget,
                                    options.backend == Backend::Oracle ? &oracle : nullptr, &stats);
  out.cost = solution_cost(inst, out.solution);
  out.stats = std::move(stats);
  out.company_balances = balances(inst, out.solution);

  if (options.compute_nc_reference && options.spec.mode != BalanceMode::NC) {
    BalanceSpec nc = options.spec;
    nc.mode = BalanceMode::NC;
    nc.offsets.clear();
    try {
      const Solution ref = solve_with_backend(inst, nc, options.backend, options.params, options.budget,
                                              options.backend == Backend::Oracle ? &oracle : nullptr, nullptr);
      out.nc_cost = solution_cost(inst, ref);
      if (*out.nc_cost > 0)
        out.sav_pct = 100.0 * static_cast<double>(*out.nc_cost - out.cost) / static_cast<double>(*out.nc_cost);
    } catch (const InfeasibleError&) {
      // NC may be infeasible (locks); the mode cost stands on its own then.
    }
  } else if (options.spec.mode == BalanceMode::NC) {
    out.nc_cost = out.cost;
    out.sav_pct = 0.0;
  }
  out.runtime_s = seconds_since(t0);
  return out;
}

std::string rank_string(std::span<const std::int64_t> hits) {
  static const char* numerals[] = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII"};
  std::string out;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    int rank = 0;
    for (std::size_t j = 0; j < hits.size(); ++j)
      if (hits[j] > hits[i] || (hits[j] == hits[i] && j < i)) ++rank;
    if (!out.empty()) out += ' ';
    out += numerals[rank];
  }
  return out;
}

namespace {

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

struct BalanceSummary {
  double s_bar = 0, u_bar = 0;
  Seconds s_hat = 0;
  std::int64_t u_hat = 0;
};

BalanceSummary summarize(const std::vector<CompanyBalance>& bal) {
  BalanceSummary s;
  if (bal.empty()) return s;
  for (const auto& b : bal) {
    s.s_bar += static_cast<double>(b.s < 0 ? -b.s : b.s);
    s.u_bar += static_cast<double>(b.u < 0 ? -b.u : b.u);
    s.s_hat = std::max(s.s_hat, b.s < 0 ? -b.s : b.s);
    s.u_hat = std::max(s.u_hat, b.u < 0 ? -b.u : b.u);
  }
  s.s_bar /= static_cast<double>(bal.size());
  s.u_bar /= static_cast<double>(bal.size());
  return s;
}

// Lazily computed, thread-shared values keyed by K.
template <typename K, typename V>
class Memo {
 public:
  template <typename F>
  V get(const K& key, F&& compute) {
    std::shared_future<V> fut;
    bool creator = false;
    std::promise<V> promise;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = map_.find(key);
      if (it == map_.end()) {
        creator = true;
        fut = promise.get_future().share();
        map_.emplace(key, fut);
      } else {
        fut = it->second;
      }
    }
    if (creator) {
      try {
        promise.set_value(compute());
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return fut.get();
  }

 private:
  std::mutex mu_;
  std::map<K, std::shared_future<V>> map_;
};

}  // namespace

void cmd_benchmark(const BenchmarkConfig& config, std::ostream& csv) {
  struct Row {
    int instance_idx;
    BalanceMode mode;
    double alpha;
    std::uint64_t seed;
  };

  std::vector<Instance> instances;
  std::vector<MeasureTable> tables;
  std::vector<std::unique_ptr<ExactSolver>> oracles;
  for (const auto& path : config.instance_paths) {
    instances.push_back(read_instance(path));
    tables.push_back(MeasureTable::build(instances.back()));
    oracles.push_back(std::make_unique<ExactSolver>(instances.back(), config.budget));
  }

  std::vector<Row> rows;
  for (int ii = 0; ii < static_cast<int>(instances.size()); ++ii)
    for (const BalanceMode mode : config.modes) {
      // NC and UC have no balance rows, so alpha does not apply
      const bool alpha_free = mode == BalanceMode::NC || mode == BalanceMode::UC;
      const std::size_t alpha_count = alpha_free ? 1 : std::max<std::size_t>(1, config.alphas.size());
      for (std::size_t ai = 0; ai < alpha_count; ++ai) {
        const double alpha = alpha_free || config.alphas.empty() ? 0.0 : config.alphas[ai];
        for (const std::uint64_t seed : config.seeds) rows.push_back(Row{ii, mode, alpha, seed});
      }
    }

  auto spec_for = [&](BalanceMode mode, double alpha) {
    BalanceSpec spec;
    spec.mode = mode;
    spec.alpha_t = Rat::from_double(alpha);
    spec.alpha_c = Rat::from_double(alpha);
    return spec;
  };

  struct RowOut {
    std::string text;
  };
  std::vector<RowOut> outputs(rows.size());

  // (instance, seed) -> NC cost with the configured backend
  Memo<std::pair<int, std::uint64_t>, Cost> nc_cache;
  // (instance, mode, alpha-in-millionths) -> oracle optimum, -1 when over budget
  Memo<std::tuple<int, int, std::int64_t>, Cost> opt_cache;
  std::mutex oracle_mu;  // ExactSolver::solve mutates its cache lazily

  auto oracle_opt = [&](int ii, BalanceMode mode, double alpha) -> Cost {
    return opt_cache.get({ii, static_cast<int>(mode), static_cast<std::int64_t>(std::llround(alpha * 1e6))}, [&] {
      std::lock_guard<std::mutex> lock(oracle_mu);
      const ExactResult res = oracles[ii]->solve(spec_for(mode, alpha));
      if (res.status != ExactStatus::Optimal) return Cost{-1};
      return res.cost;
    });
  };

  auto nc_cost_for = [&](int ii, std::uint64_t seed) -> Cost {
    return nc_cache.get({ii, seed}, [&]() -> Cost {
      if (config.backend == Backend::Oracle) {
        const Cost c = oracle_opt(ii, BalanceMode::NC, 0.0);
        if (c < 0) throw ModelError("NC reference exceeds the oracle budget");
        return c;
      }
      AlnsParams params = config.params;
      params.seed = seed;
      const auto initial = construct_initial(instances[ii], spec_for(BalanceMode::NC, 0), seed, &tables[ii]);
      if (!initial) throw InfeasibleError("no NC starting solution");
      return run_alns(instances[ii], spec_for(BalanceMode::NC, 0), params, *initial, &tables[ii]).best_cost;
    });
  };

  auto run_row = [&](const Row& row) -> std::string {
    const Instance& inst = instances[row.instance_idx];
    std::ostringstream line;
    line << config.instance_paths[row.instance_idx] << ',' << to_string(row.mode) << ',' << fmt(row.alpha, 2) << ','
         << fmt(row.alpha, 2) << ',' << row.seed << ',' << to_string(config.backend) << ',';
    const auto t0 = Clock::now();
    try {
      const BalanceSpec spec = spec_for(row.mode, row.alpha);
      Cost cost = 0;
      std::optional<AlnsStats> stats;
      if (config.backend == Backend::Oracle) {
        const Cost c = oracle_opt(row.instance_idx, row.mode, row.alpha);
        if (c < 0) throw ModelError("instance exceeds the oracle enumeration budget");
        cost = c;
        BalanceSummary bs;
        {
          // rebuild the solution for the balance columns
          std::lock_guard<std::mutex> lock(oracle_mu);
          const ExactResult res = oracles[row.instance_idx]->solve(spec);
          if (res.status == ExactStatus::Infeasible) throw InfeasibleError("infeasible");
          bs = summarize(balances(inst, res.solution));
        }
        const Cost nc = nc_cost_for(row.instance_idx, row.seed);
        const double sav = nc > 0 ? 100.0 * static_cast<double>(nc - cost) / static_cast<double>(nc) : 0.0;
        line << "ok," << cost << ',' << nc << ',' << fmt(sav) << ',' << cost << ',' << fmt(0.0) << ','
             << fmt(bs.s_bar) << ',' << bs.s_hat << ',' << fmt(bs.u_bar) << ',' << bs.u_hat << ",0,0";
        for (int i = 0; i < kDestroyOps + kRepairOps; ++i) line << ",0";
        line << ",,";
      } else {
        AlnsParams params = config.params;
        params.seed = row.seed;
        const auto initial = construct_initial(inst, spec, row.seed, &tables[row.instance_idx]);
        if (!initial) throw InfeasibleError("no feasible starting solution");
        AlnsResult res = run_alns(inst, spec, params, *initial, &tables[row.instance_idx]);
        cost = res.best_cost;
        const auto bal = balances(inst, res.best);
        const auto bs = summarize(bal);
        const Cost nc = nc_cost_for(row.instance_idx, row.seed);
        const double sav = nc > 0 ? 100.0 * static_cast<double>(nc - cost) / static_cast<double>(nc) : 0.0;
        const Cost opt = row.mode == BalanceMode::NC ? nc : oracle_opt(row.instance_idx, row.mode, row.alpha);
        line << "ok," << cost << ',' << nc << ',' << fmt(sav) << ',';
        if (opt >= 0)
          line << opt << ',' << fmt(opt > 0 ? 100.0 * static_cast<double>(cost - opt) / static_cast<double>(opt) : 0.0);
        else
          line << ',';  // no oracle optimum: GAP stays empty, never estimated
        line << ',' << fmt(bs.s_bar) << ',' << bs.s_hat << ',' << fmt(bs.u_bar) << ',' << bs.u_hat << ','
             << res.stats.iterations << ',' << res.stats.improvements;
        for (const auto h : res.stats.destroy_hits) line << ',' << h;
        for (const auto h : res.stats.repair_hits) line << ',' << h;
        line << ',' << rank_string(res.stats.destroy_hits) << ',' << rank_string(res.stats.repair_hits);
      }
    } catch (const std::exception& e) {
      std::string what = e.what();
      for (char& ch : what)
        if (ch == ',' || ch == '\n') ch = ';';
      line << "error:" << what << ",,,,,,,,,,,,";
      for (int i = 0; i < kDestroyOps + kRepairOps + 1; ++i) line << ',';
    }
    line << ',' << (config.timing ? fmt(seconds_since(t0), 3) : "");
    return line.str();
  };

  const int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(rows.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) outputs[i].text = run_row(rows[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= rows.size()) return;
          outputs[i].text = run_row(rows[i]);
        }
      });
    for (auto& th : pool) th.join();
  }

  csv << "instance,mode,alpha_t,alpha_c,seed,backend,status,cost,nc_cost,sav_pct,opt_cost,gap_pct,"
         "s_bar,s_hat,u_bar,u_hat,iterations,improvements,"
         "hits_destroy_random,hits_destroy_worst,hits_destroy_related,hits_destroy_proximity,"
         "hits_destroy_closeness,hits_destroy_interchangeability,"
         "hits_repair_best,hits_repair_regret2,hits_repair_regret3,hits_repair_regret4,hits_repair_closeness,"
         "destroy_ranks,repair_ranks,runtime_s\n";
  for (const auto& out : outputs) csv << out.text << '\n';
}

MultidayResult cmd_multiday(const MultidayConfig& config, std::ostream& csv) {
  MultidayResult result;
  csv << "day,company,mode,alpha_t,alpha_c,seed,backend,cost,nc_cost,sav_pct,s,u,s_prime,u_prime,"
         "s_total,u_total,s_tilde,u_tilde\n";

  std::vector<CompanyOffset> carried;  // empty on day 1: no memory
  for (std::size_t d = 0; d < config.day_paths.size(); ++d) {
    Instance inst;
    try {
      inst = read_instance(config.day_paths[d]);
    } catch (const std::exception& e) {
      result.error = e.what();
      return result;
    }

    SolveOptions options;
    options.spec.mode = config.mode;
    options.spec.alpha_t = Rat::from_double(config.alpha_t);
    options.spec.alpha_c = Rat::from_double(config.alpha_c);
    options.spec.offsets = carried;
    options.backend = config.backend;
    options.params = config.params;
    options.params.seed = config.seed + d;
    options.budget = config.budget;

    MultidayDayReport report;
    report.day = static_cast<int>(d) + 1;
    report.offsets_in = carried;
    try {
      const SolveOutcome out = cmd_solve(inst, options);
      report.cost = out.cost;
      report.nc_cost = out.nc_cost;
      report.sav_pct = out.sav_pct;
      report.balance = out.company_balances;
      if (!config.out_dir.empty()) {
        SolutionFile file;
        file.solution = out.solution;
        file.spec = options.spec;
        file.cost = out.cost;
        file.backend = to_string(config.backend);
        file.rng_seed = options.params.seed;
        file.stats = out.stats;
        write_solution(inst, file, config.out_dir + "/day" + std::to_string(report.day) + ".solution.json");
      }
    } catch (const std::exception& e) {
      result.error = "day " + std::to_string(report.day) + ": " + e.what();
      return result;  // abort, partial chain already reported
    }

    // next-day memory: literal reading carries S_m of today only;
    // --accumulate keeps the running ledger S_m + S'_m instead
    std::vector<CompanyOffset> next;
    const auto thresholds = compute_thresholds(inst, options.spec);
    for (const auto& b : report.balance) {
      const auto in = options.spec.offset_for(b.company);
      CompanyOffset o;
      o.company = b.company;
      o.s_prime = config.accumulate ? b.s + in.s_prime : b.s;
      o.u_prime = config.accumulate ? b.u + in.u_prime : b.u;
      next.push_back(o);
    }
    report.offsets_out = next;

    for (std::size_t m = 0; m < report.balance.size(); ++m) {
      const auto& b = report.balance[m];
      const auto in = options.spec.offset_for(b.company);
      csv << report.day << ',' << b.company << ',' << to_string(config.mode) << ',' << fmt(config.alpha_t, 2) << ','
          << fmt(config.alpha_c, 2) << ',' << config.seed << ',' << to_string(config.backend) << ',' << report.cost
          << ',';
      if (report.nc_cost) csv << *report.nc_cost;
      csv << ',';
      if (report.sav_pct) csv << fmt(*report.sav_pct);
      csv << ',' << b.s << ',' << b.u << ',' << in.s_prime << ',' << in.u_prime << ',' << (b.s + in.s_prime) << ','
          << (b.u + in.u_prime) << ',' << fmt(thresholds[m].s_tilde.value(), 4) << ',' << thresholds[m].u_tilde
          << '\n';
    }

    result.days.push_back(std::move(report));
    carried = std::move(next);
  }
  result.completed = true;
  return result;
}

}  // namespace cdarp
