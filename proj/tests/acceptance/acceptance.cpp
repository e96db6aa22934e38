// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavy statistical checks run on freshly generated
// instances; everything is seeded and deterministic.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cdarp/alns.hpp"
#include "cdarp/bench.hpp"
#include "cdarp/exact.hpp"
#include "cdarp/generate.hpp"
#include "cdarp/io.hpp"
#include "cdarp/lp.hpp"
#include "cdarp/measures.hpp"
#include "cdarp/rng.hpp"
#include "support/oracles.hpp"

using namespace cdarp;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("CRITERION %d %s: %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void report_skip(int criterion, const std::string& detail) {
  std::printf("CRITERION %d SKIP (warning): %s\n", criterion, detail.c_str());
  std::fflush(stdout);
}

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name) {
    dir = fs::current_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  std::string file(const std::string& name) const { return (dir / name).string(); }
};

template <typename Task>
void parallel_for(const std::vector<Task>& tasks, int workers) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      tasks[i]();
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

BalanceSpec make_spec(BalanceMode mode, double alpha) {
  BalanceSpec spec;
  spec.mode = mode;
  spec.alpha_t = Rat::from_double(alpha);
  spec.alpha_c = Rat::from_double(alpha);
  return spec;
}

GenParams oracle_scale_params(int requests_per_company) {
  GenParams p = group_params('A');
  p.requests_per_company = requests_per_company;
  return p;
}

// ---------------------------------------------------------------- criteria 1-3

struct OracleSet {
  std::vector<Instance> instances;
  std::vector<std::unique_ptr<ExactSolver>> solvers;
  // cost[instance][mode key]
  std::vector<std::map<std::string, Cost>> costs;
};

std::string mode_key(BalanceMode mode, double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s@%.2f", to_string(mode), alpha);
  return buf;
}

OracleSet build_oracle_set(int count) {
  OracleSet set;
  const EnumerationBudget budget{6, 2, 64, 300.0};
  for (int i = 0; i < count; ++i) {
    // per-company demand of 2 or 3 requests, within the oracle budget
    const int rpc = i % 3 == 0 ? 2 : 3;
    set.instances.push_back(generate(oracle_scale_params(rpc), 1000 + i));
  }
  for (auto& inst : set.instances) set.solvers.push_back(std::make_unique<ExactSolver>(inst, budget));
  set.costs.resize(set.instances.size());

  std::vector<std::function<void()>> tasks;
  for (std::size_t i = 0; i < set.instances.size(); ++i)
    tasks.push_back([&set, i] {
      auto solve = [&](BalanceMode mode, double alpha) {
        const auto res = set.solvers[i]->solve(make_spec(mode, alpha));
        if (res.status == ExactStatus::Optimal) set.costs[i][mode_key(mode, alpha)] = res.cost;
      };
      solve(BalanceMode::NC, 0);
      solve(BalanceMode::UC, 0);
      for (double alpha : {0.1, 0.2, 0.3})
        for (BalanceMode mode : {BalanceMode::T, BalanceMode::C, BalanceMode::TC}) solve(mode, alpha);
    });
  parallel_for(tasks, 2);
  return set;
}

void criterion_1(const OracleSet& set, Workspace& ws) {
  struct Run {
    std::size_t instance;
    BalanceMode mode;
    double alpha;
    std::uint64_t seed;
    Cost best = -1;
    double runtime = 0;
    bool ok = false;
  };
  std::vector<Run> runs;
  const std::vector<std::pair<BalanceMode, double>> modes{
      {BalanceMode::UC, 0.0}, {BalanceMode::T, 0.2}, {BalanceMode::C, 0.2}, {BalanceMode::TC, 0.2}};
  for (std::size_t i = 0; i < set.instances.size(); ++i)
    for (const auto& [mode, alpha] : modes)
      for (std::uint64_t seed = 1; seed <= 30; ++seed) runs.push_back(Run{i, mode, alpha, seed});

  std::vector<MeasureTable> tables;
  tables.reserve(set.instances.size());
  for (const auto& inst : set.instances) tables.push_back(MeasureTable::build(inst));

  std::vector<std::function<void()>> tasks;
  for (auto& run : runs)
    tasks.push_back([&set, &tables, &run] {
      const Instance& inst = set.instances[run.instance];
      const BalanceSpec spec = make_spec(run.mode, run.alpha);
      AlnsParams params;  // paper-scale defaults
      params.seed = run.seed;
      params.trace_every = 0;
      const auto t0 = std::chrono::steady_clock::now();
      const auto initial = construct_initial(inst, spec, run.seed, &tables[run.instance]);
      if (!initial) return;
      const auto res = run_alns(inst, spec, params, *initial, &tables[run.instance]);
      run.best = res.best_cost;
      run.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      run.ok = check_solution(inst, res.best, spec).empty();
    });
  parallel_for(tasks, 2);

  std::map<std::string, std::pair<std::int64_t, std::int64_t>> hits;  // mode -> (opt hits, runs)
  std::map<std::string, std::pair<double, std::int64_t>> gaps;       // mode -> (gap sum, runs)
  double max_runtime = 0;
  std::int64_t infeasible_runs = 0;
  for (const auto& run : runs) {
    const auto it = set.costs[run.instance].find(mode_key(run.mode, run.alpha));
    if (it == set.costs[run.instance].end()) continue;  // mode infeasible for this instance
    const Cost opt = it->second;
    max_runtime = std::max(max_runtime, run.runtime);
    const char* mode = to_string(run.mode);
    if (!run.ok || run.best < 0) {
      ++infeasible_runs;
      continue;
    }
    auto& h = hits[mode];
    ++h.second;
    if (run.best == opt) ++h.first;
    auto& g = gaps[mode];
    g.first += opt > 0 ? 100.0 * static_cast<double>(run.best - opt) / static_cast<double>(opt) : 0.0;
    ++g.second;
  }

  bool pass = infeasible_runs == 0 && max_runtime <= 30.0;
  std::ostringstream detail;
  detail << "runs=" << runs.size() << " max_runtime=" << std::fixed << std::setprecision(2) << max_runtime << "s";
  for (const auto& [mode, h] : hits) {
    const double rate = 100.0 * static_cast<double>(h.first) / static_cast<double>(h.second);
    const double mean_gap = gaps[mode].first / static_cast<double>(gaps[mode].second);
    detail << " | " << mode << ": opt " << std::setprecision(1) << rate << "% gap " << std::setprecision(3)
           << mean_gap << "%";
    if (rate < 85.0 || mean_gap > 1.0) pass = false;
  }
  if (infeasible_runs > 0) detail << " | " << infeasible_runs << " runs returned no feasible solution";
  report(1, pass, detail.str());

  // persist a sample of mode-restricted bests for the criterion-4 audit
  int written = 0;
  for (const auto& run : runs) {
    if (run.mode == BalanceMode::UC || run.seed != 1 || run.best < 0) continue;
    const Instance& inst = set.instances[run.instance];
    const BalanceSpec spec = make_spec(run.mode, run.alpha);
    AlnsParams params;
    params.seed = run.seed;
    params.trace_every = 0;
    const auto initial = construct_initial(inst, spec, run.seed, nullptr);
    if (!initial) continue;
    const auto res = run_alns(inst, spec, params, *initial);
    SolutionFile file;
    file.solution = res.best;
    file.spec = spec;
    file.cost = res.best_cost;
    file.backend = "alns";
    file.rng_seed = run.seed;
    write_instance(inst, ws.file("audit_inst_" + std::to_string(written) + ".json"));
    write_solution(inst, file, ws.file("audit_sol_" + std::to_string(written) + ".json"));
    if (++written >= 6) break;
  }
}

void criterion_2(const OracleSet& set) {
  std::int64_t checks = 0, violations = 0, skipped = 0;
  for (std::size_t i = 0; i < set.instances.size(); ++i) {
    const auto& costs = set.costs[i];
    const auto uc = costs.find(mode_key(BalanceMode::UC, 0));
    const auto nc = costs.find(mode_key(BalanceMode::NC, 0));
    if (uc == costs.end() || nc == costs.end()) {
      ++skipped;
      continue;
    }
    for (double alpha : {0.1, 0.2, 0.3}) {
      const auto t = costs.find(mode_key(BalanceMode::T, alpha));
      const auto c = costs.find(mode_key(BalanceMode::C, alpha));
      const auto tc = costs.find(mode_key(BalanceMode::TC, alpha));
      if (t == costs.end() || c == costs.end() || tc == costs.end()) {
        ++skipped;
        continue;
      }
      ++checks;
      if (!(uc->second <= t->second)) ++violations;
      if (!(uc->second <= c->second)) ++violations;
      if (!(t->second <= tc->second)) ++violations;
      if (!(c->second <= tc->second)) ++violations;
      if (!(tc->second <= nc->second)) ++violations;
    }
  }
  std::ostringstream detail;
  detail << checks << " instance-alpha chains checked, " << violations << " violations, " << skipped
         << " skipped (mode infeasible)";
  report(2, checks > 0 && violations == 0, detail.str());
}

void criterion_3(const OracleSet& set) {
  std::int64_t checks = 0, violations = 0;
  for (std::size_t i = 0; i < set.instances.size(); ++i) {
    for (BalanceMode mode : {BalanceMode::T, BalanceMode::C, BalanceMode::TC}) {
      Cost prev = -1;
      for (double alpha : {0.1, 0.2, 0.3}) {
        const auto it = set.costs[i].find(mode_key(mode, alpha));
        if (it == set.costs[i].end()) {
          prev = -1;
          continue;
        }
        if (prev >= 0) {
          ++checks;
          if (it->second > prev) ++violations;
        }
        prev = it->second;
      }
    }
  }
  std::ostringstream detail;
  detail << checks << " adjacent alpha pairs checked, " << violations << " violations";
  report(3, checks > 0 && violations == 0, detail.str());
}

// ------------------------------------------------------------------ criterion 4

// independent audit: read instance + solution from disk, recompute balances
// from the visit lists, re-derive thresholds, check |S + S'| <= S~ and the
// customer analogue
bool audit_solution_file(const std::string& instance_path, const std::string& solution_path, std::string& why) {
  const Instance inst = read_instance(instance_path);
  const SolutionFile file = read_solution(inst, solution_path);
  const auto bal = cdarp::testing::recompute_balances(inst, file.solution);
  const auto thresholds = compute_thresholds(inst, file.spec);
  for (std::size_t m = 0; m < bal.size(); ++m) {
    const auto off = file.spec.offset_for(bal[m].company);
    if (file.spec.checks_time() && !abs_within(bal[m].s + off.s_prime, thresholds[m].s_tilde)) {
      why = "time balance violated for company " + std::to_string(bal[m].company) + " in " + solution_path;
      return false;
    }
    if (file.spec.checks_customers()) {
      const std::int64_t total = bal[m].u + off.u_prime;
      if ((total < 0 ? -total : total) > thresholds[m].u_tilde) {
        why = "customer balance violated for company " + std::to_string(bal[m].company) + " in " + solution_path;
        return false;
      }
    }
  }
  return true;
}

void criterion_4(Workspace& ws) {
  std::string why;
  int audited = 0;
  bool pass = true;

  // sampled criterion-1 solutions
  for (int i = 0; i < 16; ++i) {
    const std::string ip = ws.file("audit_inst_" + std::to_string(i) + ".json");
    const std::string sp = ws.file("audit_sol_" + std::to_string(i) + ".json");
    if (!fs::exists(ip) || !fs::exists(sp)) continue;
    ++audited;
    if (!audit_solution_file(ip, sp, why)) {
      pass = false;
      break;
    }
  }

  // 7-day chained runs in T and TC
  const GenParams params = oracle_scale_params(3);
  for (const auto& [mode, alpha, seed] :
       std::vector<std::tuple<BalanceMode, double, std::uint64_t>>{{BalanceMode::T, 0.1, 52},
                                                                   {BalanceMode::TC, 0.3, 52}}) {
    if (!pass) break;
    const auto days = generate_days(params, seed, 7);
    MultidayConfig config;
    const std::string tag = std::string(to_string(mode));
    for (std::size_t d = 0; d < days.size(); ++d) {
      const std::string path = ws.file(tag + "_day" + std::to_string(d + 1) + ".json");
      write_instance(days[d], path);
      config.day_paths.push_back(path);
    }
    config.mode = mode;
    config.alpha_t = alpha;
    config.alpha_c = alpha;
    config.backend = Backend::Oracle;
    config.budget = EnumerationBudget{6, 2, 64, 300.0};
    fs::create_directories(ws.file(tag + "_solutions"));
    config.out_dir = ws.file(tag + "_solutions");
    std::ostringstream csv;
    const auto result = cmd_multiday(config, csv);
    if (!result.completed) {
      pass = false;
      why = "multiday chain aborted: " + result.error;
      break;
    }
    // audit every day from the files, and cross-check the chained offsets
    std::vector<CompanyBalance> prev_balance;
    for (std::size_t d = 0; d < days.size(); ++d) {
      ++audited;
      const std::string sp = config.out_dir + "/day" + std::to_string(d + 1) + ".solution.json";
      if (!audit_solution_file(config.day_paths[d], sp, why)) {
        pass = false;
        break;
      }
      const Instance inst = read_instance(config.day_paths[d]);
      const SolutionFile file = read_solution(inst, sp);
      if (d > 0) {
        for (const auto& b : prev_balance) {
          if (file.spec.offset_for(b.company).s_prime != b.s ||
              file.spec.offset_for(b.company).u_prime != b.u) {
            pass = false;
            why = "day " + std::to_string(d + 1) + " offsets disagree with the audited day " + std::to_string(d) +
                  " balances";
          }
        }
      }
      prev_balance = cdarp::testing::recompute_balances(inst, file.solution);
    }
  }

  std::ostringstream detail;
  detail << audited << " solution files audited from disk";
  if (!pass) detail << "; " << why;
  report(4, pass && audited >= 18, detail.str());
}

// ------------------------------------------------------------------ criterion 5

void criterion_5() {
  const int batch = 28;
  std::vector<Instance> instances;
  for (int i = 0; i < batch; ++i) instances.push_back(generate(group_params('A'), 9000 + i));
  std::vector<MeasureTable> tables;
  for (const auto& inst : instances) tables.push_back(MeasureTable::build(inst));

  struct Cell {
    Cost nc = -1, uc = -1, t = -1, c = -1, tc = -1;
  };
  std::vector<Cell> cells(batch);
  std::vector<std::function<void()>> tasks;
  for (int i = 0; i < batch; ++i)
    tasks.push_back([&instances, &tables, &cells, i] {
      auto run = [&](BalanceMode mode, double alpha) -> Cost {
        const BalanceSpec spec = make_spec(mode, alpha);
        AlnsParams params;
        params.seed = 1;
        params.trace_every = 0;
        const auto initial = construct_initial(instances[i], spec, 1, &tables[i]);
        if (!initial) return -1;
        return run_alns(instances[i], spec, params, *initial, &tables[i]).best_cost;
      };
      cells[i].nc = run(BalanceMode::NC, 0);
      cells[i].uc = run(BalanceMode::UC, 0);
      cells[i].t = run(BalanceMode::T, 0.3);
      cells[i].c = run(BalanceMode::C, 0.3);
      cells[i].tc = run(BalanceMode::TC, 0.3);
    });
  parallel_for(tasks, 2);

  auto mean_sav = [&](Cost Cell::* member) {
    double sum = 0;
    int n = 0;
    for (const auto& cell : cells) {
      if (cell.nc <= 0 || cell.*member < 0) continue;
      sum += 100.0 * static_cast<double>(cell.nc - cell.*member) / static_cast<double>(cell.nc);
      ++n;
    }
    return n > 0 ? sum / n : 0.0;
  };

  const double sav_uc = mean_sav(&Cell::uc);
  const double sav_t = mean_sav(&Cell::t);
  const double sav_c = mean_sav(&Cell::c);
  const double sav_tc = mean_sav(&Cell::tc);

  bool pass = sav_uc > 0;
  std::ostringstream detail;
  detail << std::fixed << std::setprecision(2) << "mean SAV: UC " << sav_uc << "% T " << sav_t << "% C " << sav_c
         << "% TC " << sav_tc << "% (alpha = 0.3)";
  if (sav_uc >= 5.0) {
    for (double s : {sav_t, sav_c, sav_tc})
      if (sav_uc - s > 3.0) pass = false;
  } else {
    detail << " [UC saving below 5%: differences reported, not enforced]";
  }
  report(5, pass, detail.str());
}

// ------------------------------------------------------------------ criterion 6

void criterion_6() {
  std::int64_t rounds = 0, violations = 0;
  for (int series = 0; series < 4; ++series) {
    const Instance inst = generate(group_params('A'), 7000 + series);
    const MeasureTable table = MeasureTable::build(inst);
    const BalanceSpec spec = make_spec(series % 2 == 0 ? BalanceMode::UC : BalanceMode::T, 0.3);
    const auto initial = construct_initial(inst, spec, 3, &table);
    if (!initial) continue;
    Solution current = *initial;
    Rng rng(600 + series);
    for (int round = 0; round < 2600; ++round) {
      ++rounds;
      Solution candidate = current;
      std::vector<int> removed;
      const int q = 1 + rng.below(static_cast<int>(inst.requests.size()));
      destroy(static_cast<DestroyOp>(rng.below(kDestroyOps)), inst, table, candidate, removed, q, rng);
      if (static_cast<int>(removed.size()) != q) ++violations;
      if (repair(static_cast<RepairOp>(rng.below(kRepairOps)), inst, table, spec, candidate, removed, rng)) {
        const auto route_of = route_assignment(inst, candidate);
        for (int r : route_of)
          if (r < 0) ++violations;  // conservation of the request multiset
        const auto bal = balances(inst, candidate);
        Seconds s_sum = 0;
        std::int64_t u_sum = 0;
        for (const auto& b : bal) {
          s_sum += b.s;
          u_sum += b.u;
        }
        if (s_sum != 0 || u_sum != 0) ++violations;
        current = candidate;
      }
    }
  }

  // monotone best-so-far across full ALNS runs
  const Instance inst = generate(group_params('A'), 7100);
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    const BalanceSpec spec = make_spec(BalanceMode::UC, 0);
    AlnsParams params;
    params.seed = seed;
    params.t_max = 2000;
    const auto initial = construct_initial(inst, spec, seed, nullptr);
    if (!initial) continue;
    const auto res = run_alns(inst, spec, params, *initial);
    for (std::size_t i = 1; i < res.stats.best_trace.size(); ++i)
      if (res.stats.best_trace[i].second > res.stats.best_trace[i - 1].second) ++violations;
  }

  std::ostringstream detail;
  detail << rounds << " destroy/repair rounds, " << violations << " violations";
  report(6, rounds >= 10000 && violations == 0, detail.str());
}

// ------------------------------------------------------------------ criterion 7

std::string g_lp_helper;

void criterion_7(Workspace& ws) {
  if (std::system("python3 -c 'import highspy' >/dev/null 2>&1") != 0) {
    report_skip(7, "no external MILP solver available (python3 highspy not importable); oracle-only suite stands");
    report(7, true, "skipped with warning: external solver unavailable");
    return;
  }

  int checked = 0, mismatches = 0;
  std::string why;
  for (int i = 0; i < 5; ++i) {
    const Instance inst = generate(oracle_scale_params(2), 8800 + i);
    ExactSolver oracle(inst, EnumerationBudget{6, 2, 64, 300.0});
    for (const auto& [mode, alpha] :
         std::vector<std::pair<BalanceMode, double>>{{BalanceMode::UC, 0}, {BalanceMode::T, 0.2}, {BalanceMode::TC, 0.2}}) {
      const BalanceSpec spec = make_spec(mode, alpha);
      const auto exact = oracle.solve(spec);
      if (exact.status != ExactStatus::Optimal) continue;

      const std::string lp_path = ws.file("m" + std::to_string(i) + "_" + to_string(mode) + ".lp");
      const std::string sol_path = lp_path + ".sol";
      write_text_file(lp_path, export_lp(inst, spec));
      const std::string cmd = "python3 '" + g_lp_helper + "' '" + lp_path + "' '" + sol_path + "' >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        why = "external solver failed on " + lp_path;
        ++mismatches;
        break;
      }
      const std::string listing = read_text_file(sol_path);
      double objective = std::numeric_limits<double>::quiet_NaN();
      {
        std::istringstream in(listing);
        std::string hash, word;
        in >> hash >> word >> objective;  // "# objective <value>"
      }
      const Solution imported = import_lp_solution(inst, listing);
      const Cost recomputed = solution_cost(inst, imported);
      ++checked;
      if (recomputed != exact.cost) {
        ++mismatches;
        why = "external optimum " + std::to_string(recomputed) + " != oracle " + std::to_string(exact.cost) + " on " +
              lp_path;
      }
      if (std::abs(static_cast<double>(recomputed) - objective) > 1e-6) {
        ++mismatches;
        why = "imported cost differs from the reported objective on " + lp_path;
      }
      if (!check_solution(inst, imported, spec).empty()) {
        ++mismatches;
        why = "imported solution fails the feasibility check on " + lp_path;
      }
    }
  }
  std::ostringstream detail;
  detail << checked << " instance-mode solves cross-checked, " << mismatches << " mismatches";
  if (!why.empty()) detail << "; " << why;
  report(7, checked >= 15 && mismatches == 0, detail.str());
}

// ------------------------------------------------------------------ criterion 8

void criterion_8() {
  Rng rng(880);
  int checked = 0, mismatches = 0, infeasible_pairs = 0;
  while (checked < 100) {
    std::vector<cdarp::testing::MicroRequest> reqs;
    for (int i = 0; i < 2; ++i) {
      cdarp::testing::MicroRequest r;
      r.owner = 1;
      r.ox = rng.below(25);
      r.oy = rng.below(25);
      r.dx = rng.below(25);
      r.dy = rng.below(25);
      const Seconds start = rng.below(60);
      const Seconds width = 8 + rng.below(30);
      if (rng.below(2) == 0)
        r.pickup = TimeWindow{start, std::min<Seconds>(start + width, 120)};
      else
        r.drop = TimeWindow{start, std::min<Seconds>(start + width, 120)};
      r.pickup.latest = std::min<Seconds>(r.pickup.latest, 120);
      r.drop.latest = std::min<Seconds>(r.drop.latest, 120);
      r.service = rng.below(4);
      r.max_ride = 25 + rng.below(60);
      reqs.push_back(r);
    }
    const Instance inst = cdarp::testing::micro_instance(120, {{0, 0}}, reqs, 1 + rng.below(3), 100000);
    for (const auto [a, b] : {std::pair<int, int>{0, 1}, {1, 0}}) {
      const auto fast = closeness(inst, a, b);
      const auto brute = cdarp::testing::brute_force_closeness(inst, a, b);
      ++checked;
      if (fast.has_value() != brute.has_value() || (fast && *fast != *brute)) ++mismatches;
      if (!fast) {
        ++infeasible_pairs;
        // the table substitutes the cap consistently
        const auto table = MeasureTable::build(inst);
        if (table.close_finite(a, b)) ++mismatches;
        if (table.close(a, b) != table.close_cap()) ++mismatches;
      }
    }
  }
  std::ostringstream detail;
  detail << checked << " pairs checked against six-order integer enumeration, " << mismatches << " mismatches, "
         << infeasible_pairs << " all-infeasible pairs";
  report(8, mismatches == 0 && infeasible_pairs > 0, detail.str());
}

// ------------------------------------------------------------------ criterion 9

std::string g_cli;

int run_cli(const std::string& args) {
  const std::string cmd = "'" + g_cli + "' " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

bool same_file(const std::string& a, const std::string& b) { return read_text_file(a) == read_text_file(b); }

void criterion_9(Workspace& ws) {
  bool pass = true;
  std::string why;
  auto making = [&](const std::string& what, bool ok) {
    if (!ok && pass) {
      pass = false;
      why = what;
    }
  };

  fs::create_directories(ws.file("g1"));
  fs::create_directories(ws.file("g2"));
  making("generate exit", run_cli("generate --group A --seed 5 --out '" + ws.file("g1") + "'") == 0);
  making("generate exit", run_cli("generate --group A --seed 5 --out '" + ws.file("g2") + "'") == 0);
  making("generated instances differ",
         same_file(ws.file("g1/instance_A_seed5.json"), ws.file("g2/instance_A_seed5.json")));

  // small instance for solve/benchmark determinism
  const Instance inst = generate(oracle_scale_params(2), 424242);
  const std::string ip = ws.file("det_inst.json");
  write_instance(inst, ip);

  for (const std::string backend : {"oracle", "alns"}) {
    fs::create_directories(ws.file("s1" + backend));
    fs::create_directories(ws.file("s2" + backend));
    const std::string common = "solve --instance '" + ip + "' --mode t --alpha-t 0.2 --alpha-c 0.2 --seed 3 --backend " +
                               backend + " --out '";
    making("solve exit " + backend, run_cli(common + ws.file("s1" + backend) + "'") == 0);
    making("solve exit " + backend, run_cli(common + ws.file("s2" + backend) + "'") == 0);
    making("solution files differ (" + backend + ")",
           same_file(ws.file("s1" + backend + "/solution_t_seed3.json"),
                     ws.file("s2" + backend + "/solution_t_seed3.json")));
  }

  const std::string bench_common = "benchmark --instance '" + ip +
                                   "' --mode uc --mode t --mode tc --alpha 0.2 --seed 1 --seed 2 "
                                   "--backend alns --workers 2 --out '";
  making("benchmark exit", run_cli(bench_common + ws.file("b1.csv") + "'") == 0);
  making("benchmark exit", run_cli(bench_common + ws.file("b2.csv") + "'") == 0);
  making("benchmark CSVs differ", same_file(ws.file("b1.csv"), ws.file("b2.csv")));

  report(9, pass, pass ? "generate, solve (both backends) and benchmark re-runs are byte-identical"
                       : "determinism broken: " + why);
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") g_cli = argv[i + 1];
    if (flag == "--lp-helper") g_lp_helper = argv[i + 1];
  }

  Workspace ws("acceptance_work");

  OracleSet set = build_oracle_set(50);
  criterion_1(set, ws);
  criterion_2(set);
  criterion_3(set);
  criterion_4(ws);
  criterion_5();
  criterion_6();
  criterion_7(ws);
  criterion_8();
  if (!g_cli.empty()) {
    criterion_9(ws);
  } else {
    report(9, false, "no --cli path provided");
  }

  std::printf("%s\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
  return g_failures == 0 ? 0 : 1;
}
