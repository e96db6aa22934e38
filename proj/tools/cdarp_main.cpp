// Command-line front end. Everything goes through the C API in cdarp.h; the
// solver internals stay behind the shared library boundary.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdarp.h"

namespace {

using nlohmann::json;

int fail(int code) {
  std::cerr << "error: " << cdarp_last_error() << "\n";
  switch (code) {
    case CDARP_ERR_INFEASIBLE: return 2;
    case CDARP_ERR_IO: return 3;
    default: return 1;
  }
}

std::string read_file_or_empty(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(3);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct InstanceHandle {
  cdarp_instance* ptr = nullptr;
  ~InstanceHandle() { cdarp_instance_free(ptr); }
};

struct SolutionHandle {
  cdarp_solution* ptr = nullptr;
  ~SolutionHandle() { cdarp_solution_free(ptr); }
};

json solve_options_json(const std::string& mode, double alpha_t, double alpha_c, const std::string& backend,
                        const std::string& params_path, const std::string& offsets_path,
                        const std::string& budget_path, bool nc_reference, std::uint64_t seed) {
  json options;
  options["mode"] = mode;
  options["alpha_t"] = alpha_t;
  options["alpha_c"] = alpha_c;
  options["backend"] = backend;
  json params = params_path.empty() ? json::object() : json::parse(read_file_or_empty(params_path));
  params["seed"] = seed;
  options["params"] = params;
  if (!budget_path.empty()) options["budget"] = json::parse(read_file_or_empty(budget_path));
  if (!offsets_path.empty()) {
    const json off = json::parse(read_file_or_empty(offsets_path));
    options["offsets"] = off.contains("offsets") ? off.at("offsets") : off;
  }
  options["nc_reference"] = nc_reference;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collaborative dial-a-ride solver suite"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "generate synthetic instances");
  std::string gen_group = "A";
  std::uint64_t gen_seed = 1;
  int gen_days = 1;
  std::string gen_out = ".";
  std::string gen_params_path;
  gen->add_option("--group", gen_group, "size group: A, B, C, D or custom");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--days", gen_days, "number of consecutive days (shared depots)");
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--params", gen_params_path, "generator parameter file (JSON)");

  // ---- validate ----
  auto* validate = app.add_subcommand("validate", "check instance invariants");
  std::string val_instance;
  validate->add_option("--instance", val_instance)->required();

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "solve one instance in one mode");
  std::string sol_instance, sol_mode = "uc", sol_backend = "alns";
  std::string sol_params, sol_offsets, sol_budget, sol_out = ".";
  double sol_alpha_t = 0, sol_alpha_c = 0;
  std::uint64_t sol_seed = 1;
  bool sol_no_nc = false;
  solve->add_option("--instance", sol_instance)->required();
  solve->add_option("--mode", sol_mode, "nc, uc, t, c or tc");
  solve->add_option("--alpha-t", sol_alpha_t);
  solve->add_option("--alpha-c", sol_alpha_c);
  solve->add_option("--seed", sol_seed);
  solve->add_option("--params", sol_params, "ALNS parameter file (JSON)");
  solve->add_option("--budget", sol_budget, "oracle budget file (JSON)");
  solve->add_option("--backend", sol_backend, "alns or oracle");
  solve->add_option("--offsets", sol_offsets, "balance memory offsets file (JSON)");
  solve->add_option("--out", sol_out, "output directory");
  solve->add_flag("--no-nc-ref", sol_no_nc, "skip the NC reference run (no SAV in the summary)");

  // ---- benchmark ----
  auto* bench = app.add_subcommand("benchmark", "experiment matrix, CSV report");
  std::vector<std::string> b_instances;
  std::vector<std::string> b_modes{"uc", "t", "c", "tc"};
  std::vector<double> b_alphas{0.1, 0.2, 0.3};
  std::vector<std::uint64_t> b_seeds{1};
  std::string b_backend = "alns", b_params, b_budget, b_out = "benchmark.csv";
  int b_workers = 1;
  bool b_timing = false;
  bench->add_option("--instance", b_instances, "instance file (repeatable)")->required();
  bench->add_option("--mode", b_modes, "modes to run");
  bench->add_option("--alpha", b_alphas, "alpha values (both alpha_t and alpha_c)");
  bench->add_option("--seed", b_seeds, "seeds");
  bench->add_option("--backend", b_backend);
  bench->add_option("--params", b_params);
  bench->add_option("--budget", b_budget);
  bench->add_option("--out", b_out, "output CSV path");
  bench->add_option("--workers", b_workers);
  bench->add_flag("--timing", b_timing, "fill the runtime column (breaks byte-for-byte reproducibility)");

  // ---- multiday ----
  auto* multi = app.add_subcommand("multiday", "chained balance memory over consecutive days");
  std::vector<std::string> m_days;
  std::string m_mode = "t", m_backend = "oracle", m_params, m_budget, m_out = "multiday.csv", m_soldir;
  double m_alpha_t = 0.1, m_alpha_c = 0.1;
  std::uint64_t m_seed = 1;
  bool m_accumulate = false;
  multi->add_option("--instance", m_days, "day instance files, in order")->required();
  multi->add_option("--mode", m_mode);
  multi->add_option("--alpha-t", m_alpha_t);
  multi->add_option("--alpha-c", m_alpha_c);
  multi->add_option("--seed", m_seed);
  multi->add_option("--backend", m_backend);
  multi->add_option("--params", m_params);
  multi->add_option("--budget", m_budget);
  multi->add_option("--out", m_out, "output CSV path");
  multi->add_option("--solutions", m_soldir, "directory for per-day solution files");
  multi->add_flag("--accumulate", m_accumulate, "carry the cumulative ledger instead of the last day only");

  // ---- export-lp ----
  auto* exp = app.add_subcommand("export-lp", "write the MILP in LP format");
  std::string e_instance, e_mode = "uc", e_offsets, e_out = "model.lp";
  double e_alpha_t = 0, e_alpha_c = 0;
  exp->add_option("--instance", e_instance)->required();
  exp->add_option("--mode", e_mode);
  exp->add_option("--alpha-t", e_alpha_t);
  exp->add_option("--alpha-c", e_alpha_c);
  exp->add_option("--offsets", e_offsets);
  exp->add_option("--out", e_out);

  // ---- import-solution ----
  auto* imp = app.add_subcommand("import-solution", "rebuild a solution from an external LP solve");
  std::string i_instance, i_listing, i_mode = "uc", i_out;
  imp->add_option("--instance", i_instance)->required();
  imp->add_option("--lp-solution", i_listing, "flat `name value` listing")->required();
  imp->add_option("--mode", i_mode, "mode to check the imported solution under");
  imp->add_option("--out", i_out, "write the reconstructed solution file here");

  // ---- audit ----
  auto* audit = app.add_subcommand("audit", "recheck a solution file against its instance");
  std::string a_instance, a_solution;
  audit->add_option("--instance", a_instance)->required();
  audit->add_option("--solution", a_solution)->required();

  // ---- measures ----
  auto* meas = app.add_subcommand("measures", "dump the relatedness/closeness table");
  std::string me_instance, me_out = "measures.csv";
  meas->add_option("--instance", me_instance)->required();
  meas->add_option("--out", me_out);

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    json params = gen_params_path.empty() ? json::object() : json::parse(read_file_or_empty(gen_params_path));
    if (!params.contains("group") && gen_group != "custom") params["group"] = gen_group;
    const std::string params_text = params.dump();
    std::filesystem::create_directories(gen_out);
    for (int day = 0; day < gen_days; ++day) {
      InstanceHandle inst;
      const int rc = gen_days == 1 ? cdarp_instance_generate(params_text.c_str(), gen_seed, &inst.ptr)
                                   : cdarp_instance_generate_day(params_text.c_str(), gen_seed, day, &inst.ptr);
      if (rc != CDARP_OK) return fail(rc);
      std::string path = gen_out + "/instance_" + gen_group + "_seed" + std::to_string(gen_seed);
      if (gen_days > 1) path += "_day" + std::to_string(day + 1);
      path += ".json";
      if (const int wrc = cdarp_instance_write(inst.ptr, path.c_str()); wrc != CDARP_OK) return fail(wrc);
      std::cout << path << "\n";
    }
    return 0;
  }

  if (validate->parsed()) {
    InstanceHandle inst;
    if (const int rc = cdarp_instance_read(val_instance.c_str(), &inst.ptr); rc != CDARP_OK) return fail(rc);
    char* report = nullptr;
    if (const int rc = cdarp_instance_validate(inst.ptr, &report); rc != CDARP_OK) return fail(rc);
    const json rj = json::parse(report);
    cdarp_string_free(report);
    if (rj.empty()) {
      std::cout << "valid\n";
      return 0;
    }
    for (const auto& v : rj) std::cout << v.at("subject").get<std::string>() << ": " << v.at("message").get<std::string>() << "\n";
    return 2;
  }

  if (solve->parsed()) {
    InstanceHandle inst;
    if (const int rc = cdarp_instance_read(sol_instance.c_str(), &inst.ptr); rc != CDARP_OK) return fail(rc);
    const json options = solve_options_json(sol_mode, sol_alpha_t, sol_alpha_c, sol_backend, sol_params, sol_offsets,
                                            sol_budget, !sol_no_nc, sol_seed);
    SolutionHandle sol;
    if (const int rc = cdarp_solve(inst.ptr, options.dump().c_str(), &sol.ptr); rc != CDARP_OK) return fail(rc);
    std::filesystem::create_directories(sol_out);
    const std::string path = sol_out + "/solution_" + sol_mode + "_seed" + std::to_string(sol_seed) + ".json";
    if (const int rc = cdarp_solution_write(inst.ptr, sol.ptr, path.c_str()); rc != CDARP_OK) return fail(rc);

    char* summary = nullptr;
    if (const int rc = cdarp_solution_summary(sol.ptr, &summary); rc != CDARP_OK) return fail(rc);
    const json s = json::parse(summary);
    cdarp_string_free(summary);
    std::cout << "cost=" << s.at("cost").get<long long>();
    if (s.contains("sav_pct")) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.4f", s.at("sav_pct").get<double>());
      std::cout << " sav=" << buf << "%";
    }
    std::cout << " runtime=" << s.at("runtime_s").get<double>() << "s file=" << path << "\n";
    return 0;
  }

  if (bench->parsed()) {
    json config;
    config["instances"] = b_instances;
    config["modes"] = b_modes;
    config["alphas"] = b_alphas;
    config["seeds"] = b_seeds;
    config["backend"] = b_backend;
    if (!b_params.empty()) config["params"] = json::parse(read_file_or_empty(b_params));
    if (!b_budget.empty()) config["budget"] = json::parse(read_file_or_empty(b_budget));
    config["workers"] = b_workers;
    config["timing"] = b_timing;
    if (const int rc = cdarp_benchmark(config.dump().c_str(), b_out.c_str()); rc != CDARP_OK) return fail(rc);
    std::cout << b_out << "\n";
    return 0;
  }

  if (multi->parsed()) {
    json config;
    config["days"] = m_days;
    config["mode"] = m_mode;
    config["alpha_t"] = m_alpha_t;
    config["alpha_c"] = m_alpha_c;
    config["seed"] = m_seed;
    config["backend"] = m_backend;
    if (!m_params.empty()) config["params"] = json::parse(read_file_or_empty(m_params));
    if (!m_budget.empty()) config["budget"] = json::parse(read_file_or_empty(m_budget));
    config["accumulate"] = m_accumulate;
    if (!m_soldir.empty()) {
      std::filesystem::create_directories(m_soldir);
      config["out_dir"] = m_soldir;
    }
    if (const int rc = cdarp_multiday(config.dump().c_str(), m_out.c_str()); rc != CDARP_OK) return fail(rc);
    std::cout << m_out << "\n";
    return 0;
  }

  if (exp->parsed()) {
    InstanceHandle inst;
    if (const int rc = cdarp_instance_read(e_instance.c_str(), &inst.ptr); rc != CDARP_OK) return fail(rc);
    json options;
    options["mode"] = e_mode;
    options["alpha_t"] = e_alpha_t;
    options["alpha_c"] = e_alpha_c;
    if (!e_offsets.empty()) {
      const json off = json::parse(read_file_or_empty(e_offsets));
      options["offsets"] = off.contains("offsets") ? off.at("offsets") : off;
    }
    if (const int rc = cdarp_export_lp(inst.ptr, options.dump().c_str(), e_out.c_str()); rc != CDARP_OK)
      return fail(rc);
    std::cout << e_out << "\n";
    return 0;
  }

  if (imp->parsed()) {
    InstanceHandle inst;
    if (const int rc = cdarp_instance_read(i_instance.c_str(), &inst.ptr); rc != CDARP_OK) return fail(rc);
    SolutionHandle sol;
    if (const int rc = cdarp_import_lp_solution(inst.ptr, i_listing.c_str(), i_mode.c_str(), &sol.ptr);
        rc != CDARP_OK)
      return fail(rc);
    char* report = nullptr;
    if (const int rc = cdarp_solution_check(inst.ptr, sol.ptr, &report); rc != CDARP_OK) return fail(rc);
    const json rj = json::parse(report);
    cdarp_string_free(report);
    char* summary = nullptr;
    if (const int rc = cdarp_solution_summary(sol.ptr, &summary); rc != CDARP_OK) return fail(rc);
    const json s = json::parse(summary);
    cdarp_string_free(summary);
    std::cout << "cost=" << s.at("cost").get<long long>() << " violations=" << rj.size() << "\n";
    if (!i_out.empty())
      if (const int rc = cdarp_solution_write(inst.ptr, sol.ptr, i_out.c_str()); rc != CDARP_OK) return fail(rc);
    return rj.empty() ? 0 : 2;
  }

  if (audit->parsed()) {
    InstanceHandle inst;
    if (const int rc = cdarp_instance_read(a_instance.c_str(), &inst.ptr); rc != CDARP_OK) return fail(rc);
    SolutionHandle sol;
    if (const int rc = cdarp_solution_read(inst.ptr, a_solution.c_str(), &sol.ptr); rc != CDARP_OK) return fail(rc);
    char* report = nullptr;
    if (const int rc = cdarp_solution_check(inst.ptr, sol.ptr, &report); rc != CDARP_OK) return fail(rc);
    const json rj = json::parse(report);
    cdarp_string_free(report);
    if (rj.empty()) {
      std::cout << "feasible\n";
      return 0;
    }
    for (const auto& v : rj) std::cout << v.at("message").get<std::string>() << "\n";
    return 2;
  }

  if (meas->parsed()) {
    InstanceHandle inst;
    if (const int rc = cdarp_instance_read(me_instance.c_str(), &inst.ptr); rc != CDARP_OK) return fail(rc);
    if (const int rc = cdarp_measures_csv(inst.ptr, me_out.c_str()); rc != CDARP_OK) return fail(rc);
    std::cout << me_out << "\n";
    return 0;
  }

  return 0;
}
