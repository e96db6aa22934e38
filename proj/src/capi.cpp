#include "cdarp.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cdarp/bench.hpp"
#include "cdarp/generate.hpp"
#include "cdarp/io.hpp"
#include "cdarp/lp.hpp"
#include "cdarp/measures.hpp"
#include "cdarp/model.hpp"

using nlohmann::json;

struct cdarp_instance {
  cdarp::Instance inst;
};

struct cdarp_solution {
  cdarp::SolutionFile file;
  std::optional<cdarp::Cost> nc_cost;
  std::optional<double> sav_pct;
  double runtime_s = 0;
};

namespace {

thread_local std::string g_last_error;

int set_error(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const cdarp::IoError& e) {
    return set_error(CDARP_ERR_IO, e.what());
  } catch (const cdarp::InfeasibleError& e) {
    return set_error(CDARP_ERR_INFEASIBLE, e.what());
  } catch (const cdarp::LpError& e) {
    return set_error(CDARP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    const std::string what = e.what();
    if (what.find("budget") != std::string::npos) return set_error(CDARP_ERR_BUDGET, what);
    return set_error(CDARP_ERR_INTERNAL, what);
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_json(const char* text, const char* what) {
  if (!text || !*text) return json::object();
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw cdarp::IoError(std::string(what) + ": " + e.what());
  }
}

cdarp::BalanceSpec spec_from_options(const json& j) {
  cdarp::BalanceSpec spec;
  if (j.contains("mode")) {
    const auto mode = cdarp::balance_mode_from_string(j.at("mode").get<std::string>());
    if (!mode) throw cdarp::IoError("unknown mode '" + j.at("mode").get<std::string>() + "'");
    spec.mode = *mode;
  }
  spec.alpha_t = cdarp::Rat::from_double(j.value("alpha_t", 0.0));
  spec.alpha_c = cdarp::Rat::from_double(j.value("alpha_c", 0.0));
  if (j.value("u_rounding", "floor") == std::string("half-up")) spec.u_rounding = cdarp::URounding::HalfUp;
  if (j.contains("offsets"))
    for (const auto& oj : j.at("offsets"))
      spec.offsets.push_back(cdarp::CompanyOffset{oj.at("company").get<int>(),
                                                  oj.value("s_prime", cdarp::Seconds{0}),
                                                  oj.value("u_prime", std::int64_t{0})});
  if (j.contains("explicit_thresholds"))
    for (const auto& tj : j.at("explicit_thresholds"))
      spec.explicit_thresholds.push_back(
          cdarp::CompanyThreshold{tj.at("company").get<int>(), cdarp::Rat::from_double(tj.value("s_tilde", 0.0)),
                                  tj.value("u_tilde", std::int64_t{0})});
  return spec;
}

cdarp::GenParams gen_params_from(const char* params_json) {
  return cdarp::gen_params_from_json_text(params_json && *params_json ? params_json : "{}");
}

}  // namespace

extern "C" {

const char* cdarp_last_error(void) { return g_last_error.c_str(); }

void cdarp_string_free(char* s) { delete[] s; }

int cdarp_instance_read(const char* path, cdarp_instance** out) {
  return guarded([&] {
    auto* handle = new cdarp_instance{cdarp::read_instance(path)};
    *out = handle;
    return CDARP_OK;
  });
}

int cdarp_instance_write(const cdarp_instance* inst, const char* path) {
  return guarded([&] {
    cdarp::write_instance(inst->inst, path);
    return CDARP_OK;
  });
}

int cdarp_instance_generate(const char* params_json, uint64_t seed, cdarp_instance** out) {
  return guarded([&] {
    *out = new cdarp_instance{cdarp::generate(gen_params_from(params_json), seed)};
    return CDARP_OK;
  });
}

int cdarp_instance_generate_day(const char* params_json, uint64_t seed, int day, cdarp_instance** out) {
  return guarded([&] {
    if (day < 0) throw cdarp::IoError("day must be >= 0");
    auto days = cdarp::generate_days(gen_params_from(params_json), seed, day + 1);
    *out = new cdarp_instance{std::move(days.back())};
    return CDARP_OK;
  });
}

int cdarp_instance_validate(const cdarp_instance* inst, char** report_json) {
  return guarded([&] {
    json arr = json::array();
    for (const auto& v : cdarp::validate_instance(inst->inst))
      arr.push_back({{"code", v.code}, {"subject", v.subject}, {"message", v.message}});
    *report_json = dup_string(arr.dump(2));
    return CDARP_OK;
  });
}

void cdarp_instance_free(cdarp_instance* inst) { delete inst; }

int cdarp_solve(const cdarp_instance* inst, const char* options_json, cdarp_solution** out) {
  return guarded([&] {
    const json j = parse_json(options_json, "solve options");
    cdarp::SolveOptions options;
    options.spec = spec_from_options(j);
    if (j.contains("backend")) {
      const auto backend = cdarp::backend_from_string(j.at("backend").get<std::string>());
      if (!backend) throw cdarp::IoError("unknown backend");
      options.backend = *backend;
    }
    if (j.contains("params")) options.params = cdarp::params_from_json_text(j.at("params").dump());
    if (j.contains("budget")) options.budget = cdarp::budget_from_json_text(j.at("budget").dump());
    options.compute_nc_reference = j.value("nc_reference", true);

    const cdarp::SolveOutcome outcome = cdarp::cmd_solve(inst->inst, options);
    auto* sol = new cdarp_solution;
    sol->file.solution = outcome.solution;
    sol->file.spec = options.spec;
    sol->file.cost = outcome.cost;
    sol->file.backend = cdarp::to_string(options.backend);
    sol->file.rng_seed = options.params.seed;
    sol->file.stats = outcome.stats;
    sol->nc_cost = outcome.nc_cost;
    sol->sav_pct = outcome.sav_pct;
    sol->runtime_s = outcome.runtime_s;
    *out = sol;
    return CDARP_OK;
  });
}

int cdarp_solution_write(const cdarp_instance* inst, const cdarp_solution* sol, const char* path) {
  return guarded([&] {
    cdarp::write_solution(inst->inst, sol->file, path);
    return CDARP_OK;
  });
}

int cdarp_solution_read(const cdarp_instance* inst, const char* path, cdarp_solution** out) {
  return guarded([&] {
    auto* sol = new cdarp_solution;
    sol->file = cdarp::read_solution(inst->inst, path);
    *out = sol;
    return CDARP_OK;
  });
}

int cdarp_solution_summary(const cdarp_solution* sol, char** summary_json) {
  return guarded([&] {
    json j;
    j["cost"] = sol->file.cost;
    j["mode"] = cdarp::to_string(sol->file.spec.mode);
    j["backend"] = sol->file.backend;
    j["runtime_s"] = sol->runtime_s;
    if (sol->nc_cost) j["nc_cost"] = *sol->nc_cost;
    if (sol->sav_pct) j["sav_pct"] = *sol->sav_pct;
    if (sol->file.stats) {
      j["iterations"] = sol->file.stats->iterations;
      j["improvements"] = sol->file.stats->improvements;
    }
    *summary_json = dup_string(j.dump(2));
    return CDARP_OK;
  });
}

int cdarp_solution_check(const cdarp_instance* inst, const cdarp_solution* sol, char** report_json) {
  return guarded([&] {
    json arr = json::array();
    for (const auto& v : cdarp::check_solution(inst->inst, sol->file.solution, sol->file.spec))
      arr.push_back({{"code", v.code}, {"subject", v.subject}, {"message", v.message}});
    *report_json = dup_string(arr.dump(2));
    return CDARP_OK;
  });
}

void cdarp_solution_free(cdarp_solution* sol) { delete sol; }

int cdarp_benchmark(const char* config_json, const char* out_csv_path) {
  return guarded([&] {
    const json j = parse_json(config_json, "benchmark config");
    cdarp::BenchmarkConfig config;
    config.instance_paths = j.at("instances").get<std::vector<std::string>>();
    for (const auto& mj : j.at("modes")) {
      const auto mode = cdarp::balance_mode_from_string(mj.get<std::string>());
      if (!mode) throw cdarp::IoError("unknown mode in benchmark config");
      config.modes.push_back(*mode);
    }
    if (j.contains("alphas")) config.alphas = j.at("alphas").get<std::vector<double>>();
    config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("backend")) {
      const auto backend = cdarp::backend_from_string(j.at("backend").get<std::string>());
      if (!backend) throw cdarp::IoError("unknown backend");
      config.backend = *backend;
    }
    if (j.contains("params")) config.params = cdarp::params_from_json_text(j.at("params").dump());
    if (j.contains("budget")) config.budget = cdarp::budget_from_json_text(j.at("budget").dump());
    config.workers = j.value("workers", 1);
    config.timing = j.value("timing", false);

    std::ostringstream csv;
    cdarp::cmd_benchmark(config, csv);
    cdarp::write_text_file(out_csv_path, csv.str());
    return CDARP_OK;
  });
}

int cdarp_multiday(const char* config_json, const char* out_csv_path) {
  return guarded([&] {
    const json j = parse_json(config_json, "multiday config");
    cdarp::MultidayConfig config;
    config.day_paths = j.at("days").get<std::vector<std::string>>();
    if (j.contains("mode")) {
      const auto mode = cdarp::balance_mode_from_string(j.at("mode").get<std::string>());
      if (!mode) throw cdarp::IoError("unknown mode");
      config.mode = *mode;
    }
    config.alpha_t = j.value("alpha_t", 0.0);
    config.alpha_c = j.value("alpha_c", 0.0);
    config.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("backend")) {
      const auto backend = cdarp::backend_from_string(j.at("backend").get<std::string>());
      if (!backend) throw cdarp::IoError("unknown backend");
      config.backend = *backend;
    }
    if (j.contains("params")) config.params = cdarp::params_from_json_text(j.at("params").dump());
    if (j.contains("budget")) config.budget = cdarp::budget_from_json_text(j.at("budget").dump());
    config.accumulate = j.value("accumulate", false);
    config.out_dir = j.value("out_dir", std::string());

    std::ostringstream csv;
    const cdarp::MultidayResult res = cdarp::cmd_multiday(config, csv);
    cdarp::write_text_file(out_csv_path, csv.str());
    if (!res.completed) throw cdarp::InfeasibleError(res.error);
    return CDARP_OK;
  });
}

int cdarp_export_lp(const cdarp_instance* inst, const char* options_json, const char* out_path) {
  return guarded([&] {
    const json j = parse_json(options_json, "export options");
    const cdarp::BalanceSpec spec = spec_from_options(j);
    cdarp::LpExportOptions opts;
    if (j.contains("max_variables")) opts.max_variables = j.at("max_variables").get<int>();
    cdarp::write_text_file(out_path, cdarp::export_lp(inst->inst, spec, opts));
    return CDARP_OK;
  });
}

int cdarp_import_lp_solution(const cdarp_instance* inst, const char* listing_path, const char* mode,
                             cdarp_solution** out) {
  return guarded([&] {
    auto* sol = new cdarp_solution;
    try {
      sol->file.solution = cdarp::import_lp_solution(inst->inst, cdarp::read_text_file(listing_path));
    } catch (...) {
      delete sol;
      throw;
    }
    if (mode && *mode) {
      const auto m = cdarp::balance_mode_from_string(mode);
      if (!m) {
        delete sol;
        throw cdarp::IoError("unknown mode");
      }
      sol->file.spec.mode = *m;
    } else {
      sol->file.spec.mode = cdarp::BalanceMode::UC;
    }
    sol->file.cost = cdarp::solution_cost(inst->inst, sol->file.solution);
    sol->file.backend = "import";
    *out = sol;
    return CDARP_OK;
  });
}

int cdarp_measures_csv(const cdarp_instance* inst, const char* out_path) {
  return guarded([&] {
    const auto table = cdarp::MeasureTable::build(inst->inst);
    std::ostringstream os;
    table.dump_csv(os);
    cdarp::write_text_file(out_path, os.str());
    return CDARP_OK;
  });
}

}  // extern "C"
