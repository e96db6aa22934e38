/* C interface of the collaborative dial-a-ride solver library.
 *
 * All functions return CDARP_OK (0) on success. On failure they return one of
 * the nonzero codes below and leave a description retrievable through
 * cdarp_last_error() (thread local). Handles are opaque; strings returned
 * through char** out-parameters are heap-allocated and must be released with
 * cdarp_string_free().
 */

#ifndef CDARP_H
#define CDARP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CDARP_OK 0
#define CDARP_ERR_INTERNAL 1
#define CDARP_ERR_INFEASIBLE 2
#define CDARP_ERR_IO 3
#define CDARP_ERR_BUDGET 4
#define CDARP_ERR_INVALID_ARGUMENT 5

typedef struct cdarp_instance cdarp_instance;
typedef struct cdarp_solution cdarp_solution;

const char* cdarp_last_error(void);
void cdarp_string_free(char* s);

/* ---- instances ---- */

int cdarp_instance_read(const char* path, cdarp_instance** out);
int cdarp_instance_write(const cdarp_instance* inst, const char* path);

/* params_json: generator parameters; {} or NULL for defaults. Accepts the
 * same fields as generator parameter files, including "group": "A".."D". */
int cdarp_instance_generate(const char* params_json, uint64_t seed, cdarp_instance** out);

/* Day `day` (0-based) of a multi-day scenario sharing depots across days. */
int cdarp_instance_generate_day(const char* params_json, uint64_t seed, int day, cdarp_instance** out);

/* JSON array of violations; empty array means the instance is valid. */
int cdarp_instance_validate(const cdarp_instance* inst, char** report_json);

void cdarp_instance_free(cdarp_instance* inst);

/* ---- solving ----
 *
 * options_json:
 * {
 *   "mode": "nc"|"uc"|"t"|"c"|"tc",
 *   "alpha_t": 0.1, "alpha_c": 0.1,
 *   "offsets": [{"company":1,"s_prime":0,"u_prime":0}, ...],
 *   "explicit_thresholds": [{"company":1,"s_tilde":300,"u_tilde":1}, ...],
 *   "backend": "alns"|"oracle",
 *   "params": { ... ALNS parameters ... },
 *   "budget": { ... oracle enumeration budget ... },
 *   "nc_reference": true
 * }
 */
int cdarp_solve(const cdarp_instance* inst, const char* options_json, cdarp_solution** out);

int cdarp_solution_write(const cdarp_instance* inst, const cdarp_solution* sol, const char* path);
int cdarp_solution_read(const cdarp_instance* inst, const char* path, cdarp_solution** out);

/* cost, balances, SAV/NC reference when available, runtime, ALNS stats. */
int cdarp_solution_summary(const cdarp_solution* sol, char** summary_json);

/* Feasibility report of the solution under the spec it carries. */
int cdarp_solution_check(const cdarp_instance* inst, const cdarp_solution* sol, char** report_json);

void cdarp_solution_free(cdarp_solution* sol);

/* ---- experiment harness ---- */

/* config_json mirrors the benchmark CLI:
 * {"instances":[...], "modes":["uc","t"], "alphas":[0.1], "seeds":[1,2],
 *  "backend":"alns", "params":{...}, "budget":{...}, "workers":2,
 *  "timing":false}
 */
int cdarp_benchmark(const char* config_json, const char* out_csv_path);

/* config_json: {"days":["day1.json",...], "mode":"t", "alpha_t":0.1,
 *  "alpha_c":0.1, "seed":1, "backend":"oracle", "params":{...},
 *  "budget":{...}, "accumulate":false, "out_dir":""}
 * Aborted chains return CDARP_ERR_INFEASIBLE after writing the partial CSV.
 */
int cdarp_multiday(const char* config_json, const char* out_csv_path);

/* ---- MILP bridge ---- */

/* options_json: {"mode":..., "alpha_t":..., "alpha_c":..., "offsets":[...],
 *  "explicit_thresholds":[...], "max_variables": 200000} */
int cdarp_export_lp(const cdarp_instance* inst, const char* options_json, const char* out_path);

/* Flat `name value` solution listing from an external solver. */
int cdarp_import_lp_solution(const cdarp_instance* inst, const char* listing_path, const char* mode,
                             cdarp_solution** out);

/* ---- measures ---- */

int cdarp_measures_csv(const cdarp_instance* inst, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif
