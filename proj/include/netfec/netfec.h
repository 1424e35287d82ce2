#ifndef NETFEC_NETFEC_H
#define NETFEC_NETFEC_H

/* C interface to the planning library. Every function returns a status code;
 * on failure netfec_last_error() holds a message for the calling thread.
 * Handles are opaque and owned by the caller until destroyed. */

#include <stddef.h>
#include <stdint.h>

#if defined(NETFEC_BUILDING_LIBRARY)
#define NETFEC_API __attribute__((visibility("default")))
#else
#define NETFEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum netfec_status {
  NETFEC_OK = 0,
  NETFEC_E_DOMAIN = 1,
  NETFEC_E_PARSE = 2,
  NETFEC_E_DISCONNECTED = 3,
  NETFEC_E_BAD_LENGTH = 4,
  NETFEC_E_NO_PATH = 5,
  NETFEC_E_UNCOVERED_PAIR = 6,
  NETFEC_E_INFEASIBLE = 7,
  NETFEC_E_BUDGET_EXHAUSTED = 8,
  NETFEC_E_MISSING_PAIR = 9,
  NETFEC_E_UNREACHABLE = 10,
  NETFEC_E_CONFIG = 11,
  NETFEC_E_IO = 12,
  NETFEC_E_INVALID_ARGUMENT = 13,
  NETFEC_E_INTERNAL = 14
} netfec_status;

typedef struct netfec_config netfec_config;
typedef struct netfec_run netfec_run;

NETFEC_API const char* netfec_status_name(netfec_status status);
NETFEC_API const char* netfec_last_error(void);
NETFEC_API const char* netfec_version(void);

/* Rates. family is "HD", "SD", "MI" or "CAPACITY"; SNRs in dB. */
NETFEC_API netfec_status netfec_rate(const char* family, int m, double snr_db, double* se_out);
NETFEC_API netfec_status netfec_snr_threshold(const char* family, int m, double code_rate, double* snr_db_out);
NETFEC_API netfec_status netfec_crossing(const char* family, int m_low, double* snr_db_out);
/* Writes rates_<family>.csv into out_dir; path_out (may be NULL) receives the
 * file name, truncated to path_len. */
NETFEC_API netfec_status netfec_write_rates(const char* family, const int* m_list, size_t m_count, double snr_lo_db,
                                            double snr_hi_db, double step_db, const char* out_dir, char* path_out,
                                            size_t path_len);

/* Configuration. A fresh config holds the defaults (no topology). */
NETFEC_API netfec_status netfec_config_create(netfec_config** out);
NETFEC_API void netfec_config_destroy(netfec_config* config);
NETFEC_API netfec_status netfec_config_load(netfec_config* config, const char* json_path);
NETFEC_API netfec_status netfec_config_set_topology(netfec_config* config, const char* path);
/* NULL or "" selects uniform traffic. */
NETFEC_API netfec_status netfec_config_set_traffic(netfec_config* config, const char* path);
NETFEC_API netfec_status netfec_config_set_eta(netfec_config* config, double eta_per_w2);
NETFEC_API netfec_status netfec_config_set_k_paths(netfec_config* config, int k);
NETFEC_API netfec_status netfec_config_set_node_budget(netfec_config* config, int64_t nodes);
NETFEC_API netfec_status netfec_config_set_lightpath_node_budget(netfec_config* config, int64_t nodes);
/* Comma-separated scheme kinds, e.g. "CAPACITY,IDEAL_HD,1RC1M". */
NETFEC_API netfec_status netfec_config_set_schemes(netfec_config* config, const char* csv);
/* "HD", "SD" or "BOTH". */
NETFEC_API netfec_status netfec_config_set_families(netfec_config* config, const char* text);
NETFEC_API netfec_status netfec_config_set_m_max(netfec_config* config, int m_max);
NETFEC_API netfec_status netfec_config_set_out_dir(netfec_config* config, const char* path);
/* Output directory after the environment override; copied into buf. */
NETFEC_API netfec_status netfec_config_out_dir(const netfec_config* config, char* buf, size_t len);

/* Full pipeline: load, candidate paths, ILP, SNR distribution, schemes. */
NETFEC_API netfec_status netfec_plan_run(const netfec_config* config, netfec_run** out);
NETFEC_API void netfec_run_destroy(netfec_run* run);
/* Writes the plan bundle; out_dir NULL uses the config's effective directory. */
NETFEC_API netfec_status netfec_run_write(const netfec_run* run, const char* out_dir);
/* Table II style text, copied into buf; needed_out (may be NULL) gets the
 * full length including the terminator. */
NETFEC_API netfec_status netfec_run_summary(const netfec_run* run, char* buf, size_t len, size_t* needed_out);

NETFEC_API int netfec_run_optimal(const netfec_run* run);
NETFEC_API int netfec_run_transceivers(const netfec_run* run);
NETFEC_API double netfec_run_theta_tbps(const netfec_run* run);
NETFEC_API double netfec_run_bound_tbps(const netfec_run* run);
NETFEC_API int64_t netfec_run_nodes(const netfec_run* run);
NETFEC_API size_t netfec_run_scheme_count(const netfec_run* run);
NETFEC_API netfec_status netfec_run_scheme(const netfec_run* run, size_t index, char* label, size_t label_len,
                                           double* theta_tbps, double* rc1, double* rc2, int* m);
NETFEC_API size_t netfec_run_snr_bin_count(const netfec_run* run);
NETFEC_API netfec_status netfec_run_snr_bin(const netfec_run* run, size_t index, double* snr_db, int* transceivers);

/* Sweep of the practical schemes along "m" or "m_max"; writes one CSV per
 * family into out_dir (NULL: the config's effective directory). The ILP is
 * solved once. budget_exhausted_out (may be NULL) reports a non-optimal plan. */
NETFEC_API netfec_status netfec_sweep(const netfec_config* config, const char* axis, const int* values,
                                      size_t value_count, const char* out_dir, int* budget_exhausted_out);

/* snr.csv for span counts 1..max_spans at the configured launch power. */
NETFEC_API netfec_status netfec_write_snr_table(const netfec_config* config, int max_spans, const char* out_dir);
NETFEC_API netfec_status netfec_phy_summary(const netfec_config* config, double* p_ase_w, double* eta_per_w2,
                                            double* launch_power_dbm, double* span_snr_db);

#ifdef __cplusplus
}
#endif

#endif
