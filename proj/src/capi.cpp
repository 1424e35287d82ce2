#define NETFEC_BUILDING_LIBRARY
#include "netfec/netfec.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "netfec/error.hpp"
#include "netfec/reporting.hpp"

struct netfec_config {
  netfec::RunConfig value = netfec::default_run_config();
};

struct netfec_run {
  netfec::RunConfig config;
  std::unique_ptr<netfec::PipelineResult> result;
};

namespace {

thread_local std::string g_last_error;

netfec_status map_code(netfec::ErrorCode code) {
  using netfec::ErrorCode;
  switch (code) {
    case ErrorCode::kDomain: return NETFEC_E_DOMAIN;
    case ErrorCode::kParse: return NETFEC_E_PARSE;
    case ErrorCode::kDisconnected: return NETFEC_E_DISCONNECTED;
    case ErrorCode::kBadLength: return NETFEC_E_BAD_LENGTH;
    case ErrorCode::kNoPath: return NETFEC_E_NO_PATH;
    case ErrorCode::kUncoveredPair: return NETFEC_E_UNCOVERED_PAIR;
    case ErrorCode::kInfeasible: return NETFEC_E_INFEASIBLE;
    case ErrorCode::kBudgetExhausted: return NETFEC_E_BUDGET_EXHAUSTED;
    case ErrorCode::kMissingPair: return NETFEC_E_MISSING_PAIR;
    case ErrorCode::kUnreachable: return NETFEC_E_UNREACHABLE;
    case ErrorCode::kConfig: return NETFEC_E_CONFIG;
    case ErrorCode::kIo: return NETFEC_E_IO;
  }
  return NETFEC_E_INTERNAL;
}

netfec_status fail(netfec_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
netfec_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return NETFEC_OK;
  } catch (const netfec::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NETFEC_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NETFEC_E_INTERNAL, e.what());
  }
}

void copy_out(const std::string& s, char* buf, std::size_t len) {
  if (!buf || len == 0) return;
  const std::size_t n = std::min(s.size(), len - 1);
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
}

void require(bool ok, const char* what) {
  if (!ok) throw netfec::Error(netfec::ErrorCode::kConfig, what);
}

}  // namespace

extern "C" {

const char* netfec_status_name(netfec_status status) {
  switch (status) {
    case NETFEC_OK: return "OK";
    case NETFEC_E_DOMAIN: return "DOMAIN";
    case NETFEC_E_PARSE: return "PARSE";
    case NETFEC_E_DISCONNECTED: return "DISCONNECTED";
    case NETFEC_E_BAD_LENGTH: return "BAD_LENGTH";
    case NETFEC_E_NO_PATH: return "NO_PATH";
    case NETFEC_E_UNCOVERED_PAIR: return "UNCOVERED_PAIR";
    case NETFEC_E_INFEASIBLE: return "INFEASIBLE";
    case NETFEC_E_BUDGET_EXHAUSTED: return "BUDGET_EXHAUSTED";
    case NETFEC_E_MISSING_PAIR: return "MISSING_PAIR";
    case NETFEC_E_UNREACHABLE: return "UNREACHABLE";
    case NETFEC_E_CONFIG: return "CONFIG";
    case NETFEC_E_IO: return "IO";
    case NETFEC_E_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case NETFEC_E_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* netfec_last_error(void) { return g_last_error.c_str(); }

const char* netfec_version(void) { return "1.0.0"; }

netfec_status netfec_rate(const char* family, int m, double snr_db, double* se_out) {
  if (!family || !se_out) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto f = netfec::parse_rate_family(family);
    if (f != netfec::RateFamily::kCapacity && !netfec::is_supported_format(m)) {
      throw netfec::Error(netfec::ErrorCode::kDomain, "unsupported format m=" + std::to_string(m));
    }
    *se_out = netfec::family_rate(f, m, netfec::db_to_linear(snr_db));
  });
}

netfec_status netfec_snr_threshold(const char* family, int m, double code_rate, double* snr_db_out) {
  if (!family || !snr_db_out) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *snr_db_out = netfec::snr_threshold(netfec::parse_rate_family(family), m, code_rate); });
}

netfec_status netfec_crossing(const char* family, int m_low, double* snr_db_out) {
  if (!family || !snr_db_out) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    for (const auto& c : netfec::find_crossings(netfec::parse_rate_family(family))) {
      if (c.m_low != m_low) continue;
      if (!c.snr_db) throw netfec::Error(netfec::ErrorCode::kUnreachable, "curves do not cross below 40 dB");
      *snr_db_out = *c.snr_db;
      return;
    }
    throw netfec::Error(netfec::ErrorCode::kDomain, "no format above m=" + std::to_string(m_low));
  });
}

netfec_status netfec_write_rates(const char* family, const int* m_list, size_t m_count, double snr_lo_db,
                                 double snr_hi_db, double step_db, const char* out_dir, char* path_out,
                                 size_t path_len) {
  if (!family || !out_dir || (m_count > 0 && !m_list)) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<int> ms(m_list, m_list + m_count);
    const auto path = netfec::write_rate_table(netfec::parse_rate_family(family), ms, snr_lo_db, snr_hi_db, step_db, out_dir);
    copy_out(path.string(), path_out, path_len);
  });
}

netfec_status netfec_config_create(netfec_config** out) {
  if (!out) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new netfec_config(); });
}

void netfec_config_destroy(netfec_config* config) { delete config; }

netfec_status netfec_config_load(netfec_config* config, const char* json_path) {
  if (!config || !json_path) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { config->value = netfec::load_run_config(json_path); });
}

netfec_status netfec_config_set_topology(netfec_config* config, const char* path) {
  if (!config || !path) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { config->value.topology = path; });
}

netfec_status netfec_config_set_traffic(netfec_config* config, const char* path) {
  if (!config) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (path && *path) {
      config->value.traffic = std::filesystem::path(path);
    } else {
      config->value.traffic.reset();
    }
  });
}

netfec_status netfec_config_set_eta(netfec_config* config, double eta_per_w2) {
  if (!config) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(eta_per_w2 > 0.0, "eta must be positive");
    config->value.eta_per_w2 = eta_per_w2;
  });
}

netfec_status netfec_config_set_k_paths(netfec_config* config, int k) {
  if (!config) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(k >= 1, "k_paths must be at least 1");
    config->value.k_paths = k;
  });
}

netfec_status netfec_config_set_node_budget(netfec_config* config, int64_t nodes) {
  if (!config) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(nodes >= 1, "node budget must be positive");
    config->value.solver.node_budget = nodes;
  });
}

netfec_status netfec_config_set_lightpath_node_budget(netfec_config* config, int64_t nodes) {
  if (!config) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(nodes >= 0, "node budget must not be negative");
    config->value.solver.lightpath_node_budget = nodes;
  });
}

netfec_status netfec_config_set_schemes(netfec_config* config, const char* csv) {
  if (!config || !csv) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    try {
      config->value.kinds = netfec::parse_scheme_list(csv);
    } catch (const netfec::Error& e) {
      throw netfec::Error(netfec::ErrorCode::kConfig, e.what());
    }
  });
}

netfec_status netfec_config_set_families(netfec_config* config, const char* text) {
  if (!config || !text) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { config->value.families = netfec::parse_family_list(text); });
}

netfec_status netfec_config_set_m_max(netfec_config* config, int m_max) {
  if (!config) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(netfec::is_supported_format(m_max), "m_max must be one of 2, 4, 6, 8, 10");
    config->value.m_max = m_max;
  });
}

netfec_status netfec_config_set_out_dir(netfec_config* config, const char* path) {
  if (!config || !path) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { config->value.out_dir = path; });
}

netfec_status netfec_config_out_dir(const netfec_config* config, char* buf, size_t len) {
  if (!config || !buf) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { copy_out(netfec::effective_out_dir(config->value).string(), buf, len); });
}

netfec_status netfec_plan_run(const netfec_config* config, netfec_run** out) {
  if (!config || !out) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto run = std::make_unique<netfec_run>();
    run->config = config->value;
    run->result = std::make_unique<netfec::PipelineResult>(netfec::run_pipeline(run->config));
    *out = run.release();
  });
}

void netfec_run_destroy(netfec_run* run) { delete run; }

netfec_status netfec_run_write(const netfec_run* run, const char* out_dir) {
  if (!run) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto dir = out_dir ? std::filesystem::path(out_dir) : netfec::effective_out_dir(run->config);
    netfec::write_plan_bundle(*run->result, run->config, dir);
  });
}

netfec_status netfec_run_summary(const netfec_run* run, char* buf, size_t len, size_t* needed_out) {
  if (!run) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto text = netfec::summary_text(*run->result, run->config);
    if (needed_out) *needed_out = text.size() + 1;
    copy_out(text, buf, len);
  });
}

int netfec_run_optimal(const netfec_run* run) { return run && run->result->plan.optimal ? 1 : 0; }

int netfec_run_transceivers(const netfec_run* run) { return run ? run->result->plan.transceivers() : 0; }

double netfec_run_theta_tbps(const netfec_run* run) { return run ? run->result->plan.theta_bps() * 1e-12 : 0.0; }

double netfec_run_bound_tbps(const netfec_run* run) { return run ? run->result->plan.bound_bps() * 1e-12 : 0.0; }

int64_t netfec_run_nodes(const netfec_run* run) { return run ? run->result->plan.nodes : 0; }

size_t netfec_run_scheme_count(const netfec_run* run) { return run ? run->result->results.size() : 0; }

netfec_status netfec_run_scheme(const netfec_run* run, size_t index, char* label, size_t label_len,
                                double* theta_tbps, double* rc1, double* rc2, int* m) {
  if (!run) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  if (index >= run->result->results.size()) return fail(NETFEC_E_INVALID_ARGUMENT, "scheme index out of range");
  const auto& r = run->result->results[index];
  copy_out(netfec::scheme_label(r.scheme), label, label_len);
  if (theta_tbps) *theta_tbps = r.theta_tbps();
  if (rc1) *rc1 = r.rates.size() > 0 ? r.rates[0] : 0.0;
  if (rc2) *rc2 = r.rates.size() > 1 ? r.rates[1] : 0.0;
  if (m) *m = r.m;
  return NETFEC_OK;
}

size_t netfec_run_snr_bin_count(const netfec_run* run) { return run ? run->result->snr_bins.size() : 0; }

netfec_status netfec_run_snr_bin(const netfec_run* run, size_t index, double* snr_db, int* transceivers) {
  if (!run) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  if (index >= run->result->snr_bins.size()) return fail(NETFEC_E_INVALID_ARGUMENT, "bin index out of range");
  if (snr_db) *snr_db = run->result->snr_bins[index].snr_db;
  if (transceivers) *transceivers = run->result->snr_bins[index].count;
  return NETFEC_OK;
}

netfec_status netfec_sweep(const netfec_config* config, const char* axis, const int* values, size_t value_count,
                           const char* out_dir, int* budget_exhausted_out) {
  if (!config || !axis || (value_count > 0 && !values)) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto ax = netfec::parse_sweep_axis(axis);
    std::vector<int> vals(values, values + value_count);
    if (vals.empty()) vals = {2, 4, 6, 8, 10};
    auto cfg = config->value;
    // The plan only needs the capacity objective; schemes are evaluated by the sweep.
    cfg.kinds = {netfec::SchemeKind::kCapacity};
    const auto result = netfec::run_pipeline(cfg);
    const auto rows = netfec::run_sweep(result.plan, config->value.kinds, config->value.families, ax, vals);
    const auto dir = out_dir ? std::filesystem::path(out_dir) : netfec::effective_out_dir(config->value);
    netfec::write_sweep(result.network, ax, rows, dir);
    if (budget_exhausted_out) *budget_exhausted_out = result.budget_exhausted() ? 1 : 0;
  });
}

netfec_status netfec_write_snr_table(const netfec_config* config, int max_spans, const char* out_dir) {
  if (!config) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto dir = out_dir ? std::filesystem::path(out_dir) : netfec::effective_out_dir(config->value);
    netfec::write_snr_table(netfec::coefficients_for(config->value), max_spans, dir);
  });
}

netfec_status netfec_phy_summary(const netfec_config* config, double* p_ase_w, double* eta_per_w2,
                                 double* launch_power_dbm, double* span_snr_db) {
  if (!config) return fail(NETFEC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto c = netfec::coefficients_for(config->value);
    if (p_ase_w) *p_ase_w = c.p_ase_w;
    if (eta_per_w2) *eta_per_w2 = c.eta_per_w2;
    if (launch_power_dbm) *launch_power_dbm = netfec::watt_to_dbm(c.launch_power_w);
    if (span_snr_db) *span_snr_db = netfec::linear_to_db(netfec::path_snr(1, c));
  });
}

}  // extern "C"
