// netfec: command-line front end over the C API.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netfec/netfec.h"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfigError = 2, kBudget = 3, kIoError = 4 };

int exit_for(netfec_status s) {
  switch (s) {
    case NETFEC_OK:
      return kOk;
    case NETFEC_E_PARSE:
    case NETFEC_E_CONFIG:
    case NETFEC_E_DISCONNECTED:
    case NETFEC_E_BAD_LENGTH:
    case NETFEC_E_MISSING_PAIR:
    case NETFEC_E_INVALID_ARGUMENT:
      return kConfigError;
    case NETFEC_E_BUDGET_EXHAUSTED:
      return kBudget;
    case NETFEC_E_IO:
      return kIoError;
    default:
      return kFailure;
  }
}

struct Failure {
  int code;
};

void check(netfec_status s, const char* what) {
  if (s == NETFEC_OK) return;
  std::fprintf(stderr, "netfec: %s: %s (%s)\n", what, netfec_last_error(), netfec_status_name(s));
  throw Failure{exit_for(s)};
}

struct ConfigDeleter {
  void operator()(netfec_config* c) const { netfec_config_destroy(c); }
};
struct RunDeleter {
  void operator()(netfec_run* r) const { netfec_run_destroy(r); }
};
using ConfigPtr = std::unique_ptr<netfec_config, ConfigDeleter>;
using RunPtr = std::unique_ptr<netfec_run, RunDeleter>;

// Options shared by plan and sweep.
struct PlanArgs {
  std::string topology;
  std::string traffic;
  std::string config;
  std::optional<double> eta;
  std::optional<int> k_paths;
  std::string family;
  std::string schemes;
  std::string out;
  std::optional<long long> node_budget;
  std::optional<long long> lightpath_node_budget;
  std::optional<int> m_max;
};

void add_plan_options(CLI::App* cmd, PlanArgs& a) {
  cmd->add_option("--topology", a.topology, "Topology JSON (overrides the config)");
  cmd->add_option("--traffic", a.traffic, "Traffic matrix, N x N numbers separated by commas or whitespace; uniform when omitted");
  cmd->add_option("--config", a.config, "Run configuration JSON");
  cmd->add_option("--eta", a.eta, "Nonlinear coefficient per span [1/W^2]")->check(CLI::PositiveNumber);
  cmd->add_option("--k-paths", a.k_paths, "Candidate paths per node pair")->check(CLI::PositiveNumber);
  cmd->add_option("--family", a.family, "Receiver family for practical schemes: HD, SD or BOTH");
  cmd->add_option("--schemes", a.schemes, "Comma-separated scheme kinds");
  cmd->add_option("--out", a.out, "Output directory");
  cmd->add_option("--node-budget", a.node_budget, "Branch-and-bound node budget");
  cmd->add_option("--lightpath-node-budget", a.lightpath_node_budget,
                  "Node budget of the lightpath-minimisation pass (0 disables it)");
  cmd->add_option("--m-max", a.m_max, "Largest format for variable-format schemes (bits/symbol)");
}

ConfigPtr build_config(const PlanArgs& a) {
  netfec_config* raw = nullptr;
  check(netfec_config_create(&raw), "config");
  ConfigPtr cfg(raw);
  if (!a.config.empty()) check(netfec_config_load(cfg.get(), a.config.c_str()), a.config.c_str());
  if (!a.topology.empty()) check(netfec_config_set_topology(cfg.get(), a.topology.c_str()), "--topology");
  if (!a.traffic.empty()) check(netfec_config_set_traffic(cfg.get(), a.traffic.c_str()), "--traffic");
  if (a.eta) check(netfec_config_set_eta(cfg.get(), *a.eta), "--eta");
  if (a.k_paths) check(netfec_config_set_k_paths(cfg.get(), *a.k_paths), "--k-paths");
  if (!a.family.empty()) check(netfec_config_set_families(cfg.get(), a.family.c_str()), "--family");
  if (!a.schemes.empty()) check(netfec_config_set_schemes(cfg.get(), a.schemes.c_str()), "--schemes");
  if (a.node_budget) check(netfec_config_set_node_budget(cfg.get(), *a.node_budget), "--node-budget");
  if (a.lightpath_node_budget) {
    check(netfec_config_set_lightpath_node_budget(cfg.get(), *a.lightpath_node_budget), "--lightpath-node-budget");
  }
  if (a.m_max) check(netfec_config_set_m_max(cfg.get(), *a.m_max), "--m-max");
  return cfg;
}

// --out, then the environment, then the config file.
std::string out_dir(const netfec_config* cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  char buf[4096];
  check(netfec_config_out_dir(cfg, buf, sizeof buf), "output directory");
  return buf;
}

int cmd_plan(const PlanArgs& a) {
  auto cfg = build_config(a);
  const auto dir = out_dir(cfg.get(), a.out);
  netfec_run* raw = nullptr;
  check(netfec_plan_run(cfg.get(), &raw), "plan");
  RunPtr run(raw);
  check(netfec_run_write(run.get(), dir.c_str()), "write");
  size_t needed = 0;
  check(netfec_run_summary(run.get(), nullptr, 0, &needed), "summary");
  std::string text(needed, '\0');
  check(netfec_run_summary(run.get(), text.data(), text.size(), nullptr), "summary");
  text.resize(needed - 1);
  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s\n", dir.c_str());
  if (!netfec_run_optimal(run.get())) {
    std::fprintf(stderr, "netfec: node budget exhausted; best plan %.3f Tbps, bound %.3f Tbps\n",
                 netfec_run_theta_tbps(run.get()), netfec_run_bound_tbps(run.get()));
    return kBudget;
  }
  return kOk;
}

int cmd_sweep(const PlanArgs& a, const std::string& axis, const std::vector<int>& values) {
  auto cfg = build_config(a);
  const auto dir = out_dir(cfg.get(), a.out);
  int exhausted = 0;
  check(netfec_sweep(cfg.get(), axis.c_str(), values.data(), values.size(), dir.c_str(), &exhausted), "sweep");
  std::printf("wrote %s\n", dir.c_str());
  if (exhausted) {
    std::fprintf(stderr, "netfec: node budget exhausted; sweep uses the best plan found\n");
    return kBudget;
  }
  return kOk;
}

int cmd_rates(const std::string& family, const std::vector<int>& ms, double lo, double hi, double step,
              const std::string& out) {
  std::string dir = out;
  if (dir.empty()) {
    netfec_config* raw = nullptr;
    check(netfec_config_create(&raw), "config");
    ConfigPtr cfg(raw);
    dir = out_dir(cfg.get(), "");
  }
  std::vector<std::string> families;
  if (family == "BOTH" || family == "both") {
    families = {"HD", "SD"};
  } else {
    families = {family};
  }
  for (const auto& f : families) {
    char path[4096];
    check(netfec_write_rates(f.c_str(), ms.data(), ms.size(), lo, hi, step, dir.c_str(), path, sizeof path), "rates");
    std::printf("wrote %s\n", path);
  }
  return kOk;
}

int cmd_snr(const PlanArgs& a, int max_spans) {
  auto cfg = build_config(a);
  const auto dir = out_dir(cfg.get(), a.out);
  double p_ase = 0.0, eta = 0.0, p_dbm = 0.0, span_snr = 0.0;
  check(netfec_phy_summary(cfg.get(), &p_ase, &eta, &p_dbm, &span_snr), "physical layer");
  check(netfec_write_snr_table(cfg.get(), max_spans, dir.c_str()), "snr");
  std::printf("P_ASE %.5f uW, eta %.2f 1/W^2, launch power %.3f dBm, span SNR %.3f dB\n", p_ase * 1e6, eta, p_dbm,
              span_snr);
  std::printf("wrote %s/snr.csv\n", dir.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Throughput planning for optical networks with practical FEC"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(netfec_version()));

  std::string rates_family = "HD";
  std::vector<int> rates_m{2, 4, 6, 8, 10};
  double snr_lo = -5.0, snr_hi = 34.0, snr_step = 0.1;
  std::string rates_out;
  auto* rates = app.add_subcommand("rates", "Tabulate achievable rates per format");
  rates->add_option("--family", rates_family, "HD, SD, MI, CAPACITY or BOTH")->capture_default_str();
  rates->add_option("--m", rates_m, "Bits per symbol, comma separated")->delimiter(',')->capture_default_str();
  rates->add_option("--snr-min", snr_lo, "Lowest SNR [dB]")->capture_default_str();
  rates->add_option("--snr-max", snr_hi, "Highest SNR [dB]")->capture_default_str();
  rates->add_option("--step", snr_step, "SNR step [dB]")->capture_default_str();
  rates->add_option("--out", rates_out, "Output directory");

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Solve the ILP and evaluate every scheme");
  add_plan_options(plan, plan_args);

  PlanArgs sweep_args;
  std::string axis = "m";
  std::vector<int> sweep_values{2, 4, 6, 8, 10};
  auto* sweep = app.add_subcommand("sweep", "Throughput of the practical schemes versus format");
  add_plan_options(sweep, sweep_args);
  sweep->add_option("--axis", axis, "m (one-format schemes) or m_max (variable-format schemes)")
      ->capture_default_str();
  sweep->add_option("--values", sweep_values, "Axis values in bits/symbol, comma separated")
      ->delimiter(',')
      ->capture_default_str();

  PlanArgs snr_args;
  int max_spans = 60;
  auto* snr = app.add_subcommand("snr", "Path SNR versus span count at the optimal launch power");
  snr->add_option("--config", snr_args.config, "Run configuration JSON");
  snr->add_option("--eta", snr_args.eta, "Nonlinear coefficient per span [1/W^2]")->check(CLI::PositiveNumber);
  snr->add_option("--max-spans", max_spans, "Largest span count")->capture_default_str();
  snr->add_option("--out", snr_args.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*rates) return cmd_rates(rates_family, rates_m, snr_lo, snr_hi, snr_step, rates_out);
    if (*plan) return cmd_plan(plan_args);
    if (*sweep) return cmd_sweep(sweep_args, axis, sweep_values);
    if (*snr) return cmd_snr(snr_args, max_spans);
  } catch (const Failure& f) {
    return f.code;
  }
  return kFailure;
}
