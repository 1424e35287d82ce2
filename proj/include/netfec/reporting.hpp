#pragma once

// Pipeline orchestration and file export behind the command-line tool.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netfec/constellation_rates.hpp"
#include "netfec/gn_phy.hpp"
#include "netfec/network_model.hpp"
#include "netfec/rwa_optimizer.hpp"
#include "netfec/scheme_planner.hpp"

namespace netfec {

// Overrides the output directory from the config and the command line.
inline constexpr const char* kOutDirEnv = "NETFEC_OUT_DIR";

struct RunConfig {
  std::filesystem::path topology;
  std::optional<std::filesystem::path> traffic;  // uniform when absent
  FiberParams fiber;
  std::optional<double> eta_per_w2;  // kDefaultEta when absent
  int k_paths = kDefaultKPaths;
  int wavelengths = kDefaultWavelengths;
  SolveOptions solver;
  std::vector<SchemeKind> kinds;
  std::vector<RateFamily> families;  // for the practical kinds
  int m_max = kMaxBitsPerSymbol;     // variable-format and ideal schemes
  std::filesystem::path out_dir = "out";

  // Expands kinds x families into concrete schemes, in a fixed order.
  std::vector<Scheme> schemes() const;
};

// Table I physics, k = 16, every scheme kind, both families.
RunConfig default_run_config();

// Reads a JSON config on top of the defaults. Relative paths inside it are
// resolved against the file's directory. Throws Error(kConfig / kIo).
RunConfig load_run_config(const std::filesystem::path& file);
void apply_config_json(RunConfig& config, std::string_view text, const std::filesystem::path& base_dir);

std::vector<SchemeKind> parse_scheme_list(std::string_view csv);
// "HD", "SD" or "BOTH" (also comma lists of the first two).
std::vector<RateFamily> parse_family_list(std::string_view text);

// kOutDirEnv when set and non-empty, the configured directory otherwise.
std::filesystem::path effective_out_dir(const RunConfig& config);

GnCoefficients coefficients_for(const RunConfig& config);

struct PipelineResult {
  std::string network;
  Topology topology;
  GnCoefficients coeffs;
  LightpathPlan plan;
  std::vector<SnrBin> snr_bins;
  std::vector<PlanResult> results;
  int first_fit_blocked = 0;

  bool budget_exhausted() const noexcept { return !plan.optimal; }
};

PipelineResult run_pipeline(const RunConfig& config);

struct WrittenFiles {
  std::vector<std::filesystem::path> paths;
};

// plan_<net>.json, snr_histogram_<net>.csv, schemes_<net>.json,
// schemes_<net>.csv and summary_<net>.txt.
WrittenFiles write_plan_bundle(const PipelineResult& result, const RunConfig& config,
                               const std::filesystem::path& out_dir);
std::string summary_text(const PipelineResult& result, const RunConfig& config);

enum class SweepAxis { kM, kMMax };
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepRow {
  std::string scheme;
  RateFamily family;
  int value;  // m, or log2 of M-hat
  double theta_tbps;
  std::vector<double> rates;
  int m;
};

// Theta and optimal rate(s) of every practical scheme that supports the axis
// (one-format kinds for m, variable-format kinds for m_max), per family.
std::vector<SweepRow> run_sweep(const LightpathPlan& plan, const std::vector<SchemeKind>& kinds,
                                const std::vector<RateFamily>& families, SweepAxis axis,
                                const std::vector<int>& values);
// One sweep_<axis>_<net>_<family>.csv per family present in rows.
WrittenFiles write_sweep(const std::string& network, SweepAxis axis, const std::vector<SweepRow>& rows,
                         const std::filesystem::path& out_dir);

// rates_<family>.csv: curve rows plus crossing and QPSK-7% threshold rows.
std::filesystem::path write_rate_table(RateFamily family, const std::vector<int>& m_list, double snr_lo_db,
                                       double snr_hi_db, double step_db, const std::filesystem::path& out_dir);

// snr.csv: per span count, the SNR at the configured launch power.
std::filesystem::path write_snr_table(const GnCoefficients& coeffs, int max_spans,
                                      const std::filesystem::path& out_dir);

std::string network_slug(const std::string& name);

}  // namespace netfec
