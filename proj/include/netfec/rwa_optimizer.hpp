#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "netfec/gn_phy.hpp"
#include "netfec/network_model.hpp"

namespace netfec {

inline constexpr int kDefaultWavelengths = 80;
inline constexpr std::int64_t kDefaultNodeBudget = 1000000;

// Spectral efficiency (bit/symbol, two polarizations) as a function of linear SNR.
using RateFn = std::function<double(double snr)>;

// Unordered node pair s < d with its demand weight N(N-1) max(T_sd, T_ds),
// which is 1 for uniform traffic.
struct DemandPair {
  int s;
  int d;
  double weight;
};

struct PathVar {
  int pair;  // index into IlpInstance::pairs
  CandidatePath path;
  double se;  // rate_fn(path.snr), bit/symbol
};

// Lightpaths are bidirectional: one variable places a lightpath in each
// direction of every traversed fiber pair, so the W limit applies per
// direction and is the same row for both.
struct IlpInstance {
  int n_nodes = 0;
  int n_links = 0;
  int wavelengths = kDefaultWavelengths;
  double symbol_rate_hz = 32e9;
  std::vector<DemandPair> pairs;
  std::vector<PathVar> vars;  // grouped by pair, candidate order within a pair
};

// Candidate paths for every pair with demand in either direction, SNR filled
// from the GN coefficients.
std::vector<CandidatePath> enumerate_candidates(const Topology& topo, const TrafficProfile& traffic,
                                                int k, const GnCoefficients& coeffs);

// Throws Error(kUncoveredPair) when a demanded pair has no candidate path.
IlpInstance build_instance(const Topology& topo, const std::vector<CandidatePath>& paths,
                           const RateFn& rate_fn, const TrafficProfile& traffic,
                           double symbol_rate_hz = 32e9, int wavelengths = kDefaultWavelengths);

double capacity_rate(double snr);

struct Lightpath {
  int pair;
  int var;
  double snr;
};

struct LightpathPlan {
  std::shared_ptr<const IlpInstance> instance;
  int n_nodes = 0;
  double symbol_rate_hz = 32e9;
  std::vector<DemandPair> pairs;
  std::vector<int> counts;            // per PathVar
  std::vector<Lightpath> lightpaths;  // expanded, ordered by var
  double objective = 0.0;             // min over pairs of carried SE / weight
  double upper_bound = 0.0;           // proven bound on objective
  bool optimal = false;
  bool lightpaths_minimal = false;    // second stage finished within budget
  std::int64_t nodes = 0;

  // Two-way transceivers: one per lightpath end.
  int transceivers() const noexcept { return 2 * static_cast<int>(lightpaths.size()); }
  // Network throughput N(N-1) t in bit/s.
  double theta_bps() const noexcept;
  double bound_bps() const noexcept;
  std::vector<double> pair_throughput_bps() const;
};

// Builds plan bookkeeping (lightpath list, objective) from integer counts.
LightpathPlan make_plan(std::shared_ptr<const IlpInstance> instance, std::vector<int> counts);

// True iff every link row holds.
bool is_feasible(const IlpInstance& instance, const std::vector<int>& counts);

struct SolveOptions {
  std::int64_t node_budget = kDefaultNodeBudget;
  // After the max-min stage, use the fewest lightpaths achieving the optimum.
  bool minimize_lightpaths = true;
  std::int64_t lightpath_node_budget = 200000;
};

LightpathPlan greedy_plan(const std::shared_ptr<const IlpInstance>& instance);
// Objective of the LP relaxation (no cuts).
double lp_relaxation_bound(const IlpInstance& instance);
LightpathPlan solve_max_min(const std::shared_ptr<const IlpInstance>& instance,
                            const SolveOptions& options = {});

struct SnrBin {
  double snr_db;
  int count;  // transceivers
};
// Transceiver counts per distinct SNR value, ascending. SNRs are recomputed
// from the span count with the given coefficients.
std::vector<SnrBin> snr_distribution(const LightpathPlan& plan, const GnCoefficients& coeffs);

// First-fit wavelength assignment under continuity; returns how many
// lightpaths could not be given a common free channel on all their links.
int first_fit_blocked(const LightpathPlan& plan);

}  // namespace netfec
