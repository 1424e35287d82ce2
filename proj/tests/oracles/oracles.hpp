#pragma once

// Reference computations for the tests, written for clarity, not speed.
// Apart from dominance_violations they share only data types (and the
// tabulated rates) with the library.

#include <cstdint>
#include <string>
#include <vector>

#include "netfec/network_model.hpp"
#include "netfec/rwa_optimizer.hpp"
#include "netfec/scheme_planner.hpp"

namespace oracle {

struct Estimate {
  double mean;
  double stderr_;  // standard error of the mean
};

// Gray-labeled square QAM simulated one PAM dimension at a time; snr is the
// linear symbol SNR (unit 2-D symbol energy). Values cover both polarizations.
struct McRates {
  std::vector<double> ber_per_bit;  // per PAM bit position
  double ber;                       // average over bit positions
  Estimate hd;                      // 2 * sum over the m bits of 1 - Hb(ber_k)
  Estimate gmi;
  Estimate mi;
};
McRates monte_carlo_rates(int m, double snr, int samples, std::uint64_t seed);

// Every loopless s-d path by depth-first search, ordered by span count and
// then node sequence, truncated to k.
std::vector<netfec::CandidatePath> brute_force_paths(const netfec::Topology& topo, int s, int d, int k);

struct BruteIlp {
  double objective;  // max over feasible counts of min_pair se / weight
  int lightpaths;    // fewest lightpaths reaching that objective
};
// Exhaustive enumeration of integer lightpath counts under the per-link
// wavelength limit. Only for tiny instances.
BruteIlp brute_force_ilp(const netfec::IlpInstance& instance);

// Theta (bit/s) of a plan when every lightpath uses the largest format from
// `formats` whose rate supports one of `rates`, taking the best such option.
double theta_with_rates(const netfec::LightpathPlan& plan, netfec::RateFamily family, const std::vector<int>& formats,
                        const std::vector<double>& rates);

struct GridBest {
  double theta_bps;
  std::vector<double> rates;
};
// Dense-grid maximisation of theta over one code rate or an ordered pair.
GridBest grid_search(const netfec::LightpathPlan& plan, netfec::RateFamily family, const std::vector<int>& formats,
                     int n_rates, double step);

// Scheme ordering that must hold on any plan: capacity >= ideal SD >= ideal
// HD, ideal >= two rates >= one rate, variable >= fixed format, larger M-hat
// >= smaller, SD >= HD per scheme, one rate and one format >= QPSK 7%.
// Returns a message per violated relation.
std::vector<std::string> dominance_violations(const netfec::LightpathPlan& plan);

}  // namespace oracle
