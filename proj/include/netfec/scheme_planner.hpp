#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netfec/constellation_rates.hpp"
#include "netfec/rwa_optimizer.hpp"

namespace netfec {

enum class SchemeKind {
  kCapacity,
  kIdealHd,
  kIdealSd,
  kQpsk7,
  kOneROneM,
  kTwoROneM,
  kOneRVarM,
  kTwoRVarM,
};

inline constexpr double kQpsk7Rate = 1.0 / 1.07;

// family is kHd or kSdGmi (ignored for kCapacity; implied for the ideal kinds).
// For the one-format kinds m = 0 means "search every format".
struct Scheme {
  SchemeKind kind = SchemeKind::kCapacity;
  RateFamily family = RateFamily::kHd;
  int m = 0;
  int m_max = kMaxBitsPerSymbol;
};

std::string scheme_label(const Scheme& scheme);
std::string_view to_string(SchemeKind kind) noexcept;
// Accepts CAPACITY, IDEAL_HD, IDEAL_SD, QPSK_7, 1RC1M, 2RC1M, 1RCVARM, 2RCVARM
// (case-insensitive, ONE_R_ONE_M style spellings too).
SchemeKind parse_scheme_kind(std::string_view text);
bool is_practical(SchemeKind kind) noexcept;
bool is_variable_format(SchemeKind kind) noexcept;

struct LightpathAssignment {
  int m;       // 0 when inactive or for the capacity scheme
  double rc;   // code rate in use, 0 when inactive
  double rate_bps;
};

struct FormatShare {
  int m;
  int transceivers;
  double percent;          // of active transceivers
  double carried_bps;      // raw sum of lightpath bit rates
  double contribution_bps; // carried share rescaled to sum to theta
};

struct PlanResult {
  Scheme scheme;
  double theta_bps = 0.0;
  std::vector<double> rates;  // optimal code rate(s), ascending
  int m = 0;                  // chosen format for one-format schemes
  std::vector<LightpathAssignment> assignment;  // aligned with plan.lightpaths
  std::vector<FormatShare> shares;
  int inactive_transceivers = 0;
  int min_active_lightpaths = 0;  // over demanded pairs
  std::string note;

  double theta_tbps() const noexcept { return theta_bps * 1e-12; }
};

// Theta = min over demanded pairs of C_sd / T_sd, with C_sd the summed rate of
// the pair's lightpaths. Throws Error(kMissingPair) for a pair with none.
double throughput(const LightpathPlan& plan, const std::vector<double>& lightpath_rate_bps);

// Eq. 15 style closed form: N(N-1) times the smallest lightpath count times
// the QPSK rate 4 Rs / 1.07, in bit/s.
double qpsk7_closed_form_bps(int n_nodes, int min_lightpaths, double symbol_rate_hz = 32e9);

PlanResult eval_capacity(const LightpathPlan& plan);
PlanResult eval_ideal(const LightpathPlan& plan, RateFamily family, int m_max = kMaxBitsPerSymbol);
PlanResult eval_qpsk7(const LightpathPlan& plan, RateFamily family);

struct FormatMode {
  bool variable = false;
  int m = 0;  // fixed format (0: best one) or M-hat for variable mode
  static FormatMode one(int m) { return {false, m}; }
  static FormatMode var(int m_max) { return {true, m_max}; }
};

PlanResult optimize_one_rate(const LightpathPlan& plan, RateFamily family, FormatMode mode);
PlanResult optimize_two_rates(const LightpathPlan& plan, RateFamily family, FormatMode mode);
// Theta as a function of one fixed code rate (used by tests and sweeps).
double theta_at_rate(const LightpathPlan& plan, RateFamily family, FormatMode mode, double rc);
double theta_at_rates(const LightpathPlan& plan, RateFamily family, FormatMode mode, double r1, double r2);

PlanResult evaluate_scheme(const LightpathPlan& plan, const Scheme& scheme);

std::vector<FormatShare> modulation_share(const PlanResult& result);

}  // namespace netfec
