#include "netfec/scheme_planner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "netfec/error.hpp"
#include "netfec/milp.hpp"

namespace netfec {
namespace {

constexpr double kFeasibleSlack = 1e-12;

// Lightpaths of one pair sharing an SNR behave identically, so every search
// runs over these groups instead of individual lightpaths.
struct Group {
  int pair;
  double snr;
  int count;
  double rate[kMaxBitsPerSymbol / 2];  // SE of formats 2,4,...,10
};

double se_of(const Group& g, int m) { return g.rate[m / 2 - 1]; }

bool feasible(double se, int m, double rc) { return se >= 2.0 * m * rc * (1.0 - kFeasibleSlack); }

std::vector<Group> group_lightpaths(const LightpathPlan& plan, RateFamily family, std::vector<int>* group_of) {
  const RateTable& table = RateTable::shared(family);
  std::map<std::pair<int, double>, int> index;
  std::vector<Group> groups;
  if (group_of) group_of->resize(plan.lightpaths.size());
  for (std::size_t i = 0; i < plan.lightpaths.size(); ++i) {
    const auto& lp = plan.lightpaths[i];
    auto [it, inserted] = index.try_emplace({lp.pair, lp.snr}, static_cast<int>(groups.size()));
    if (inserted) {
      Group g{lp.pair, lp.snr, 0, {}};
      for (int m = kMinBitsPerSymbol; m <= kMaxBitsPerSymbol; m += 2) g.rate[m / 2 - 1] = table.rate(m, lp.snr);
      groups.push_back(g);
    }
    ++groups[it->second].count;
    if (group_of) (*group_of)[i] = it->second;
  }
  return groups;
}

std::vector<int> formats_for(FormatMode mode) {
  if (!is_supported_format(mode.m)) {
    throw Error(ErrorCode::kDomain, "unsupported format m=" + std::to_string(mode.m));
  }
  if (!mode.variable) return {mode.m};
  std::vector<int> out;
  for (int m = kMinBitsPerSymbol; m <= mode.m; m += 2) out.push_back(m);
  return out;
}

// Best single option for a group at code rate rc: the largest feasible
// format (2 m rc grows with m).
int best_format(const Group& g, const std::vector<int>& formats, double rc) {
  int best = 0;
  for (int m : formats) {
    if (feasible(se_of(g, m), m, rc)) best = m;
  }
  return best;
}

std::vector<double> breakpoints(const std::vector<Group>& groups, const std::vector<int>& formats) {
  std::vector<double> b;
  for (const auto& g : groups) {
    for (int m : formats) {
      const double se = se_of(g, m);
      if (se > 0.0) b.push_back(std::min(1.0, se / (2.0 * m)));
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

void check_pairs(const LightpathPlan& plan) {
  std::vector<int> n(plan.pairs.size(), 0);
  for (const auto& lp : plan.lightpaths) ++n.at(lp.pair);
  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    if (plan.pairs[k].weight > 0.0 && n[k] == 0) {
      throw Error(ErrorCode::kMissingPair, "pair " + std::to_string(plan.pairs[k].s) + "-" +
                                               std::to_string(plan.pairs[k].d) + " has no lightpath");
    }
  }
}

// Theta in bit/s from per-group bit/symbol values.
double theta_from_groups(const LightpathPlan& plan, const std::vector<Group>& groups,
                         const std::vector<double>& group_se) {
  std::vector<double> c(plan.pairs.size(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) c[groups[g].pair] += groups[g].count * group_se[g];
  double t = kInf;
  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    if (plan.pairs[k].weight > 0.0) t = std::min(t, c[k] / plan.pairs[k].weight);
  }
  if (!std::isfinite(t)) return 0.0;
  return static_cast<double>(plan.n_nodes) * (plan.n_nodes - 1) * t * plan.symbol_rate_hz;
}

struct Choice {
  int m;
  double rc;
};

// Per group, the option among `rates` with the highest bit rate; ties go to
// the smaller format, then the smaller rate.
Choice choose(const Group& g, const std::vector<int>& formats, const std::vector<double>& rates) {
  Choice best{0, 0.0};
  double best_se = 0.0;
  for (int m : formats) {
    for (double rc : rates) {
      if (!feasible(se_of(g, m), m, rc)) continue;
      const double v = 2.0 * m * rc;
      if (v > best_se * (1.0 + 1e-12)) {
        best_se = v;
        best = {m, rc};
      }
    }
  }
  return best;
}

PlanResult finish(const LightpathPlan& plan, const Scheme& scheme, const std::vector<Group>& groups,
                  const std::vector<int>& group_of, const std::vector<int>& formats,
                  const std::vector<double>& rates) {
  PlanResult r;
  r.scheme = scheme;
  r.rates = rates;
  std::vector<Choice> per_group(groups.size());
  std::vector<double> group_se(groups.size(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    per_group[g] = choose(groups[g], formats, rates);
    group_se[g] = 2.0 * per_group[g].m * per_group[g].rc;
  }
  r.theta_bps = theta_from_groups(plan, groups, group_se);
  for (std::size_t i = 0; i < plan.lightpaths.size(); ++i) {
    const Choice c = per_group[group_of[i]];
    r.assignment.push_back({c.m, c.rc, 2.0 * c.m * c.rc * plan.symbol_rate_hz});
  }
  r.shares = modulation_share(r);
  return r;
}

void fill_activity(const LightpathPlan& plan, PlanResult& r) {
  std::vector<int> active(plan.pairs.size(), 0);
  r.inactive_transceivers = 0;
  for (std::size_t i = 0; i < plan.lightpaths.size(); ++i) {
    if (r.assignment[i].rate_bps > 0.0) {
      ++active[plan.lightpaths[i].pair];
    } else {
      r.inactive_transceivers += 2;
    }
  }
  int lowest = plan.pairs.empty() ? 0 : *std::min_element(active.begin(), active.end());
  r.min_active_lightpaths = lowest;
}

}  // namespace

std::string_view to_string(SchemeKind kind) noexcept {
  switch (kind) {
    case SchemeKind::kCapacity: return "CAPACITY";
    case SchemeKind::kIdealHd: return "IDEAL_HD";
    case SchemeKind::kIdealSd: return "IDEAL_SD";
    case SchemeKind::kQpsk7: return "QPSK_7";
    case SchemeKind::kOneROneM: return "1RC1M";
    case SchemeKind::kTwoROneM: return "2RC1M";
    case SchemeKind::kOneRVarM: return "1RCVARM";
    case SchemeKind::kTwoRVarM: return "2RCVARM";
  }
  return "?";
}

SchemeKind parse_scheme_kind(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (ch != '_' && ch != '-') s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  }
  if (s == "CAPACITY") return SchemeKind::kCapacity;
  if (s == "IDEALHD") return SchemeKind::kIdealHd;
  if (s == "IDEALSD") return SchemeKind::kIdealSd;
  if (s == "QPSK7") return SchemeKind::kQpsk7;
  if (s == "1RC1M" || s == "ONERONEM") return SchemeKind::kOneROneM;
  if (s == "2RC1M" || s == "TWORONEM") return SchemeKind::kTwoROneM;
  if (s == "1RCVARM" || s == "ONERVARM") return SchemeKind::kOneRVarM;
  if (s == "2RCVARM" || s == "TWORVARM") return SchemeKind::kTwoRVarM;
  throw Error(ErrorCode::kConfig, "unknown scheme '" + std::string(text) + "'");
}

bool is_practical(SchemeKind kind) noexcept {
  return kind == SchemeKind::kOneROneM || kind == SchemeKind::kTwoROneM || kind == SchemeKind::kOneRVarM ||
         kind == SchemeKind::kTwoRVarM;
}

bool is_variable_format(SchemeKind kind) noexcept {
  return kind == SchemeKind::kOneRVarM || kind == SchemeKind::kTwoRVarM;
}

std::string scheme_label(const Scheme& scheme) {
  std::ostringstream out;
  out << to_string(scheme.kind);
  switch (scheme.kind) {
    case SchemeKind::kCapacity:
    case SchemeKind::kIdealHd:
    case SchemeKind::kIdealSd:
      break;
    case SchemeKind::kQpsk7:
      out << '_' << (scheme.family == RateFamily::kHd ? "HD" : "SD");
      break;
    default:
      out << '_' << (scheme.family == RateFamily::kHd ? "HD" : "SD");
      if (is_variable_format(scheme.kind)) {
        out << "_M" << (1 << scheme.m_max);
      } else if (scheme.m > 0) {
        out << "_M" << (1 << scheme.m);
      }
  }
  return out.str();
}

double throughput(const LightpathPlan& plan, const std::vector<double>& rate_bps) {
  if (rate_bps.size() != plan.lightpaths.size()) {
    throw Error(ErrorCode::kDomain, "one rate per lightpath expected");
  }
  check_pairs(plan);
  std::vector<double> c(plan.pairs.size(), 0.0);
  for (std::size_t i = 0; i < rate_bps.size(); ++i) c[plan.lightpaths[i].pair] += rate_bps[i];
  double t = kInf;
  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    if (plan.pairs[k].weight > 0.0) t = std::min(t, c[k] / plan.pairs[k].weight);
  }
  if (!std::isfinite(t)) return 0.0;
  return static_cast<double>(plan.n_nodes) * (plan.n_nodes - 1) * t;
}

double qpsk7_closed_form_bps(int n_nodes, int min_lightpaths, double symbol_rate_hz) {
  return static_cast<double>(n_nodes) * (n_nodes - 1) * min_lightpaths * 4.0 * kQpsk7Rate * symbol_rate_hz;
}

PlanResult eval_capacity(const LightpathPlan& plan) {
  PlanResult r;
  r.scheme = {SchemeKind::kCapacity, RateFamily::kCapacity, 0, 0};
  std::vector<double> rates;
  for (const auto& lp : plan.lightpaths) {
    const double bps = awgn_capacity(lp.snr) * plan.symbol_rate_hz;
    rates.push_back(bps);
    r.assignment.push_back({0, 0.0, bps});
  }
  r.theta_bps = throughput(plan, rates);
  r.shares = modulation_share(r);
  fill_activity(plan, r);
  return r;
}

PlanResult eval_ideal(const LightpathPlan& plan, RateFamily family, int m_max) {
  if (family == RateFamily::kCapacity) return eval_capacity(plan);
  PlanResult r;
  r.scheme = {family == RateFamily::kHd ? SchemeKind::kIdealHd : SchemeKind::kIdealSd, family, 0, m_max};
  const RateEnvelope env = rate_envelope(family, m_max);
  std::vector<double> rates;
  for (const auto& lp : plan.lightpaths) {
    const EnvelopePoint p = env(lp.snr);
    const double bps = p.se * plan.symbol_rate_hz;
    rates.push_back(bps);
    r.assignment.push_back({bps > 0.0 ? p.m : 0, bps > 0.0 ? p.se / (2.0 * p.m) : 0.0, bps});
  }
  r.theta_bps = throughput(plan, rates);
  r.shares = modulation_share(r);
  fill_activity(plan, r);
  return r;
}

PlanResult eval_qpsk7(const LightpathPlan& plan, RateFamily family) {
  check_pairs(plan);
  std::vector<int> group_of;
  const auto groups = group_lightpaths(plan, family, &group_of);
  PlanResult r = finish(plan, {SchemeKind::kQpsk7, family, 2, 2}, groups, group_of, {2}, {kQpsk7Rate});
  fill_activity(plan, r);
  if (r.theta_bps == 0.0) {
    std::ostringstream note;
    note << "some node pair has no lightpath above the QPSK 7% threshold ("
         << snr_threshold(family, 2, kQpsk7Rate) << " dB), so the uniform demand cannot be met";
    r.note = note.str();
  }
  return r;
}

double theta_at_rates(const LightpathPlan& plan, RateFamily family, FormatMode mode, double r1, double r2) {
  check_pairs(plan);
  const auto groups = group_lightpaths(plan, family, nullptr);
  const auto formats = formats_for(mode);
  std::vector<double> se(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Choice c = choose(groups[g], formats, {std::min(r1, r2), std::max(r1, r2)});
    se[g] = 2.0 * c.m * c.rc;
  }
  return theta_from_groups(plan, groups, se);
}

double theta_at_rate(const LightpathPlan& plan, RateFamily family, FormatMode mode, double rc) {
  return theta_at_rates(plan, family, mode, rc, rc);
}

PlanResult optimize_one_rate(const LightpathPlan& plan, RateFamily family, FormatMode mode) {
  if (family == RateFamily::kCapacity) throw Error(ErrorCode::kDomain, "code-rate search needs HD or SD rates");
  if (!mode.variable && mode.m == 0) {
    std::optional<PlanResult> best;
    for (int m = kMinBitsPerSymbol; m <= kMaxBitsPerSymbol; m += 2) {
      PlanResult r = optimize_one_rate(plan, family, FormatMode::one(m));
      if (!best || r.theta_bps > best->theta_bps) best = std::move(r);
    }
    best->scheme.m = 0;
    return *best;
  }
  check_pairs(plan);
  std::vector<int> group_of;
  const auto groups = group_lightpaths(plan, family, &group_of);
  const auto formats = formats_for(mode);
  const auto bps = breakpoints(groups, formats);

  double best_theta = -1.0;
  double best_rc = 0.0;
  std::vector<double> se(groups.size());
  for (double rc : bps) {
    for (std::size_t g = 0; g < groups.size(); ++g) se[g] = 2.0 * best_format(groups[g], formats, rc) * rc;
    const double th = theta_from_groups(plan, groups, se);
    if (th > best_theta) {
      best_theta = th;
      best_rc = rc;
    }
  }
  const Scheme scheme{mode.variable ? SchemeKind::kOneRVarM : SchemeKind::kOneROneM, family,
                      mode.variable ? 0 : mode.m, mode.variable ? mode.m : mode.m};
  std::vector<double> rates;
  if (best_theta > 0.0) rates.push_back(best_rc);
  PlanResult r = finish(plan, scheme, groups, group_of, formats, rates);
  r.m = mode.variable ? 0 : mode.m;
  fill_activity(plan, r);
  return r;
}

PlanResult optimize_two_rates(const LightpathPlan& plan, RateFamily family, FormatMode mode) {
  if (family == RateFamily::kCapacity) throw Error(ErrorCode::kDomain, "code-rate search needs HD or SD rates");
  if (!mode.variable && mode.m == 0) {
    std::optional<PlanResult> best;
    for (int m = kMinBitsPerSymbol; m <= kMaxBitsPerSymbol; m += 2) {
      PlanResult r = optimize_two_rates(plan, family, FormatMode::one(m));
      if (!best || r.theta_bps > best->theta_bps) best = std::move(r);
    }
    best->scheme.m = 0;
    return *best;
  }
  check_pairs(plan);
  std::vector<int> group_of;
  const auto groups = group_lightpaths(plan, family, &group_of);
  const auto formats = formats_for(mode);
  const auto bps = breakpoints(groups, formats);

  // value[b][g]: bit/symbol of group g when only rate bps[b] is available.
  std::vector<std::vector<double>> value(bps.size(), std::vector<double>(groups.size()));
  for (std::size_t b = 0; b < bps.size(); ++b) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      value[b][g] = 2.0 * best_format(groups[g], formats, bps[b]) * bps[b];
    }
  }
  const double scale = static_cast<double>(plan.n_nodes) * (plan.n_nodes - 1) * plan.symbol_rate_hz;
  double best_theta = -1.0;
  std::size_t bi = 0;
  std::size_t bj = 0;
  std::vector<double> c(plan.pairs.size());
  for (std::size_t i = 0; i < bps.size(); ++i) {
    for (std::size_t j = i; j < bps.size(); ++j) {
      std::fill(c.begin(), c.end(), 0.0);
      for (std::size_t g = 0; g < groups.size(); ++g) {
        c[groups[g].pair] += groups[g].count * std::max(value[i][g], value[j][g]);
      }
      double t = kInf;
      for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
        if (plan.pairs[k].weight > 0.0) t = std::min(t, c[k] / plan.pairs[k].weight);
      }
      const double th = std::isfinite(t) ? t * scale : 0.0;
      if (th > best_theta) {
        best_theta = th;
        bi = i;
        bj = j;
      }
    }
  }
  const Scheme scheme{mode.variable ? SchemeKind::kTwoRVarM : SchemeKind::kTwoROneM, family,
                      mode.variable ? 0 : mode.m, mode.m};
  std::vector<double> rates;
  if (best_theta > 0.0) {
    rates.push_back(bps[bi]);
    if (bj != bi) rates.push_back(bps[bj]);
  }
  PlanResult r = finish(plan, scheme, groups, group_of, formats, rates);
  r.m = mode.variable ? 0 : mode.m;
  fill_activity(plan, r);
  return r;
}

PlanResult evaluate_scheme(const LightpathPlan& plan, const Scheme& scheme) {
  switch (scheme.kind) {
    case SchemeKind::kCapacity: return eval_capacity(plan);
    case SchemeKind::kIdealHd: return eval_ideal(plan, RateFamily::kHd, scheme.m_max);
    case SchemeKind::kIdealSd: return eval_ideal(plan, RateFamily::kSdGmi, scheme.m_max);
    case SchemeKind::kQpsk7: return eval_qpsk7(plan, scheme.family);
    case SchemeKind::kOneROneM: return optimize_one_rate(plan, scheme.family, FormatMode::one(scheme.m));
    case SchemeKind::kTwoROneM: return optimize_two_rates(plan, scheme.family, FormatMode::one(scheme.m));
    case SchemeKind::kOneRVarM: return optimize_one_rate(plan, scheme.family, FormatMode::var(scheme.m_max));
    case SchemeKind::kTwoRVarM: return optimize_two_rates(plan, scheme.family, FormatMode::var(scheme.m_max));
  }
  throw Error(ErrorCode::kDomain, "unknown scheme");
}

std::vector<FormatShare> modulation_share(const PlanResult& result) {
  std::map<int, FormatShare> by_m;
  int active = 0;
  double carried = 0.0;
  for (const auto& a : result.assignment) {
    if (a.rate_bps <= 0.0) continue;
    auto& s = by_m.try_emplace(a.m, FormatShare{a.m, 0, 0.0, 0.0, 0.0}).first->second;
    s.transceivers += 2;
    s.carried_bps += a.rate_bps;
    active += 2;
    carried += a.rate_bps;
  }
  std::vector<FormatShare> out;
  for (auto& [m, s] : by_m) {
    s.percent = 100.0 * s.transceivers / active;
    s.contribution_bps = result.theta_bps * s.carried_bps / carried;
    out.push_back(s);
  }
  return out;
}

}  // namespace netfec
