#include "netfec/rwa_optimizer.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <map>
#include <optional>

#include "netfec/constellation_rates.hpp"
#include "netfec/error.hpp"
#include "netfec/milp.hpp"

namespace netfec {
namespace {

// Small positive costs on the lightpath counts. They break the heavy dual
// degeneracy of the max-min LP and nudge solutions toward fewer lightpaths
// without moving the optimal t.
double perturbation(int j) {
  const double golden = 0.6180339887498949;
  const double frac = std::fmod((j + 1) * golden, 1.0);
  return 1e-7 * (1.0 + frac);
}

std::vector<std::vector<int>> vars_by_pair(const IlpInstance& inst) {
  std::vector<std::vector<int>> out(inst.pairs.size());
  for (std::size_t j = 0; j < inst.vars.size(); ++j) out[inst.vars[j].pair].push_back(static_cast<int>(j));
  return out;
}

std::vector<double> pair_se(const IlpInstance& inst, const std::vector<int>& counts) {
  std::vector<double> c(inst.pairs.size(), 0.0);
  for (std::size_t j = 0; j < inst.vars.size(); ++j) c[inst.vars[j].pair] += inst.vars[j].se * counts[j];
  return c;
}

double objective_of(const IlpInstance& inst, const std::vector<int>& counts) {
  const auto c = pair_se(inst, counts);
  double t = kInf;
  for (std::size_t k = 0; k < inst.pairs.size(); ++k) t = std::min(t, c[k] / inst.pairs[k].weight);
  return inst.pairs.empty() ? 0.0 : t;
}

double t_upper_bound(const IlpInstance& inst) {
  std::vector<double> best(inst.pairs.size(), 0.0);
  for (const auto& v : inst.vars) best[v.pair] = std::max(best[v.pair], v.se);
  double u = kInf;
  for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
    // A pair can hold at most W lightpaths per incident link of its source.
    u = std::min(u, best[k] * inst.wavelengths * inst.n_links / inst.pairs[k].weight);
  }
  return std::isfinite(u) ? u : 0.0;
}

std::vector<SparseRow> link_rows(const IlpInstance& inst) {
  std::vector<SparseRow> rows(inst.n_links);
  for (std::size_t j = 0; j < inst.vars.size(); ++j) {
    for (int l : inst.vars[j].path.links) {
      rows[l].idx.push_back(static_cast<int>(j));
      rows[l].val.push_back(1.0);
    }
  }
  std::vector<SparseRow> out;
  for (auto& r : rows) {
    if (r.idx.empty()) continue;
    r.rhs = inst.wavelengths;
    out.push_back(std::move(r));
  }
  return out;
}

// Mixed-integer rounding of  sum_p (se_p / se_max) x_p >= target / se_max.
// Any integer point whose pair carries at least `target` satisfies it.
SparseRow pair_cut(const IlpInstance& inst, const std::vector<int>& vars, double target) {
  double top = 0.0;
  for (int j : vars) top = std::max(top, inst.vars[j].se);
  SparseRow row;
  if (top <= 0.0) {
    row.rhs = target > 0.0 ? -1.0 : 0.0;
    return row;
  }
  const double beta = -target / top;
  const double f0 = beta - std::floor(beta);
  for (int j : vars) {
    const double a = -inst.vars[j].se / top;
    const double fa = a - std::floor(a);
    double coef = std::floor(a);
    if (f0 > 1e-9 && f0 < 1.0 - 1e-9) coef += std::max(0.0, fa - f0) / (1.0 - f0);
    if (coef != 0.0) {
      row.idx.push_back(j);
      row.val.push_back(coef);
    }
  }
  row.rhs = f0 > 1.0 - 1e-9 ? std::ceil(beta) : std::floor(beta);
  return row;
}

// max t with every pair at least `target` (target <= 0 disables the cuts).
MilpProblem max_min_problem(const IlpInstance& inst, double target, bool perturb) {
  const int n = static_cast<int>(inst.vars.size());
  MilpProblem p;
  p.cost.assign(n + 1, 0.0);
  p.lo.assign(n + 1, 0.0);
  p.hi.assign(n + 1, inst.wavelengths);
  p.integer.assign(n + 1, 1);
  for (int j = 0; j < n && perturb; ++j) p.cost[j] = perturbation(j);
  p.cost[n] = -1.0;
  p.lo[n] = std::max(0.0, target);
  p.hi[n] = std::max(t_upper_bound(inst), p.lo[n]);
  p.integer[n] = 0;

  const auto groups = vars_by_pair(inst);
  for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
    SparseRow row;
    for (int j : groups[k]) {
      row.idx.push_back(j);
      row.val.push_back(-inst.vars[j].se);
    }
    row.idx.push_back(n);
    row.val.push_back(inst.pairs[k].weight);
    row.rhs = 0.0;
    p.rows.push_back(std::move(row));
  }
  for (auto& r : link_rows(inst)) p.rows.push_back(std::move(r));
  if (target > 0.0) {
    for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
      p.rows.push_back(pair_cut(inst, groups[k], target * inst.pairs[k].weight));
    }
  }
  return p;
}

// min number of lightpaths with every pair at least `target`.
MilpProblem min_lightpath_problem(const IlpInstance& inst, double target) {
  const int n = static_cast<int>(inst.vars.size());
  MilpProblem p;
  p.cost.assign(n, 1.0);
  p.lo.assign(n, 0.0);
  p.hi.assign(n, inst.wavelengths);
  p.integer.assign(n, 1);
  const auto groups = vars_by_pair(inst);
  for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
    SparseRow row;
    for (int j : groups[k]) {
      row.idx.push_back(j);
      row.val.push_back(-inst.vars[j].se);
    }
    row.rhs = -target * inst.pairs[k].weight;
    p.rows.push_back(std::move(row));
  }
  for (auto& r : link_rows(inst)) p.rows.push_back(std::move(r));
  for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
    p.rows.push_back(pair_cut(inst, groups[k], target * inst.pairs[k].weight));
  }
  return p;
}

// Adds lightpaths to the currently worst pair until it cannot grow.
void greedy_fill(const IlpInstance& inst, std::vector<int>& counts) {
  std::vector<int> load(inst.n_links, 0);
  for (std::size_t j = 0; j < inst.vars.size(); ++j) {
    for (int l : inst.vars[j].path.links) load[l] += counts[j];
  }
  auto c = pair_se(inst, counts);
  const auto groups = vars_by_pair(inst);
  while (true) {
    int worst = -1;
    double worst_val = kInf;
    for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
      const double v = c[k] / inst.pairs[k].weight;
      if (v < worst_val) {
        worst_val = v;
        worst = static_cast<int>(k);
      }
    }
    if (worst < 0) return;
    int pick = -1;
    int pick_spans = 0;
    int pick_load = 0;
    for (int j : groups[worst]) {
      const auto& v = inst.vars[j];
      if (v.se <= 0.0) continue;
      int peak = 0;
      bool fits = true;
      for (int l : v.path.links) {
        if (load[l] >= inst.wavelengths) fits = false;
        peak = std::max(peak, load[l]);
      }
      if (!fits) continue;
      if (pick < 0 || v.path.n_spans < pick_spans ||
          (v.path.n_spans == pick_spans && peak < pick_load)) {
        pick = j;
        pick_spans = v.path.n_spans;
        pick_load = peak;
      }
    }
    if (pick < 0) return;
    ++counts[pick];
    for (int l : inst.vars[pick].path.links) ++load[l];
    c[worst] += inst.vars[pick].se;
  }
}

// Drops lightpaths (longest candidates first) that no pair needs to keep
// its throughput at or above target.
void prune_surplus(const IlpInstance& inst, std::vector<int>& counts, double target) {
  auto c = pair_se(inst, counts);
  for (int j = static_cast<int>(inst.vars.size()) - 1; j >= 0; --j) {
    const auto& v = inst.vars[j];
    const double need = target * inst.pairs[v.pair].weight * (1.0 - 1e-12);
    while (counts[j] > 0 && c[v.pair] - v.se >= need) {
      --counts[j];
      c[v.pair] -= v.se;
    }
  }
}

// Tops up every pair below `target` with lightpaths on its highest-rate
// path that still fits. False when some pair cannot be lifted.
bool repair_to_target(const IlpInstance& inst, std::vector<int>& counts, double target) {
  std::vector<int> load(inst.n_links, 0);
  for (std::size_t j = 0; j < inst.vars.size(); ++j) {
    for (int l : inst.vars[j].path.links) load[l] += counts[j];
  }
  auto c = pair_se(inst, counts);
  const auto groups = vars_by_pair(inst);
  for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
    const double need = target * inst.pairs[k].weight;
    while (c[k] < need) {
      int pick = -1;
      for (int j : groups[k]) {
        const auto& v = inst.vars[j];
        if (v.se <= 0.0) continue;
        bool fits = true;
        for (int l : v.path.links) fits = fits && load[l] < inst.wavelengths;
        if (fits && (pick < 0 || v.se > inst.vars[pick].se)) pick = j;
      }
      if (pick < 0) return false;
      ++counts[pick];
      c[k] += inst.vars[pick].se;
      for (int l : inst.vars[pick].path.links) ++load[l];
    }
  }
  return true;
}

std::vector<int> rounded_counts(const std::vector<double>& x, int n) {
  std::vector<int> counts(n);
  for (int j = 0; j < n; ++j) counts[j] = static_cast<int>(std::lround(x[j]));
  return counts;
}

double cut_lp_bound(const IlpInstance& inst, double target) {
  MilpProblem p = max_min_problem(inst, target, false);
  DualSimplex lp(p.cost, p.lo, p.hi, p.rows);
  if (lp.solve() != DualSimplex::Status::kOptimal) return target;
  return lp.value(static_cast<int>(inst.vars.size()));
}

}  // namespace

double capacity_rate(double snr) { return awgn_capacity(snr); }

std::vector<CandidatePath> enumerate_candidates(const Topology& topo, const TrafficProfile& traffic,
                                                int k, const GnCoefficients& coeffs) {
  if (traffic.size() != topo.node_count()) {
    throw Error(ErrorCode::kConfig, "traffic matrix size does not match the topology");
  }
  std::vector<CandidatePath> out;
  for (int s = 0; s < topo.node_count(); ++s) {
    for (int d = s + 1; d < topo.node_count(); ++d) {
      if (traffic.at(s, d) <= 0.0 && traffic.at(d, s) <= 0.0) continue;
      for (auto& p : k_shortest_paths(topo, s, d, k)) {
        p.snr = path_snr(p.n_spans, coeffs);
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

IlpInstance build_instance(const Topology& topo, const std::vector<CandidatePath>& paths,
                           const RateFn& rate_fn, const TrafficProfile& traffic,
                           double symbol_rate_hz, int wavelengths) {
  const int n = topo.node_count();
  if (traffic.size() != n) throw Error(ErrorCode::kConfig, "traffic matrix size does not match the topology");
  if (wavelengths < 1) throw Error(ErrorCode::kConfig, "wavelength count must be positive");
  IlpInstance inst;
  inst.n_nodes = n;
  inst.n_links = static_cast<int>(topo.links().size());
  inst.wavelengths = wavelengths;
  inst.symbol_rate_hz = symbol_rate_hz;

  std::map<std::pair<int, int>, int> index;
  const double scale = static_cast<double>(n) * (n - 1);
  for (int s = 0; s < n; ++s) {
    for (int d = s + 1; d < n; ++d) {
      const double t = std::max(traffic.at(s, d), traffic.at(d, s));
      if (t <= 0.0) continue;
      double w = scale * t;
      if (std::abs(w - std::round(w)) < 1e-9) w = std::round(w);
      index[{s, d}] = static_cast<int>(inst.pairs.size());
      inst.pairs.push_back({s, d, w});
    }
  }
  std::vector<std::vector<PathVar>> grouped(inst.pairs.size());
  for (const auto& p : paths) {
    auto it = index.find({std::min(p.s, p.d), std::max(p.s, p.d)});
    if (it == index.end()) continue;
    grouped[it->second].push_back({it->second, p, rate_fn(p.snr)});
  }
  for (std::size_t k = 0; k < grouped.size(); ++k) {
    if (grouped[k].empty()) {
      throw Error(ErrorCode::kUncoveredPair, "no candidate path for " + topo.nodes()[inst.pairs[k].s].name +
                                                 "-" + topo.nodes()[inst.pairs[k].d].name);
    }
    for (auto& v : grouped[k]) inst.vars.push_back(std::move(v));
  }
  return inst;
}

double LightpathPlan::theta_bps() const noexcept {
  return static_cast<double>(n_nodes) * (n_nodes - 1) * objective * symbol_rate_hz;
}

double LightpathPlan::bound_bps() const noexcept {
  return static_cast<double>(n_nodes) * (n_nodes - 1) * upper_bound * symbol_rate_hz;
}

std::vector<double> LightpathPlan::pair_throughput_bps() const {
  std::vector<double> c(pairs.size(), 0.0);
  if (!instance) return c;
  for (const auto& lp : lightpaths) c[lp.pair] += instance->vars[lp.var].se * symbol_rate_hz;
  return c;
}

bool is_feasible(const IlpInstance& inst, const std::vector<int>& counts) {
  if (counts.size() != inst.vars.size()) return false;
  std::vector<int> load(inst.n_links, 0);
  for (std::size_t j = 0; j < inst.vars.size(); ++j) {
    if (counts[j] < 0) return false;
    for (int l : inst.vars[j].path.links) load[l] += counts[j];
  }
  return std::all_of(load.begin(), load.end(), [&](int v) { return v <= inst.wavelengths; });
}

LightpathPlan make_plan(std::shared_ptr<const IlpInstance> instance, std::vector<int> counts) {
  LightpathPlan plan;
  plan.n_nodes = instance->n_nodes;
  plan.symbol_rate_hz = instance->symbol_rate_hz;
  plan.pairs = instance->pairs;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    for (int c = 0; c < counts[j]; ++c) {
      plan.lightpaths.push_back({instance->vars[j].pair, static_cast<int>(j), instance->vars[j].path.snr});
    }
  }
  plan.objective = objective_of(*instance, counts);
  plan.upper_bound = plan.objective;
  plan.counts = std::move(counts);
  plan.instance = std::move(instance);
  return plan;
}

LightpathPlan greedy_plan(const std::shared_ptr<const IlpInstance>& instance) {
  std::vector<int> counts(instance->vars.size(), 0);
  greedy_fill(*instance, counts);
  return make_plan(instance, std::move(counts));
}

double lp_relaxation_bound(const IlpInstance& inst) {
  MilpProblem p = max_min_problem(inst, 0.0, false);
  DualSimplex lp(p.cost, p.lo, p.hi, p.rows);
  if (lp.solve() != DualSimplex::Status::kOptimal) return 0.0;
  return lp.value(static_cast<int>(inst.vars.size()));
}

LightpathPlan solve_max_min(const std::shared_ptr<const IlpInstance>& instance, const SolveOptions& options) {
  const IlpInstance& inst = *instance;
  const int n = static_cast<int>(inst.vars.size());

  // Starting incumbent: plain greedy, or greedy on top of the floored LP point.
  std::vector<int> best(n, 0);
  greedy_fill(inst, best);
  {
    MilpProblem p = max_min_problem(inst, 0.0, true);
    DualSimplex lp(p.cost, p.lo, p.hi, p.rows);
    if (lp.solve() == DualSimplex::Status::kOptimal) {
      std::vector<int> floored(n);
      for (int j = 0; j < n; ++j) floored[j] = static_cast<int>(std::floor(lp.value(j) + 1e-9));
      greedy_fill(inst, floored);
      if (is_feasible(inst, floored) && objective_of(inst, floored) > objective_of(inst, best)) best = floored;
    }
  }

  std::int64_t nodes = 0;
  bool optimal = false;
  double t_best = objective_of(inst, best);
  double bound = t_best;
  // No positive objective lies below the smallest positive per-pair rate, so
  // that is the first target to try from zero.
  double first_positive = kInf;
  for (const auto& v : inst.vars) {
    if (v.se > 0.0) first_positive = std::min(first_positive, v.se / inst.pairs[v.pair].weight);
  }
  while (true) {
    if (t_best <= 0.0 && !std::isfinite(first_positive)) {
      optimal = true;
      break;
    }
    // The step must clear the LP feasibility tolerance, so "optimal" means no
    // plan is better by more than one part per million.
    const double target = t_best > 0.0 ? t_best + 1e-6 * std::max(1.0, t_best) : first_positive * (1.0 - 1e-9);
    MilpOptions mo;
    mo.node_budget = options.node_budget - nodes;
    mo.stop_at_first_feasible = true;
    mo.heuristic = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
      std::vector<int> counts(n);
      for (int j = 0; j < n; ++j) counts[j] = static_cast<int>(std::floor(x[j] + 1e-9));
      greedy_fill(inst, counts);
      const double t = objective_of(inst, counts);
      if (t < target || !is_feasible(inst, counts)) return std::nullopt;
      std::vector<double> sol(counts.begin(), counts.end());
      sol.push_back(t);
      return sol;
    };
    const MilpResult r = solve_milp(max_min_problem(inst, target, true), mo);
    nodes += r.nodes;
    if (r.status == MilpStatus::kInfeasible) {
      optimal = true;
      bound = t_best;
      break;
    }
    if (r.status == MilpStatus::kFeasible) {
      auto counts = rounded_counts(r.x, n);
      const double t = objective_of(inst, counts);
      if (is_feasible(inst, counts) && t > t_best) {
        best = std::move(counts);
        t_best = t;
        continue;
      }
      // Rounding lost the improvement; treat the target as unreachable.
      optimal = false;
      bound = cut_lp_bound(inst, target);
      break;
    }
    bound = std::max(target, cut_lp_bound(inst, target));
    break;
  }

  bool minimal = false;
  if (options.minimize_lightpaths && t_best > 0.0) {
    prune_surplus(inst, best, t_best);
    const double target = t_best * (1.0 - 1e-12);
    MilpOptions mo;
    mo.node_budget = options.lightpath_node_budget;
    mo.integral_objective = true;
    mo.incumbent_objective = 0.0;
    for (int c : best) mo.incumbent_objective += c;
    mo.heuristic = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
      std::vector<int> counts(n);
      for (int j = 0; j < n; ++j) counts[j] = static_cast<int>(std::floor(x[j] + 1e-9));
      if (!repair_to_target(inst, counts, target)) return std::nullopt;
      prune_surplus(inst, counts, target);
      if (!is_feasible(inst, counts) || objective_of(inst, counts) < target) return std::nullopt;
      return std::vector<double>(counts.begin(), counts.end());
    };
    const MilpResult r = solve_milp(min_lightpath_problem(inst, target), mo);
    if (!r.x.empty()) {
      auto counts = rounded_counts(r.x, n);
      if (is_feasible(inst, counts) && objective_of(inst, counts) >= target) best = std::move(counts);
    }
    minimal = r.status == MilpStatus::kOptimal || r.status == MilpStatus::kInfeasible;
  }

  LightpathPlan plan = make_plan(instance, std::move(best));
  plan.optimal = optimal;
  plan.upper_bound = std::max(bound, plan.objective);
  plan.lightpaths_minimal = minimal;
  plan.nodes = nodes;
  return plan;
}

std::vector<SnrBin> snr_distribution(const LightpathPlan& plan, const GnCoefficients& coeffs) {
  std::map<int, int> by_spans;
  for (const auto& lp : plan.lightpaths) {
    const int spans = plan.instance ? plan.instance->vars[lp.var].path.n_spans : 0;
    by_spans[spans] += 2;
  }
  std::vector<SnrBin> out;
  for (auto it = by_spans.rbegin(); it != by_spans.rend(); ++it) {
    out.push_back({linear_to_db(path_snr(it->first, coeffs)), it->second});
  }
  return out;
}

int first_fit_blocked(const LightpathPlan& plan) {
  if (!plan.instance) return 0;
  const auto& inst = *plan.instance;
  if (inst.wavelengths > 1024) throw Error(ErrorCode::kDomain, "first-fit supports at most 1024 channels");
  std::vector<std::bitset<1024>> used(inst.n_links);
  std::vector<int> order(plan.lightpaths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.vars[plan.lightpaths[a].var].path.links.size() > inst.vars[plan.lightpaths[b].var].path.links.size();
  });
  int blocked = 0;
  for (int i : order) {
    const auto& links = inst.vars[plan.lightpaths[i].var].path.links;
    int channel = -1;
    for (int w = 0; w < inst.wavelengths && channel < 0; ++w) {
      if (std::none_of(links.begin(), links.end(), [&](int l) { return used[l][w]; })) channel = w;
    }
    if (channel < 0) {
      ++blocked;
      continue;
    }
    for (int l : links) used[l][channel] = true;
  }
  return blocked;
}

}  // namespace netfec
