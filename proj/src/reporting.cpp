#include "netfec/reporting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "netfec/error.hpp"

namespace netfec {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string upper(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view text) {
  const auto b = text.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = text.find_last_not_of(" \t");
  return std::string(text.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    auto item = trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) throw Error(ErrorCode::kDomain, "non-finite value in output");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s(buf);
  if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
    if (!s.empty() && s[0] == '-') s.erase(0, 1);
  }
  return s;
}

std::string family_code(RateFamily f) {
  switch (f) {
    case RateFamily::kHd: return "HD";
    case RateFamily::kSdGmi: return "SD";
    case RateFamily::kMi: return "MI";
    case RateFamily::kCapacity: return "CAPACITY";
  }
  return "?";
}

bool uses_family(SchemeKind kind) { return kind == SchemeKind::kQpsk7 || is_practical(kind); }

// Minimal CSV table: a fixed header, rows checked against it before writing.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
      if (cells.size() != header.size()) {
        throw Error(ErrorCode::kDomain, "CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                            std::to_string(header.size()));
      }
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find_first_of(",\n\"") != std::string::npos) {
          throw Error(ErrorCode::kDomain, "CSV cell needs quoting: " + cells[i]);
        }
        out << (i ? "," : "") << cells[i];
      }
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out.str();
  }
};

void require_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::kDomain, std::string(what) + ": not an object");
  for (const char* k : keys) {
    if (!j.contains(k)) throw Error(ErrorCode::kDomain, std::string(what) + ": missing key " + k);
  }
}

void require_finite_numbers(const json& j) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw Error(ErrorCode::kDomain, "non-finite number in JSON output");
  }
  if (j.is_structured()) {
    for (const auto& item : j) require_finite_numbers(item);
  }
}

void write_text(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfig, std::string("config key '") + key + "' has the wrong type");
  }
}

void apply_fiber(FiberParams& f, const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config key 'fiber' must be an object");
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "attenuation_db_per_km") f.attenuation_db_per_km = get_as<double>(value, k);
    else if (key == "dispersion_ps_nm_km") f.dispersion_ps_nm_km = get_as<double>(value, k);
    else if (key == "gamma_per_w_km") f.gamma_per_w_km = get_as<double>(value, k);
    else if (key == "span_length_km") f.span_length_km = get_as<double>(value, k);
    else if (key == "edfa_noise_figure_db") f.edfa_noise_figure_db = get_as<double>(value, k);
    else if (key == "symbol_rate_hz") f.symbol_rate_hz = get_as<double>(value, k);
    else if (key == "channel_spacing_hz") f.channel_spacing_hz = get_as<double>(value, k);
    else if (key == "num_wdm_channels") f.num_wdm_channels = get_as<int>(value, k);
    else if (key == "center_wavelength_nm") f.center_wavelength_nm = get_as<double>(value, k);
    else if (key == "ase_model") {
      const auto m = get_as<std::string>(value, k);
      if (m == "gain_noise_figure") f.ase_model = AseModel::kGainNoiseFigure;
      else if (m == "excess_gain") f.ase_model = AseModel::kExcessGain;
      else throw Error(ErrorCode::kConfig, "unknown ase_model '" + m + "'");
    } else {
      throw Error(ErrorCode::kConfig, "unknown fiber key '" + key + "'");
    }
  }
  f.validate();
}

json scheme_json(const PlanResult& r) {
  json j;
  j["label"] = scheme_label(r.scheme);
  j["kind"] = std::string(to_string(r.scheme.kind));
  j["family"] = uses_family(r.scheme.kind) ? json(family_code(r.scheme.family)) : json(nullptr);
  j["theta_tbps"] = r.theta_tbps();
  j["rates"] = r.rates;
  j["m"] = r.m > 0 ? json(r.m) : json(nullptr);
  const auto shares = r.shares.empty() ? modulation_share(r) : r.shares;
  json share = json::array();
  json carried = json::array();
  for (const auto& s : shares) {
    share.push_back({{"m", s.m}, {"qam_order", s.m > 0 ? (1 << s.m) : 0}, {"transceivers", s.transceivers},
                     {"percent", s.percent}});
    carried.push_back({{"m", s.m}, {"carried_tbps", s.carried_bps * 1e-12}, {"contribution_tbps", s.contribution_bps * 1e-12}});
  }
  j["per_format_share"] = std::move(share);
  j["per_format_throughput"] = std::move(carried);
  j["inactive_transceivers"] = r.inactive_transceivers;
  j["min_active_lightpaths"] = r.min_active_lightpaths;
  j["note"] = r.note;
  require_keys(j, {"label", "kind", "theta_tbps", "rates", "per_format_share", "per_format_throughput"}, "scheme");
  return j;
}

int active_transceivers(const PlanResult& r) {
  int n = 0;
  for (const auto& a : r.assignment) n += a.rate_bps > 0.0 ? 2 : 0;
  return n;
}

const PlanResult* find_kind(const std::vector<PlanResult>& results, SchemeKind kind) {
  for (const auto& r : results) {
    if (r.scheme.kind == kind) return &r;
  }
  return nullptr;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string scheme_title(const Scheme& s) {
  switch (s.kind) {
    case SchemeKind::kCapacity: return "Capacity";
    case SchemeKind::kIdealSd: return "Ideal FEC, SD";
    case SchemeKind::kIdealHd: return "Ideal FEC, HD";
    case SchemeKind::kQpsk7: return "QPSK, 7% OH";
    case SchemeKind::kOneROneM: return "1 Rc, 1 M";
    case SchemeKind::kTwoROneM: return "2 Rc, 1 M";
    case SchemeKind::kOneRVarM: return "1 Rc, var M <= " + std::to_string(1 << s.m_max);
    case SchemeKind::kTwoRVarM: return "2 Rc, var M <= " + std::to_string(1 << s.m_max);
  }
  return "?";
}

}  // namespace

std::vector<Scheme> RunConfig::schemes() const {
  std::vector<Scheme> out;
  for (SchemeKind kind : kinds) {
    if (uses_family(kind)) {
      for (RateFamily f : families) out.push_back({kind, f, 0, m_max});
    } else {
      out.push_back({kind, RateFamily::kHd, 0, m_max});
    }
  }
  return out;
}

RunConfig default_run_config() {
  RunConfig c;
  c.kinds = {SchemeKind::kCapacity, SchemeKind::kIdealSd, SchemeKind::kIdealHd, SchemeKind::kQpsk7,
             SchemeKind::kOneROneM, SchemeKind::kTwoROneM, SchemeKind::kOneRVarM, SchemeKind::kTwoRVarM};
  c.families = {RateFamily::kHd, RateFamily::kSdGmi};
  return c;
}

std::vector<SchemeKind> parse_scheme_list(std::string_view csv) {
  std::vector<SchemeKind> out;
  for (const auto& item : split(csv, ',')) {
    const auto kind = parse_scheme_kind(item);
    if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
  }
  if (out.empty()) throw Error(ErrorCode::kConfig, "empty scheme list");
  return out;
}

std::vector<RateFamily> parse_family_list(std::string_view text) {
  const auto all = upper(trim(text));
  if (all == "BOTH") return {RateFamily::kHd, RateFamily::kSdGmi};
  std::vector<RateFamily> out;
  for (const auto& item : split(all, ',')) {
    RateFamily f;
    try {
      f = parse_rate_family(item);
    } catch (const Error&) {
      throw Error(ErrorCode::kConfig, "unknown receiver family '" + item + "'");
    }
    if (f != RateFamily::kHd && f != RateFamily::kSdGmi) {
      throw Error(ErrorCode::kConfig, "practical schemes need family HD or SD, got '" + item + "'");
    }
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  if (out.empty()) throw Error(ErrorCode::kConfig, "empty family list");
  return out;
}

void apply_config_json(RunConfig& c, std::string_view text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  bool eta_from_model = false;
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "topology") {
      c.topology = resolve(get_as<std::string>(value, k));
    } else if (key == "traffic") {
      if (value.is_null()) c.traffic.reset();
      else c.traffic = resolve(get_as<std::string>(value, k));
    } else if (key == "fiber") {
      apply_fiber(c.fiber, value);
    } else if (key == "eta_per_w2") {
      if (value.is_null()) {
        c.eta_per_w2.reset();
      } else if (value.is_string()) {
        if (value.get<std::string>() != "gn_model") throw Error(ErrorCode::kConfig, "eta_per_w2 must be a number, null or \"gn_model\"");
        eta_from_model = true;
      } else {
        c.eta_per_w2 = get_as<double>(value, k);
      }
    } else if (key == "k_paths") {
      c.k_paths = get_as<int>(value, k);
    } else if (key == "wavelengths") {
      c.wavelengths = get_as<int>(value, k);
    } else if (key == "solver") {
      if (!value.is_object()) throw Error(ErrorCode::kConfig, "config key 'solver' must be an object");
      for (const auto& [sk, sv] : value.items()) {
        if (sk == "node_budget") c.solver.node_budget = get_as<std::int64_t>(sv, "node_budget");
        else if (sk == "minimize_lightpaths") c.solver.minimize_lightpaths = get_as<bool>(sv, "minimize_lightpaths");
        else if (sk == "lightpath_node_budget") c.solver.lightpath_node_budget = get_as<std::int64_t>(sv, "lightpath_node_budget");
        else throw Error(ErrorCode::kConfig, "unknown solver key '" + sk + "'");
      }
    } else if (key == "schemes") {
      if (value.is_string()) {
        c.kinds = parse_scheme_list(value.get<std::string>());
      } else {
        std::string joined;
        for (const auto& s : get_as<std::vector<std::string>>(value, k)) joined += s + ",";
        c.kinds = parse_scheme_list(joined);
      }
    } else if (key == "families") {
      if (value.is_string()) {
        c.families = parse_family_list(value.get<std::string>());
      } else {
        std::string joined;
        for (const auto& s : get_as<std::vector<std::string>>(value, k)) joined += s + ",";
        c.families = parse_family_list(joined);
      }
    } else if (key == "m_max") {
      c.m_max = get_as<int>(value, k);
    } else if (key == "out_dir") {
      c.out_dir = resolve(get_as<std::string>(value, k));
    } else {
      throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
  }
  if (eta_from_model) c.eta_per_w2 = gn_eta(c.fiber);
  if (c.k_paths < 1) throw Error(ErrorCode::kConfig, "k_paths must be at least 1");
  if (c.wavelengths < 1) throw Error(ErrorCode::kConfig, "wavelengths must be at least 1");
  if (c.solver.node_budget < 1 || c.solver.lightpath_node_budget < 0) throw Error(ErrorCode::kConfig, "solver budgets must be positive");
  if (!is_supported_format(c.m_max)) throw Error(ErrorCode::kConfig, "m_max must be one of 2, 4, 6, 8, 10");
}

RunConfig load_run_config(const fs::path& file) {
  RunConfig c = default_run_config();
  apply_config_json(c, read_text(file), file.has_parent_path() ? file.parent_path() : fs::path("."));
  return c;
}

fs::path effective_out_dir(const RunConfig& config) {
  const char* env = std::getenv(kOutDirEnv);
  if (env && *env) return fs::path(env);
  return config.out_dir;
}

GnCoefficients coefficients_for(const RunConfig& config) {
  try {
    return default_coefficients(config.fiber, config.eta_per_w2.value_or(kDefaultEta));
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
}

std::string network_slug(const std::string& name) {
  std::string out;
  for (char ch : name) {
    const auto c = static_cast<unsigned char>(ch);
    out.push_back(std::isalnum(c) ? static_cast<char>(std::tolower(c)) : '_');
  }
  return out.empty() ? "network" : out;
}

PipelineResult run_pipeline(const RunConfig& config) {
  if (config.topology.empty()) throw Error(ErrorCode::kConfig, "no topology given");
  if (config.k_paths < 1) throw Error(ErrorCode::kConfig, "k_paths must be at least 1");
  Topology topo = load_topology(config.topology);
  const TrafficProfile traffic =
      config.traffic ? load_traffic(*config.traffic, topo.node_count()) : uniform_traffic(topo.node_count());
  const GnCoefficients coeffs = coefficients_for(config);
  const auto paths = enumerate_candidates(topo, traffic, config.k_paths, coeffs);
  auto instance = std::make_shared<const IlpInstance>(
      build_instance(topo, paths, capacity_rate, traffic, config.fiber.symbol_rate_hz, config.wavelengths));
  LightpathPlan plan = solve_max_min(instance, config.solver);

  PipelineResult out{topo.name(), std::move(topo), coeffs, std::move(plan), {}, {}, 0};
  out.snr_bins = snr_distribution(out.plan, coeffs);
  for (const auto& s : config.schemes()) out.results.push_back(evaluate_scheme(out.plan, s));
  out.first_fit_blocked = config.wavelengths <= 1024 ? first_fit_blocked(out.plan) : -1;
  return out;
}

std::string summary_text(const PipelineResult& r, const RunConfig& config) {
  const auto& plan = r.plan;
  std::ostringstream out;
  out << "Network " << r.network << ": " << r.topology.node_count() << " nodes, " << r.topology.links().size()
      << " links, " << plan.pairs.size() << " node pairs\n";
  out << "Physical layer: launch power " << fixed(watt_to_dbm(r.coeffs.launch_power_w), 2) << " dBm, eta "
      << fixed(r.coeffs.eta_per_w2, 1) << " W^-2, P_ASE " << fixed(r.coeffs.p_ase_w * 1e6, 4) << " uW per span\n";
  out << "Routing: k = " << config.k_paths << " candidate paths, " << config.wavelengths << " wavelengths per link\n";
  const double gap = plan.bound_bps() > 0.0 ? 100.0 * (plan.bound_bps() - plan.theta_bps()) / plan.bound_bps() : 0.0;
  out << "Solver: " << (plan.optimal ? "optimal" : "node budget exhausted") << ", " << plan.nodes
      << " nodes, bound " << fixed(plan.bound_bps() * 1e-12, 2) << " Tbps, gap " << fixed(gap, 3) << " %\n";
  out << "Transceivers: " << plan.transceivers() << (plan.lightpaths_minimal ? " (fewest for the optimum)" : "")
      << ", first-fit blocked lightpaths: " << r.first_fit_blocked << "\n\n";

  out << pad("Scheme", 22) << pad("Family", 8) << lpad("Theta [Tbps]", 13) << "  " << pad("Rc", 18) << "M\n";
  out << std::string(66, '-') << "\n";
  for (const auto& res : r.results) {
    std::string rc;
    for (std::size_t i = 0; i < res.rates.size(); ++i) rc += (i ? "/" : "") + fixed(res.rates[i], 4);
    if (rc.empty()) rc = "-";
    std::string m = res.m > 0 ? std::to_string(1 << res.m) + "QAM" : "-";
    if (is_variable_format(res.scheme.kind)) m = "var";
    out << pad(scheme_title(res.scheme), 22) << pad(uses_family(res.scheme.kind) ? family_code(res.scheme.family) : "-", 8)
        << lpad(fixed(res.theta_tbps(), 2), 13) << "  " << pad(rc, 18) << m << "\n";
    if (!res.note.empty()) out << "  note: " << res.note << "\n";
  }

  const auto* cap = find_kind(r.results, SchemeKind::kCapacity);
  const auto* sd = find_kind(r.results, SchemeKind::kIdealSd);
  const auto* hd = find_kind(r.results, SchemeKind::kIdealHd);
  auto loss = [](const PlanResult* a, const PlanResult* b) { return 100.0 * (1.0 - a->theta_bps / b->theta_bps); };
  if (cap && cap->theta_bps > 0.0 && (sd || hd)) {
    out << "\nRelative loss:";
    if (sd) out << " SD vs capacity " << fixed(loss(sd, cap), 1) << " %";
    if (hd) out << (sd ? "," : "") << " HD vs capacity " << fixed(loss(hd, cap), 1) << " %";
    if (sd && hd && sd->theta_bps > 0.0) out << ", HD vs SD " << fixed(loss(hd, sd), 1) << " %";
    out << "\n";
  }
  return out.str();
}

WrittenFiles write_plan_bundle(const PipelineResult& r, const RunConfig& config, const fs::path& out_dir) {
  const auto& plan = r.plan;
  const auto& inst = *plan.instance;
  const auto& nodes = r.topology.nodes();
  const std::string slug = network_slug(r.network);
  WrittenFiles files;

  json pj;
  pj["network"] = r.network;
  pj["nodes"] = r.topology.node_count();
  pj["links"] = r.topology.links().size();
  pj["k_paths"] = config.k_paths;
  pj["wavelengths"] = config.wavelengths;
  pj["eta_per_w2"] = r.coeffs.eta_per_w2;
  pj["launch_power_dbm"] = watt_to_dbm(r.coeffs.launch_power_w);
  pj["p_ase_w"] = r.coeffs.p_ase_w;
  pj["solver"] = {{"status", plan.optimal ? "optimal" : "budget_exhausted"},
                  {"objective_bits_per_symbol", plan.objective},
                  {"upper_bound_bits_per_symbol", plan.upper_bound},
                  {"theta_tbps", plan.theta_bps() * 1e-12},
                  {"bound_tbps", plan.bound_bps() * 1e-12},
                  {"gap_percent", plan.upper_bound > 0.0 ? 100.0 * (plan.upper_bound - plan.objective) / plan.upper_bound : 0.0},
                  {"nodes", plan.nodes},
                  {"lightpaths_minimal", plan.lightpaths_minimal}};
  pj["transceivers"] = plan.transceivers();
  pj["lightpath_count"] = plan.lightpaths.size();
  pj["first_fit_blocked"] = r.first_fit_blocked;
  json paths = json::array();
  for (std::size_t j = 0; j < inst.vars.size(); ++j) {
    if (plan.counts[j] == 0) continue;
    const auto& p = inst.vars[j].path;
    json route = json::array();
    for (int v : p.nodes) route.push_back(nodes[v].id);
    paths.push_back({{"source", nodes[p.s].id}, {"target", nodes[p.d].id}, {"route", route}, {"spans", p.n_spans},
                     {"snr_db", linear_to_db(p.snr)}, {"count", plan.counts[j]}});
  }
  pj["paths"] = std::move(paths);
  json snrs = json::array();
  for (const auto& lp : plan.lightpaths) snrs.push_back(linear_to_db(lp.snr));
  pj["lightpath_snr_db"] = std::move(snrs);
  json pairs = json::array();
  const auto thr = plan.pair_throughput_bps();
  std::vector<int> per_pair(plan.pairs.size(), 0);
  for (const auto& lp : plan.lightpaths) ++per_pair[lp.pair];
  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    pairs.push_back({{"source", nodes[plan.pairs[k].s].id}, {"target", nodes[plan.pairs[k].d].id},
                     {"weight", plan.pairs[k].weight}, {"lightpaths", per_pair[k]},
                     {"throughput_gbps", thr[k] * 1e-9}});
  }
  pj["pairs"] = std::move(pairs);
  require_keys(pj, {"network", "solver", "transceivers", "paths", "lightpath_snr_db", "pairs"}, "plan");
  require_finite_numbers(pj);
  files.paths.push_back(out_dir / ("plan_" + slug + ".json"));
  write_text(files.paths.back(), pj.dump(2) + "\n");

  CsvTable hist{{"snr_db", "transceivers"}, {}};
  for (const auto& b : r.snr_bins) hist.rows.push_back({fixed(b.snr_db, 4), std::to_string(b.count)});
  files.paths.push_back(out_dir / ("snr_histogram_" + slug + ".csv"));
  write_text(files.paths.back(), hist.render());

  json sj;
  sj["network"] = r.network;
  sj["schemes"] = json::array();
  for (const auto& res : r.results) sj["schemes"].push_back(scheme_json(res));
  require_finite_numbers(sj);
  files.paths.push_back(out_dir / ("schemes_" + slug + ".json"));
  write_text(files.paths.back(), sj.dump(2) + "\n");

  CsvTable table{{"network", "scheme", "kind", "family", "theta_tbps", "rc1", "rc2", "m", "active_transceivers",
                  "inactive_transceivers", "min_active_lightpaths"},
                 {}};
  for (const auto& res : r.results) {
    table.rows.push_back({slug, scheme_label(res.scheme), std::string(to_string(res.scheme.kind)),
                          uses_family(res.scheme.kind) ? family_code(res.scheme.family) : "",
                          fixed(res.theta_tbps(), 6), res.rates.size() > 0 ? fixed(res.rates[0], 6) : "",
                          res.rates.size() > 1 ? fixed(res.rates[1], 6) : "", res.m > 0 ? std::to_string(res.m) : "",
                          std::to_string(active_transceivers(res)), std::to_string(res.inactive_transceivers),
                          std::to_string(res.min_active_lightpaths)});
  }
  files.paths.push_back(out_dir / ("schemes_" + slug + ".csv"));
  write_text(files.paths.back(), table.render());

  files.paths.push_back(out_dir / ("summary_" + slug + ".txt"));
  write_text(files.paths.back(), summary_text(r, config));
  return files;
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto t = upper(trim(text));
  if (t == "M") return SweepAxis::kM;
  if (t == "M_MAX" || t == "MMAX" || t == "M-MAX") return SweepAxis::kMMax;
  throw Error(ErrorCode::kConfig, "sweep axis must be m or m_max, got '" + std::string(text) + "'");
}

std::vector<SweepRow> run_sweep(const LightpathPlan& plan, const std::vector<SchemeKind>& kinds,
                                const std::vector<RateFamily>& families, SweepAxis axis,
                                const std::vector<int>& values) {
  std::vector<SchemeKind> usable;
  for (SchemeKind k : kinds) {
    if (!is_practical(k)) continue;
    if ((axis == SweepAxis::kMMax) == is_variable_format(k)) usable.push_back(k);
  }
  if (usable.empty()) {
    throw Error(ErrorCode::kConfig, axis == SweepAxis::kM ? "the m axis needs 1RC1M or 2RC1M"
                                                          : "the m_max axis needs 1RCVARM or 2RCVARM");
  }
  if (values.empty()) throw Error(ErrorCode::kConfig, "empty sweep axis");
  for (int v : values) {
    if (!is_supported_format(v)) throw Error(ErrorCode::kConfig, "sweep values must be 2, 4, 6, 8 or 10");
  }
  std::vector<SweepRow> rows;
  for (RateFamily f : families) {
    for (SchemeKind k : usable) {
      for (int v : values) {
        Scheme s{k, f, axis == SweepAxis::kM ? v : 0, axis == SweepAxis::kMMax ? v : kMaxBitsPerSymbol};
        const auto res = evaluate_scheme(plan, s);
        rows.push_back({std::string(to_string(k)), f, v, res.theta_tbps(), res.rates, res.m});
      }
    }
  }
  return rows;
}

WrittenFiles write_sweep(const std::string& network, SweepAxis axis, const std::vector<SweepRow>& rows,
                         const fs::path& out_dir) {
  std::map<std::string, CsvTable> by_family;
  const std::string axis_name = axis == SweepAxis::kM ? "m" : "m_max";
  for (const auto& row : rows) {
    auto& t = by_family[family_code(row.family)];
    if (t.header.empty()) t.header = {"network", "family", "scheme", axis_name, "qam_order", "theta_tbps", "rc1", "rc2"};
    t.rows.push_back({network_slug(network), family_code(row.family), row.scheme, std::to_string(row.value),
                      std::to_string(1 << row.value), fixed(row.theta_tbps, 6),
                      row.rates.size() > 0 ? fixed(row.rates[0], 6) : "", row.rates.size() > 1 ? fixed(row.rates[1], 6) : ""});
  }
  WrittenFiles files;
  for (const auto& [fam, table] : by_family) {
    std::string lower = fam;
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    files.paths.push_back(out_dir / ("sweep_" + axis_name + "_" + network_slug(network) + "_" + lower + ".csv"));
    write_text(files.paths.back(), table.render());
  }
  return files;
}

fs::path write_rate_table(RateFamily family, const std::vector<int>& m_list, double lo, double hi, double step,
                          const fs::path& out_dir) {
  if (!(step > 0.0) || !(hi >= lo)) throw Error(ErrorCode::kConfig, "bad SNR range");
  std::vector<int> ms;
  if (family == RateFamily::kCapacity) {
    ms = {0};
  } else {
    if (m_list.empty()) throw Error(ErrorCode::kConfig, "empty format list");
    for (int m : m_list) {
      if (!is_supported_format(m)) throw Error(ErrorCode::kConfig, "unsupported format m=" + std::to_string(m));
    }
    ms = m_list;
  }
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  CsvTable t{{"kind", "m", "m_high", "snr_db", "se_bits_per_symbol"}, {}};
  for (int m : ms) {
    for (int i = 0; i < count; ++i) {
      const double db = lo + i * step;
      t.rows.push_back({"curve", std::to_string(m), "", fixed(db, 4), fixed(family_rate(family, m, db_to_linear(db)), 6)});
    }
  }
  if (family == RateFamily::kHd || family == RateFamily::kSdGmi) {
    for (const auto& c : find_crossings(family)) {
      if (!c.snr_db) continue;
      if (std::find(ms.begin(), ms.end(), c.m_low) == ms.end() || std::find(ms.begin(), ms.end(), c.m_high) == ms.end()) continue;
      t.rows.push_back({"crossing", std::to_string(c.m_low), std::to_string(c.m_high), fixed(*c.snr_db, 4),
                        fixed(family_rate(family, c.m_low, db_to_linear(*c.snr_db)), 6)});
    }
  }
  if (family != RateFamily::kCapacity && std::find(ms.begin(), ms.end(), 2) != ms.end()) {
    const double th = snr_threshold(family, 2, kQpsk7Rate);
    t.rows.push_back({"threshold_qpsk_7", "2", "", fixed(th, 4), fixed(2.0 * 2.0 * kQpsk7Rate, 6)});
  }
  std::string name = family_code(family);
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const fs::path path = out_dir / ("rates_" + name + ".csv");
  write_text(path, t.render());
  return path;
}

fs::path write_snr_table(const GnCoefficients& coeffs, int max_spans, const fs::path& out_dir) {
  if (max_spans < 1) throw Error(ErrorCode::kConfig, "max_spans must be positive");
  CsvTable t{{"spans", "length_km", "launch_power_dbm", "snr_db"}, {}};
  for (int n = 1; n <= max_spans; ++n) {
    t.rows.push_back({std::to_string(n), fixed(n * kSpanLengthKm, 1), fixed(watt_to_dbm(coeffs.launch_power_w), 4),
                      fixed(linear_to_db(path_snr(n, coeffs)), 4)});
  }
  const fs::path path = out_dir / "snr.csv";
  write_text(path, t.render());
  return path;
}

}  // namespace netfec
