#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "netfec/error.hpp"
#include "netfec/reporting.hpp"

using namespace netfec;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

class Reporting : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("netfec_reporting_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "topo");
    std::ofstream(dir_ / "topo" / "ring.json") << R"({"name":"Ring 5","nodes":[
      {"id":1,"name":"a"},{"id":2,"name":"b"},{"id":3,"name":"c"},{"id":4,"name":"d"},{"id":5,"name":"e"}],
      "links":[{"a":1,"b":2,"length_km":700},{"a":2,"b":3,"length_km":1500},{"a":3,"b":4,"length_km":900},
               {"a":4,"b":5,"length_km":400},{"a":5,"b":1,"length_km":2400},{"a":2,"b":4,"length_km":1100}]})";
    ::unsetenv(kOutDirEnv);
  }
  void TearDown() override {
    ::unsetenv(kOutDirEnv);
    fs::remove_all(dir_);
  }

  RunConfig tiny_config() const {
    auto c = default_run_config();
    c.topology = dir_ / "topo" / "ring.json";
    c.k_paths = 3;
    c.wavelengths = 6;
    return c;
  }

  fs::path dir_;
};

ErrorCode config_error(std::string_view json) {
  auto c = default_run_config();
  try {
    apply_config_json(c, json, ".");
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted " << json;
  return ErrorCode::kIo;
}

}  // namespace

TEST(Config, DefaultsAndParsing) {
  const auto c = default_run_config();
  EXPECT_EQ(c.k_paths, 16);
  EXPECT_EQ(c.kinds.size(), 8u);
  EXPECT_EQ(c.families.size(), 2u);
  EXPECT_FALSE(c.eta_per_w2.has_value());
  EXPECT_NEAR(coefficients_for(c).eta_per_w2, 742.0, 1e-12);
  // Capacity and the two ideal kinds appear once; the five practical kinds once per family.
  EXPECT_EQ(c.schemes().size(), 3u + 5u * 2u);

  EXPECT_EQ(parse_scheme_list("CAPACITY, 1rc1m").size(), 2u);
  EXPECT_EQ(parse_family_list("BOTH").size(), 2u);
  EXPECT_EQ(parse_family_list("sd").front(), RateFamily::kSdGmi);
  EXPECT_THROW(parse_family_list("MI"), Error);
  EXPECT_THROW(parse_scheme_list(""), Error);
}

TEST(Config, StrictKeysAndTypes) {
  EXPECT_EQ(config_error(R"({"k_path": 4})"), ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"k_paths": "four"})"), ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"k_paths": 0})"), ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"solver": {"budget": 3}})"), ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"schemes": ["CAPACITY", "5RC"]})"), ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"eta_per_w2": "big"})"), ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"fiber": {"span_length_km": -80}})"), ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"m_max": 7})"), ErrorCode::kConfig);
  EXPECT_EQ(config_error("[1,2"), ErrorCode::kConfig);

  auto c = default_run_config();
  apply_config_json(c, R"({"eta_per_w2": "gn_model", "k_paths": 5, "topology": "t.json", "schemes": ["QPSK_7"]})",
                    "/base");
  EXPECT_EQ(c.k_paths, 5);
  EXPECT_EQ(c.topology, fs::path("/base/t.json"));
  EXPECT_EQ(c.kinds, std::vector<SchemeKind>{SchemeKind::kQpsk7});
  EXPECT_NEAR(coefficients_for(c).eta_per_w2, gn_eta(c.fiber), 1e-9);
}

TEST_F(Reporting, BundledConfigsLoadWithResolvedPaths) {
  for (const char* name : {"default", "dtg", "nsf", "gb4"}) {
    const auto c = load_run_config(fs::path(NETFEC_DATA_DIR) / "config" / (std::string(name) + ".json"));
    EXPECT_TRUE(fs::exists(c.topology)) << name;
    EXPECT_EQ(c.k_paths, 16);
    EXPECT_EQ(c.solver.node_budget, 1000000);
  }
  EXPECT_THROW(load_run_config(dir_ / "missing.json"), Error);
}

TEST_F(Reporting, EnvironmentOverridesConfiguredOutDir) {
  auto c = tiny_config();
  c.out_dir = dir_ / "from_config";
  EXPECT_EQ(effective_out_dir(c), dir_ / "from_config");
  ::setenv(kOutDirEnv, (dir_ / "from_env").c_str(), 1);
  EXPECT_EQ(effective_out_dir(c), dir_ / "from_env");
  ::setenv(kOutDirEnv, "", 1);
  EXPECT_EQ(effective_out_dir(c), dir_ / "from_config");
}

TEST_F(Reporting, PlanBundleIsDeterministicAndWellFormed) {
  const auto c = tiny_config();
  const auto a = run_pipeline(c);
  const auto b = run_pipeline(c);
  const auto fa = write_plan_bundle(a, c, dir_ / "a");
  const auto fb = write_plan_bundle(b, c, dir_ / "b");
  ASSERT_EQ(fa.paths.size(), 5u);
  for (std::size_t i = 0; i < fa.paths.size(); ++i) {
    EXPECT_EQ(fa.paths[i].filename(), fb.paths[i].filename());
    EXPECT_EQ(slurp(fa.paths[i]), slurp(fb.paths[i])) << fa.paths[i];
  }
  const auto out = dir_ / "a";
  EXPECT_EQ(network_slug(a.network), "ring_5");
  EXPECT_EQ(first_line(out / "snr_histogram_ring_5.csv"), "snr_db,transceivers");
  EXPECT_EQ(first_line(out / "schemes_ring_5.csv"),
            "network,scheme,kind,family,theta_tbps,rc1,rc2,m,active_transceivers,inactive_transceivers,"
            "min_active_lightpaths");

  const auto plan = nlohmann::json::parse(slurp(out / "plan_ring_5.json"));
  EXPECT_EQ(plan.at("solver").at("status").get<std::string>(), a.plan.optimal ? "optimal" : "budget_exhausted");
  EXPECT_EQ(plan.at("transceivers").get<int>(), a.plan.transceivers());
  const auto doc = nlohmann::json::parse(slurp(out / "schemes_ring_5.json"));
  EXPECT_EQ(doc.at("network").get<std::string>(), "Ring 5");
  const auto& schemes = doc.at("schemes");
  ASSERT_TRUE(schemes.is_array());
  ASSERT_EQ(schemes.size(), a.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_NEAR(schemes[i].at("theta_tbps").get<double>(), a.results[i].theta_tbps(), 1e-9);
  }

  // Every throughput in the summary is the planner's value at two decimals.
  const auto summary = slurp(out / "summary_ring_5.txt");
  EXPECT_EQ(summary, summary_text(a, c));
  for (const auto& r : a.results) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r.theta_tbps());
    EXPECT_NE(summary.find(buf), std::string::npos) << buf;
  }

  int total = 0;
  for (const auto& bin : a.snr_bins) total += bin.count;
  EXPECT_EQ(total, a.plan.transceivers());
}

TEST_F(Reporting, SweepRowsPerAxisValue) {
  auto c = tiny_config();
  c.kinds = {SchemeKind::kOneROneM, SchemeKind::kOneRVarM};
  c.families = {RateFamily::kHd};
  const auto p = run_pipeline(c);
  const auto single = run_sweep(p.plan, c.kinds, c.families, SweepAxis::kM, {6});
  ASSERT_EQ(single.size(), 1u);  // only the one-format scheme follows m
  EXPECT_EQ(single[0].value, 6);
  const auto mm = run_sweep(p.plan, c.kinds, c.families, SweepAxis::kMMax, {4, 8, 10});
  ASSERT_EQ(mm.size(), 3u);
  EXPECT_LE(mm[0].theta_tbps, mm[1].theta_tbps + 1e-12);
  EXPECT_LE(mm[1].theta_tbps, mm[2].theta_tbps + 1e-12);
  const auto files = write_sweep(p.network, SweepAxis::kMMax, mm, dir_);
  ASSERT_EQ(files.paths.size(), 1u);
  EXPECT_EQ(files.paths[0].filename(), "sweep_m_max_ring_5_hd.csv");
  EXPECT_EQ(first_line(files.paths[0]), "network,family,scheme,m_max,qam_order,theta_tbps,rc1,rc2");
}

TEST_F(Reporting, RateAndSnrTables) {
  const auto path = write_rate_table(RateFamily::kSdGmi, {2, 4}, 0.0, 10.0, 0.5, dir_);
  const auto text = slurp(path);
  EXPECT_EQ(first_line(path), "kind,m,m_high,snr_db,se_bits_per_symbol");
  EXPECT_NE(text.find("crossing,2,4,"), std::string::npos);
  EXPECT_NE(text.find("threshold_qpsk_7,2,,6.5"), std::string::npos);

  try {
    write_rate_table(RateFamily::kHd, {}, 0.0, 10.0, 0.5, dir_);
    FAIL() << "empty format list accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }

  const auto snr = write_snr_table(coefficients_for(default_run_config()), 4, dir_);
  EXPECT_EQ(first_line(snr), "spans,length_km,launch_power_dbm,snr_db");

  std::ofstream(dir_ / "blocker") << "x";
  try {
    write_snr_table(coefficients_for(default_run_config()), 2, dir_ / "blocker" / "sub");
    FAIL() << "wrote below a regular file";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("blocker"), std::string::npos);
  }
}
