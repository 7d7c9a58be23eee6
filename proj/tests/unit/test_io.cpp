#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hdcpd/detect.hpp"
#include "hdcpd/io.hpp"
#include "test_util.hpp"

using namespace hdcpd;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path(std::filesystem::temp_directory_path() / name) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
};

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("csv ingestion: well-formed, header, errors") {
  {
    TempFile f("hdcpd_ok.csv", "1.5,2\n3,4\n5,6.25\n");
    const DataMatrix data = ingest_csv(f.path, false);
    CHECK(data.n() == 3);
    CHECK(data.p() == 2);
    CHECK(data.at(0, 0) == 1.5);
    CHECK(data.at(2, 1) == 6.25);
  }
  {
    TempFile f("hdcpd_header.csv", "a,b\n1,2\n3,4\n");
    const DataMatrix data = ingest_csv(f.path, true);
    CHECK(data.n() == 2);
  }
  {
    TempFile f("hdcpd_na.csv", "1,2\n3,NA\n");
    CHECK_THROWS_WITH_AS(ingest_csv(f.path, false),
                         doctest::Contains("data row 2, column 2"), ValidationError);
  }
  {
    TempFile f("hdcpd_ragged.csv", "1,2\n3\n");
    CHECK_THROWS_WITH_AS(ingest_csv(f.path, false), doctest::Contains("ragged"),
                         ValidationError);
  }
  {
    TempFile f("hdcpd_empty.csv", "");
    CHECK_THROWS_AS(ingest_csv(f.path, false), ValidationError);
  }
  CHECK_THROWS_AS(ingest_csv("/nonexistent/happy.csv", false), ValidationError);
}

TEST_CASE("csv ingestion at returns-panel scale") {
  std::string content;
  RandomStream rs(4);
  for (int t = 0; t < 71; ++t) {
    for (int i = 0; i < 72; ++i) {
      if (i) content += ',';
      content += std::to_string(rs.normal());
    }
    content += '\n';
  }
  TempFile f("hdcpd_panel.csv", content);
  const DataMatrix data = ingest_csv(f.path, false);
  CHECK(data.n() == 71);
  CHECK(data.p() == 72);
}

TEST_CASE("log returns") {
  {
    DataMatrix prices(3, 2);
    for (double& v : prices.data) v = 7.0;
    const DataMatrix r = log_returns(prices);
    CHECK(r.n() == 2);
    for (const double v : r.data) CHECK(v == 0.0);
  }
  {
    DataMatrix prices(3, 1);
    prices.at(0, 0) = 1.0;
    prices.at(1, 0) = std::exp(1.0);
    prices.at(2, 0) = std::exp(2.0);
    const DataMatrix r = log_returns(prices);
    CHECK(r.at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.at(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    const DataMatrix prices = testutil::random_gaussian(5, 3, 8, 10.0);
    const DataMatrix r = log_returns(prices);
    for (std::size_t t = 0; t + 1 < 5; ++t) {
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r.at(t, i) ==
              doctest::Approx(std::log(prices.at(t + 1, i) / prices.at(t, i))).epsilon(1e-14));
      }
    }
  }
  {
    DataMatrix prices(2, 1);
    prices.at(0, 0) = 1.0;
    prices.at(1, 0) = -2.0;
    CHECK_THROWS_WITH_AS(log_returns(prices), doctest::Contains("row 2"), ValidationError);
  }
}

TEST_CASE("report json round-trips the in-memory record") {
  const DataMatrix data = testutil::random_gaussian(16, 4, 6);
  DataMatrix shifted = data;
  for (std::size_t t = 8; t < 16; ++t) {
    for (std::size_t j = 0; j < 4; ++j) shifted.at(t, j) += 2.5;
  }
  DetectConfig config;
  config.permutations = 49;
  config.seed = 77;
  const GroupingScheme scheme = build_scheme(SchemeMode::l1_sqrt, 4);
  const SingleResult result = single_changepoint_test(shifted, scheme, config);

  const ReportContext context{"detect-single", "input.csv", "l1sqrt"};
  const std::string text = report_to_json(result, context, 0.0);
  const auto parsed = nlohmann::json::parse(text);
  CHECK(parsed["config"]["command"] == "detect-single");
  CHECK(parsed["config"]["seed"] == 77);
  CHECK(parsed["details"][0]["tau"] == result.tau_hat);
  CHECK(parsed["details"][0]["new_regime_start"] == result.tau_hat + 1);
  CHECK(parsed["details"][0]["statistic"].get<double>() == result.m_n);
  CHECK(parsed["details"][0]["threshold"].get<double>() == result.threshold);
  CHECK(parsed["details"][0]["p_value"].get<double>() == result.p_value);
  CHECK(parsed["runtime_seconds"] == 0.0);
  if (result.rejected) {
    CHECK(parsed["locations"][0] == result.tau_hat);
  }
  // identical invocation, identical bytes
  CHECK(text == report_to_json(result, context, 0.0));

  // wbs report
  config.intervals = 20;
  const ChangePointSet cps = wbs_detect(shifted, scheme, config);
  const std::string wbs_text = report_to_json(cps, ReportContext{"detect-wbs", "x.csv", "l1sqrt"}, 0.0);
  const auto wbs_parsed = nlohmann::json::parse(wbs_text);
  CHECK(wbs_parsed["locations"].size() == cps.locations.size());
  for (std::size_t i = 0; i < cps.locations.size(); ++i) {
    CHECK(wbs_parsed["locations"][i] == cps.locations[i]);
    CHECK(wbs_parsed["details"][i]["statistic"].get<double>() == cps.details[i].statistic);
  }
}

TEST_CASE("quantile csv format") {
  QuantileTable table;
  table.probs = {0.9, 0.95};
  table.quants = {0.5, 0.75};
  table.reps = 100;
  const std::string csv = quantile_table_to_csv(table);
  CHECK(csv.rfind("prob,quantile\n", 0) == 0);
  CHECK(csv.find("0.90000000000000002,0.5\n") != std::string::npos);
}

TEST_CASE("profile csv has the documented columns") {
  const auto D = testutil::l1_distance_matrix(testutil::random_gaussian(10, 3, 5));
  const ScanProfile profile = weighted_t_profile(D, 1, 10);
  const std::string csv = profile_to_csv(profile);
  CHECK(csv.rfind("b,weight,t,weighted_t\n", 0) == 0);
  std::size_t lines = 0;
  for (const char c : csv) lines += c == '\n';
  CHECK(lines == profile.splits.size() + 1);
}

TEST_CASE("dataset csv round-trips at full precision") {
  const LabeledDataset ds = generate(Scenario::null_gauss_iid, 7, 3, 123);
  TempFile f("hdcpd_roundtrip.csv", dataset_to_csv(ds));
  const DataMatrix back = ingest_csv(f.path, false);
  REQUIRE(back.n() == ds.data.n());
  REQUIRE(back.p() == ds.data.p());
  for (std::size_t i = 0; i < back.data.size(); ++i) {
    CHECK(back.data[i] == ds.data.data[i]);
  }
  const auto sidecar = nlohmann::json::parse(dataset_sidecar_json(ds));
  CHECK(sidecar["scenario"] == "null_gauss_iid");
  CHECK(sidecar["n"] == 7);
  CHECK(sidecar["true_change_points"].empty());
}

TEST_CASE("experiment outputs") {
  ExperimentConfig config;
  config.scenario = Scenario::mean_shift_iid;
  config.n = 24;
  config.p = 6;
  config.permutations = 19;
  config.reps = 3;
  config.seed = 5;
  const ExperimentSummary summary = run_experiment(config);
  const std::string csv = experiment_to_csv(summary);
  CHECK(csv.rfind("rep,ari,n_locations,locations,runtime_seconds\n", 0) == 0);
  const auto json = nlohmann::json::parse(experiment_summary_json(summary));
  CHECK(json["scenario"] == "mean_shift_iid");
  CHECK(json["mean_ari"].get<double>() == summary.mean_ari);
  CHECK(json["reps"] == 3);
}

TEST_SUITE_END();
