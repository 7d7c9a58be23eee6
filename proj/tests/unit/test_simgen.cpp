#include <doctest.h>

#include <cmath>
#include <map>

#include "hdcpd/simgen.hpp"
#include "test_util.hpp"

using namespace hdcpd;

namespace {

double column_block_mean(const DataMatrix& data, std::size_t t0, std::size_t t1) {
  double sum = 0;
  for (std::size_t t = t0; t < t1; ++t) {
    for (const double v : data.row(t)) sum += v;
  }
  return sum / (static_cast<double>(t1 - t0) * static_cast<double>(data.p()));
}

double column_block_var(const DataMatrix& data, std::size_t t0, std::size_t t1) {
  const double mean = column_block_mean(data, t0, t1);
  double ss = 0;
  std::size_t count = 0;
  for (std::size_t t = t0; t < t1; ++t) {
    for (const double v : data.row(t)) {
      ss += (v - mean) * (v - mean);
      ++count;
    }
  }
  return ss / static_cast<double>(count - 1);
}

}  // namespace

TEST_SUITE_BEGIN("simgen");

TEST_CASE("scenario names round-trip") {
  for (const auto name : scenario_names()) {
    CHECK(scenario_name(scenario_from_name(name)) == name);
  }
  CHECK_THROWS_AS(scenario_from_name("bogus"), ValidationError);
}

TEST_CASE("generation is deterministic per (scenario, n, p, seed)") {
  for (const auto scenario : {Scenario::null_gauss_iid, Scenario::null_arch2,
                              Scenario::higher_moment_poisson_rademacher, Scenario::fvbm}) {
    const LabeledDataset a = generate(scenario, 24, 6, 77);
    const LabeledDataset b = generate(scenario, 24, 6, 77);
    CHECK(a.data.data == b.data.data);
    CHECK(a.true_cps == b.true_cps);
    const LabeledDataset c = generate(scenario, 24, 6, 78);
    CHECK(a.data.data != c.data.data);
  }
}

TEST_CASE("true change-point locations per scenario") {
  CHECK(generate(Scenario::null_gauss_iid, 100, 5, 1).true_cps.empty());
  CHECK(generate(Scenario::null_garch11, 50, 5, 1).true_cps.empty());
  CHECK(generate(Scenario::mean_shift_iid, 100, 5, 1).true_cps ==
        std::vector<std::uint32_t>{50});
  CHECK(generate(Scenario::higher_moment_exp, 101, 5, 1).true_cps ==
        std::vector<std::uint32_t>{50});
  CHECK(generate(Scenario::two_cp_mean_iid, 100, 5, 1).true_cps ==
        std::vector<std::uint32_t>{33, 66});
  CHECK(generate(Scenario::two_cp_higher_poisson, 99, 5, 1).true_cps ==
        std::vector<std::uint32_t>{33, 66});
  CHECK(generate(Scenario::directed_chain, 100, 5, 1).true_cps ==
        std::vector<std::uint32_t>{50});
  CHECK(generate(Scenario::fvbm, 50, 4, 1).true_cps == std::vector<std::uint32_t>{25});
}

TEST_CASE("cross-sectional AR rows have lag-1 correlation 0.7") {
  const LabeledDataset ds = generate(Scenario::null_gauss_ar, 10000, 30, 5);
  double sum_xy = 0, sum_xx = 0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < ds.data.n(); ++t) {
    const auto row = ds.data.row(t);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      sum_xy += row[j] * row[j + 1];
      sum_xx += row[j] * row[j];
      ++count;
    }
  }
  const double lag1 = sum_xy / sum_xx;
  CHECK(lag1 == doctest::Approx(0.7).epsilon(0.03));
  (void)count;
}

TEST_CASE("higher-moment exponential scenario matches means and variances across regimes") {
  const LabeledDataset ds = generate(Scenario::higher_moment_exp, 2000, 50, 9);
  const std::size_t half = 1000;
  const double m1 = column_block_mean(ds.data, 0, half);
  const double m2 = column_block_mean(ds.data, half, 2000);
  const double v1 = column_block_var(ds.data, 0, half);
  const double v2 = column_block_var(ds.data, half, 2000);
  const double se_mean = 1.0 / std::sqrt(half * 50.0);
  CHECK(std::abs(m1 - 1.0) <= 3 * se_mean);
  CHECK(std::abs(m2 - 1.0) <= 3 * se_mean);
  CHECK(std::abs(v1 - 1.0) <= 0.05);
  CHECK(std::abs(v2 - 1.0) <= 0.05);
}

TEST_CASE("poisson-rademacher regimes share mean zero and unit variance") {
  const LabeledDataset ds = generate(Scenario::higher_moment_poisson_rademacher, 2000, 40, 13);
  const double m1 = column_block_mean(ds.data, 0, 1000);
  const double m2 = column_block_mean(ds.data, 1000, 2000);
  CHECK(std::abs(m1) <= 0.02);
  CHECK(std::abs(m2) <= 0.02);
  CHECK(column_block_var(ds.data, 0, 1000) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(column_block_var(ds.data, 1000, 2000) == doctest::Approx(1.0).epsilon(0.05));
  // second regime: trailing block takes values in {-1, +1}
  const auto row = ds.data.row(1500);
  for (std::size_t j = 20; j < 40; ++j) CHECK(std::abs(row[j]) == 1.0);
}

TEST_CASE("banded scenario keeps the banded covariance across regimes") {
  const LabeledDataset ds = generate(Scenario::higher_moment_banded, 4000, 30, 3);
  // var 1, corr 0.25 at lags 1..2, 0 at lag 3 (within sampling error)
  for (const auto [t0, t1] : {std::pair<std::size_t, std::size_t>{0, 2000},
                              std::pair<std::size_t, std::size_t>{2000, 4000}}) {
    CHECK(column_block_var(ds.data, t0, t1) == doctest::Approx(1.0).epsilon(0.06));
    double lag1 = 0, lag3 = 0, norm = 0;
    for (std::size_t t = t0; t < t1; ++t) {
      const auto row = ds.data.row(t);
      for (std::size_t j = 0; j + 3 < row.size(); ++j) {
        lag1 += row[j] * row[j + 1];
        lag3 += row[j] * row[j + 3];
        norm += row[j] * row[j];
      }
    }
    CHECK(lag1 / norm == doctest::Approx(0.25).epsilon(0.15));
    CHECK(std::abs(lag3 / norm) <= 0.03);
  }
}

TEST_CASE("volatility scenarios match the unconditional variance") {
  {
    const LabeledDataset ds = generate(Scenario::null_arch2, 2000, 40, 21);
    const double uncond = 1e-6 / (1.0 - 0.008 - 0.001);
    CHECK(column_block_mean(ds.data, 0, 2000) == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(column_block_var(ds.data, 0, 2000) == doctest::Approx(uncond).epsilon(0.05));
  }
  {
    const LabeledDataset ds = generate(Scenario::null_garch11, 2000, 40, 22);
    const double uncond = 1e-6 / (1.0 - 0.001 - 0.001);
    CHECK(column_block_var(ds.data, 0, 2000) == doctest::Approx(uncond).epsilon(0.05));
  }
}

TEST_CASE("directed chain: innovations recovered from the recursion switch regime") {
  const LabeledDataset ds = generate(Scenario::directed_chain, 400, 60, 31);
  const std::size_t half = 200;
  double mean1 = 0, mean2 = 0;
  std::size_t negatives2 = 0, count = 0;
  for (std::size_t t = 0; t < ds.data.n(); ++t) {
    const auto row = ds.data.row(t);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double eps = j == 0 ? row[0] : row[j] - 0.5 * row[j - 1];
      if (t < half) {
        mean1 += eps;
      } else {
        mean2 += eps;
        if (eps < 0) ++negatives2;
      }
      ++count;
    }
  }
  mean1 /= static_cast<double>(half * 60);
  mean2 /= static_cast<double>(half * 60);
  CHECK(mean1 == doctest::Approx(1.0).epsilon(0.02));   // Gaussian innovations, mean 1
  CHECK(mean2 == doctest::Approx(1.0).epsilon(0.02));   // exponential innovations, mean 1
  CHECK(negatives2 == 0);                               // exponentials are positive
  (void)count;
}

TEST_CASE("fvbm gibbs: independence case has mean zero") {
  const std::vector<double> bias(6, 0.0);
  const RealMatrix coupling(6, 6);
  const RealMatrix samples = fvbm_gibbs(bias, coupling, 4000, 100, 1, 17);
  double mean = 0;
  for (const double v : samples.data) {
    CHECK(std::abs(v) == 1.0);
    mean += v;
  }
  mean /= static_cast<double>(samples.data.size());
  // 3 standard errors for 24000 independent signs
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(24000.0));
}

TEST_CASE("fvbm gibbs at p=2 matches exact enumeration within TV 0.02") {
  const std::vector<double> bias{0.1, 0.1};
  RealMatrix coupling(2, 2);
  coupling.at(0, 1) = coupling.at(1, 0) = 0.1;

  // exact law over the four states
  std::map<std::pair<int, int>, double> exact;
  double z = 0;
  for (const int x1 : {-1, 1}) {
    for (const int x2 : {-1, 1}) {
      const double w = std::exp(0.1 * x1 * x2 + 0.1 * x1 + 0.1 * x2);
      exact[{x1, x2}] = w;
      z += w;
    }
  }
  for (auto& [state, w] : exact) w /= z;

  const std::size_t count = 10000;
  const RealMatrix samples = fvbm_gibbs(bias, coupling, count, 1000, 10, 23);
  std::map<std::pair<int, int>, double> empirical;
  for (std::size_t s = 0; s < count; ++s) {
    const auto row = samples.row(s);
    empirical[{static_cast<int>(row[0]), static_cast<int>(row[1])}] += 1.0 / count;
  }
  double tv = 0;
  for (const auto& [state, prob] : exact) tv += std::abs(prob - empirical[state]);
  CHECK(tv / 2.0 <= 0.02);
}

TEST_CASE("fvbm gibbs validates the coupling matrix") {
  const std::vector<double> bias(3, 0.0);
  RealMatrix asym(3, 3);
  asym.at(0, 1) = 0.1;  // not symmetric
  CHECK_THROWS_AS(fvbm_gibbs(bias, asym, 10, 10, 1, 1), ValidationError);
  RealMatrix diag(3, 3);
  diag.at(1, 1) = 0.5;
  CHECK_THROWS_AS(fvbm_gibbs(bias, diag, 10, 10, 1, 1), ValidationError);
}

TEST_CASE("fvbm scenario separates the two regimes") {
  const LabeledDataset ds = fvbm_scenario(500, 10, 3);
  CHECK(ds.true_cps == std::vector<std::uint32_t>{250});
  for (const double v : ds.data.data) CHECK(std::abs(v) == 1.0);
  const double m1 = column_block_mean(ds.data, 0, 250);
  const double m2 = column_block_mean(ds.data, 250, 500);
  CHECK(m2 - m1 >= 0.2);  // bias 0.1 -> 0.5, coupling 0.1 -> 0.3
}

TEST_CASE("paper-scale fvbm configuration runs") {
  const LabeledDataset ds = generate(Scenario::fvbm, 50, 25, 11);
  CHECK(ds.data.n() == 50);
  CHECK(ds.data.p() == 25);
  CHECK(ds.true_cps == std::vector<std::uint32_t>{25});
}

TEST_CASE("generator rejects invalid sizes") {
  CHECK_THROWS_AS(generate(Scenario::null_gauss_iid, 0, 5, 1), ValidationError);
  CHECK_THROWS_AS(generate(Scenario::fvbm, 10, 1, 1), ValidationError);
}

TEST_SUITE_END();
