#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "hdcpd/limitdist.hpp"
#include "hdcpd/rng.hpp"

using namespace hdcpd;

namespace {

struct Moments {
  std::vector<double> mean;
  std::vector<std::vector<double>> cov;
};

// joint moments of Q over windows, reps independent draws
Moments window_moments(std::uint32_t grid, std::size_t reps,
                       const std::vector<std::pair<double, double>>& windows,
                       std::uint64_t seed) {
  const std::size_t w = windows.size();
  std::vector<std::vector<double>> draws(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    draws[r] = pair_array_q_windows(grid, substream_seed(seed, StreamDomain::replicate, r),
                                    windows);
  }
  Moments m;
  m.mean.assign(w, 0.0);
  for (const auto& d : draws) {
    for (std::size_t i = 0; i < w; ++i) m.mean[i] += d[i];
  }
  for (double& v : m.mean) v /= static_cast<double>(reps);
  m.cov.assign(w, std::vector<double>(w, 0.0));
  for (const auto& d : draws) {
    for (std::size_t i = 0; i < w; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        m.cov[i][j] += (d[i] - m.mean[i]) * (d[j] - m.mean[j]);
      }
    }
  }
  for (auto& row : m.cov) {
    for (double& v : row) v /= static_cast<double>(reps - 1);
  }
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("limitdist");

TEST_CASE("pair-array draw is finite and reproducible") {
  const double a = sample_sup_statistic_pair_array(64, 42);
  const double b = sample_sup_statistic_pair_array(64, 42);
  CHECK(std::isfinite(a));
  CHECK(a == b);
  CHECK(a != sample_sup_statistic_pair_array(64, 43));
  CHECK_THROWS_AS(sample_sup_statistic_pair_array(7, 1), ValidationError);
}

TEST_CASE("window variance matches (b-a)^2 and G0(1/2) has unit variance") {
  // var Q(0, 1/2) -> 1/4; var G0(1/2) = var(Q01 - 2 Q0h - 2 Qh1) -> 1
  const std::uint32_t grid = 200;
  const std::size_t reps = 5000;
  const std::vector<std::pair<double, double>> windows{{0.0, 0.5}, {0.5, 1.0}, {0.0, 1.0}};
  const Moments m = window_moments(grid, reps, windows, 314159);

  CHECK(std::abs(m.cov[0][0] - 0.25) <= 0.05 * 0.25);

  // centered process: means within 3 standard errors of zero
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const double se = std::sqrt(m.cov[i][i] / static_cast<double>(reps));
    CHECK(std::abs(m.mean[i]) <= 3.0 * se);
  }

  double g_var = 0;
  std::vector<double> coeff{-2.0, -2.0, 1.0};  // G0(1/2) = Q01 - 2 Q0h - 2 Qh1
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) g_var += coeff[i] * coeff[j] * m.cov[i][j];
  }
  CHECK(std::abs(g_var - 1.0) <= 0.05);
}

TEST_CASE("window covariance matches the squared-overlap formula") {
  const std::uint32_t grid = 200;
  const std::size_t reps = 5000;
  const std::vector<std::pair<double, double>> windows{{0.0, 0.6}, {0.3, 1.0}, {0.0, 0.3},
                                                       {0.6, 1.0}};
  const Moments m = window_moments(grid, reps, windows, 2718);

  const auto theoretical = [](std::pair<double, double> w1, std::pair<double, double> w2) {
    const double lo = std::max(w1.first, w2.first);
    const double hi = std::min(w1.second, w2.second);
    return hi > lo ? (hi - lo) * (hi - lo) : 0.0;
  };
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t j = 0; j < windows.size(); ++j) {
      const double expected = theoretical(windows[i], windows[j]);
      // 3 standard errors of a covariance estimate, normal approximation
      const double se = std::sqrt((m.cov[i][i] * m.cov[j][j] + m.cov[i][j] * m.cov[i][j]) /
                                  static_cast<double>(reps));
      CHECK(std::abs(m.cov[i][j] - expected) <= 3.0 * se + 2.0 / grid);
    }
  }
  // spot value from the covariance formula: cov(Q(0,.6), Q(.3,1)) = 0.09
  CHECK(std::abs(m.cov[0][1] - 0.09) <= 0.10 * 0.09 + 0.01);
}

TEST_CASE("data-based draw is finite and reproducible") {
  const double a = sample_mn_null_data_based(16, 4, 5);
  CHECK(std::isfinite(a));
  CHECK(a == sample_mn_null_data_based(16, 4, 5));
  CHECK_THROWS_AS(sample_mn_null_data_based(7, 4, 5), ValidationError);
}

TEST_CASE("order-statistic quantile uses the ceil rule") {
  std::vector<double> values(101);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i + 1);
  CHECK(order_statistic_quantile(values, 0.5) == 51.0);  // 51st order statistic
  CHECK(order_statistic_quantile(values, 0.9) == 91.0);
  CHECK_THROWS_AS(order_statistic_quantile(values, 0.0), ValidationError);
}

TEST_CASE("estimate_quantiles: monotone output, deterministic, validated input") {
  QuantileRequest request;
  request.method = LimitMethod::pair_array;
  request.grid_n = 64;
  request.reps = 300;
  request.probs = {0.5, 0.9, 0.95, 0.99};
  request.seed = 11;
  const QuantileTable table = estimate_quantiles(request);
  REQUIRE(table.quants.size() == 4);
  for (std::size_t i = 1; i < table.quants.size(); ++i) {
    CHECK(table.quants[i] >= table.quants[i - 1]);
  }
  const QuantileTable again = estimate_quantiles(request);
  CHECK(table.quants == again.quants);

  request.threads = 4;
  const QuantileTable threaded = estimate_quantiles(request);
  CHECK(table.quants == threaded.quants);

  request.reps = 50;
  CHECK_THROWS_AS(estimate_quantiles(request), ValidationError);
  request.reps = 300;
  request.probs = {1.5};
  CHECK_THROWS_AS(estimate_quantiles(request), ValidationError);
}

TEST_SUITE_END();
