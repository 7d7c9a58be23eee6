#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hdcpd/rng.hpp"
#include "hdcpd/scan.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace hdcpd;

TEST_SUITE_BEGIN("scan");

TEST_CASE("eight observations give exactly one candidate split") {
  const auto D = testutil::l1_distance_matrix(testutil::random_gaussian(8, 3, 1));
  const ScanProfile profile = weighted_t_profile(D, 1, 8);
  REQUIRE(profile.splits.size() == 1);
  CHECK(profile.splits[0].b == 4);
  CHECK(profile.splits[0].weight == doctest::Approx(0.25));
  CHECK(scan_max(D, 1, 8).b == 4);
}

TEST_CASE("weights over the full sequence are k(n-k)/n^2") {
  const std::uint32_t n = 14;
  const auto D = testutil::l1_distance_matrix(testutil::random_gaussian(n, 2, 2));
  const ScanProfile profile = weighted_t_profile(D, 1, n);
  for (const auto& sv : profile.splits) {
    const double k = sv.b;
    CHECK(sv.weight == doctest::Approx(k * (n - k) / static_cast<double>(n * n)).epsilon(1e-15));
  }
}

TEST_CASE("segments shorter than 8 are rejected") {
  const auto D = testutil::l1_distance_matrix(testutil::random_gaussian(10, 2, 3));
  CHECK_THROWS_AS(weighted_t_profile(D, 2, 8), ValidationError);
  CHECK_THROWS_AS(weighted_t_profile(D, 0, 9), ValidationError);
  CHECK_THROWS_AS(weighted_t_profile(D, 3, 11), ValidationError);
}

TEST_CASE("profile values match the independent per-split oracle") {
  const std::uint32_t n = 12;
  const auto D = testutil::l1_distance_matrix(testutil::random_gaussian(n, 4, 17));
  const ScanProfile profile = weighted_t_profile(D, 1, n);
  const auto order = testutil::index_range(0, n);
  for (const auto& sv : profile.splits) {
    CHECK(sv.value ==
          doctest::Approx(oracle::weighted_value_naive(D, order, 1, n, sv.b)).epsilon(1e-10));
  }
  // interior segment
  const ScanProfile inner = weighted_t_profile(D, 2, 11);
  for (const auto& sv : inner.splits) {
    CHECK(sv.value ==
          doctest::Approx(oracle::weighted_value_naive(D, order, 2, 11, sv.b)).epsilon(1e-10));
  }
}

TEST_CASE("scan_max equals the exhaustive loop for n in 8..16") {
  for (std::uint32_t n = 8; n <= 16; ++n) {
    const auto D = testutil::l1_distance_matrix(testutil::random_gaussian(n, 3, 100 + n));
    const ScanMax got = scan_max(D, 1, n);
    const auto [expect_b, expect_value] = oracle::scan_max_naive(D);
    CHECK(got.b == expect_b);
    CHECK(got.value == doctest::Approx(expect_value).epsilon(1e-10));
  }
}

TEST_CASE("strong mean shift is localized near the true split") {
  const std::uint32_t n = 40, p = 20;
  RandomStream seeds(7);
  int hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RandomStream rs(seeds.next_u64());
    DataMatrix data(n, p);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t j = 0; j < p; ++j) {
        data.at(t, j) = rs.normal() + (t >= n / 2 ? 2.0 : 0.0);
      }
    }
    const auto D = testutil::l1_distance_matrix(data);
    const ScanMax got = scan_max(D, 1, n);
    if (got.b >= n / 2 - 2 && got.b <= n / 2 + 2) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("constant data: all splits degenerate, statistic zero") {
  DataMatrix data(10, 3);
  for (double& v : data.data) v = 4.0;
  const auto D = testutil::l1_distance_matrix(data);
  const ScanMax got = scan_max(D, 1, 10);
  CHECK(got.all_degenerate);
  CHECK(got.b == 4);
  CHECK(got.value == 0.0);
}

TEST_CASE("reversing the sequence mirrors the profile") {
  const std::uint32_t n = 12;
  const DataMatrix data = testutil::random_gaussian(n, 3, 77);
  DataMatrix reversed(n, 3);
  for (std::size_t t = 0; t < n; ++t) {
    std::copy_n(data.row(n - 1 - t).begin(), 3, reversed.row(t).begin());
  }
  const auto D = testutil::l1_distance_matrix(data);
  const auto Dr = testutil::l1_distance_matrix(reversed);
  const ScanProfile forward = weighted_t_profile(D, 1, n);
  const ScanProfile backward = weighted_t_profile(Dr, 1, n);
  for (const auto& sv : forward.splits) {
    const std::uint32_t mirror = n - sv.b;
    const auto it = std::find_if(backward.splits.begin(), backward.splits.end(),
                                 [&](const SplitValue& o) { return o.b == mirror; });
    REQUIRE(it != backward.splits.end());
    CHECK(sv.value == doctest::Approx(it->value).epsilon(1e-10));
  }
}

TEST_CASE("cusum squared norm: zero on constant data, nonnegative, oracle match") {
  {
    DataMatrix data(9, 2);
    for (double& v : data.data) v = 1.0;
    const auto D = testutil::l1_distance_matrix(data);
    for (std::uint32_t k = 1; k < 9; ++k) CHECK(cusum_sqnorm(D, k) == doctest::Approx(0.0));
  }
  const std::uint32_t n = 12;
  const DataMatrix data = testutil::random_gaussian(n, 4, 31);
  const GroupingScheme scheme = build_scheme(SchemeMode::l1_sqrt, 4);
  const auto D = pairwise_matrix(data, scheme);

  const std::vector<double> zero_anchor(4, 0.0);
  for (std::uint32_t k = 1; k < n; ++k) {
    const double direct = cusum_sqnorm(D, k);
    CHECK(direct >= -1e-12);
    const double via_row_anchor = oracle::cusum_gram_naive(data, scheme, k, data.row(0));
    const double via_zero_anchor = oracle::cusum_gram_naive(data, scheme, k, zero_anchor);
    CHECK(direct == doctest::Approx(via_row_anchor).epsilon(1e-10));
    CHECK(direct == doctest::Approx(via_zero_anchor).epsilon(1e-10));
    CHECK(via_row_anchor == doctest::Approx(via_zero_anchor).epsilon(1e-10));
  }
  CHECK_THROWS_AS(cusum_sqnorm(D, 0), ValidationError);
  CHECK_THROWS_AS(cusum_sqnorm(D, n), ValidationError);
}

TEST_SUITE_END();
