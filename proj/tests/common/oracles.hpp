#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hdcpd/grouping.hpp"
#include "hdcpd/types.hpp"

// Independent reference implementations, written directly from the
// defining formulas with plain nested loops. They share no code with the
// optimized library paths they are used to check.

namespace oracle {

double gamma_naive(std::span<const double> z, std::span<const double> z2,
                   const hdcpd::GroupingScheme& scheme);

double energy_naive(const hdcpd::DistanceMatrix& D, std::span<const std::uint32_t> a,
                    std::span<const std::uint32_t> b);

// Four-term U-centering, each sum its own loop; sums include the diagonal.
std::vector<std::vector<double>> u_center_naive(const hdcpd::DistanceMatrix& D,
                                                std::span<const std::uint32_t> idx);

std::vector<std::vector<double>> double_center_naive(const hdcpd::DistanceMatrix& D,
                                                     std::span<const std::uint32_t> a,
                                                     std::span<const std::uint32_t> b);

double distance_variance_naive(const hdcpd::DistanceMatrix& D, std::span<const std::uint32_t> idx);

double cross_covariance_naive(const hdcpd::DistanceMatrix& D, std::span<const std::uint32_t> a,
                              std::span<const std::uint32_t> b);

double pooled_variance_naive(const hdcpd::DistanceMatrix& D, std::span<const std::uint32_t> a,
                             std::span<const std::uint32_t> b);

struct TSummary {
  double e_stat = 0, s2 = 0, a_nm = 0, t = 0;
  bool degenerate = false;
};

TSummary t_statistic_naive(const hdcpd::DistanceMatrix& D, std::span<const std::uint32_t> a,
                           std::span<const std::uint32_t> b);

// Weighted profile value at one split of [s..e] under a row ordering.
double weighted_value_naive(const hdcpd::DistanceMatrix& D,
                            std::span<const std::uint32_t> order, std::uint32_t s, std::uint32_t e,
                            std::uint32_t b);

// Exhaustive scan maximum over non-degenerate splits of [1..n].
std::pair<std::uint32_t, double> scan_max_naive(const hdcpd::DistanceMatrix& D);

// Squared norm of the embedded cumulative-sum process at split k via the
// Gram matrix of the anchor-based embedding.
double cusum_gram_naive(const hdcpd::DataMatrix& data, const hdcpd::GroupingScheme& scheme,
                        std::uint32_t k, std::span<const double> anchor);

// Adjusted Rand index by enumerating all item pairs.
double ari_pairs_naive(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

}  // namespace oracle
