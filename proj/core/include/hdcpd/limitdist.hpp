#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hdcpd/types.hpp"

// Monte-Carlo samplers for the pivotal limiting null law of the scan
// statistic: the supremum over r in (0,1) of r(1-r)G0(r), where G0 is
// built from a two-parameter centered Gaussian process Q with
// cov(Q(a1,b1), Q(a2,b2)) = (b1^b2 - a1va2)^2 on overlapping windows.
// Two independent constructions are provided: a discretized pair array
// whose second moments match that covariance, and the finite-sample null
// statistic on Gaussian data.

namespace hdcpd {

enum class LimitMethod { pair_array, data_based };

struct QuantileTable {
  std::vector<double> probs;
  std::vector<double> quants;
  std::uint32_t reps = 0;
  std::uint32_t grid = 0;    // N for pair_array, n for data_based
  std::uint32_t data_p = 0;  // p for data_based, 0 otherwise
  LimitMethod method = LimitMethod::pair_array;
};

/// One draw of the discretized supremum statistic on an N-point grid:
/// i.i.d. standard normals W_ij (j < i <= N) define
/// Q(a,b) = sqrt(2)/N * sum of W_ij over floor(Na) < j < i <= floor(Nb);
/// G0(r) = Q(0,1) - Q(0,r)/r - Q(r,1)/(1-r) is evaluated on r = k/N for
/// k = 4..N-4 via prefix sums (O(N^2) time, O(N) memory), and the max of
/// r(1-r)G0(r) is returned.
double sample_sup_statistic_pair_array(std::uint32_t grid_n, std::uint64_t seed);

/// One draw of the finite-sample null: n x p standard Gaussian data,
/// sqrt-l1 distance, scan statistic over the whole sequence.
double sample_mn_null_data_based(std::uint32_t n, std::uint32_t p, std::uint64_t seed);

/// Q evaluated on explicit (a, b) windows from a single pair-array draw;
/// verification route for the covariance structure.
std::vector<double> pair_array_q_windows(std::uint32_t grid_n, std::uint64_t seed,
                                         std::span<const std::pair<double, double>> windows);

struct QuantileRequest {
  LimitMethod method = LimitMethod::pair_array;
  std::uint32_t grid_n = 500;  // pair_array grid size
  std::uint32_t n = 0, p = 0;  // data_based sizes
  std::uint32_t reps = 2000;
  std::vector<double> probs;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Empirical order-statistic quantiles over `reps` independent replicate
/// draws (per-replicate substreams; aggregation order cannot affect the
/// result). Requires reps >= 100 and probs strictly inside (0, 1).
QuantileTable estimate_quantiles(const QuantileRequest& request);

/// The ceil(prob * count)-th smallest value.
double order_statistic_quantile(std::vector<double> values, double prob);

}  // namespace hdcpd
