#include "hdcpd/limitdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hdcpd/distance.hpp"
#include "hdcpd/parallel.hpp"
#include "hdcpd/rng.hpp"
#include "hdcpd/scan.hpp"

namespace hdcpd {

double sample_sup_statistic_pair_array(std::uint32_t grid_n, std::uint64_t seed) {
  if (grid_n < 8) throw ValidationError("pair_array: grid size must be at least 8");
  const std::size_t n = grid_n;
  RandomStream rs(seed);

  // Row sums R_i = sum_{j<i} W_ij and column sums C_j = sum_{i>j} W_ij,
  // accumulated in one pass over the W stream (row-major, i = 2..N).
  std::vector<double> row_sum(n + 1, 0.0), col_sum(n + 1, 0.0);
  for (std::size_t i = 2; i <= n; ++i) {
    double r = 0.0;
    for (std::size_t j = 1; j < i; ++j) {
      const double w = rs.normal();
      r += w;
      col_sum[j] += w;
    }
    row_sum[i] = r;
  }

  // prefix[k] = sum of W over pairs inside [1..k]; suffix[k] over [k+1..N]
  std::vector<double> prefix(n + 1, 0.0), suffix(n + 2, 0.0);
  for (std::size_t k = 2; k <= n; ++k) prefix[k] = prefix[k - 1] + row_sum[k];
  for (std::size_t k = n; k >= 1; --k) suffix[k - 1] = suffix[k] + col_sum[k];

  const double scale = std::sqrt(2.0) / static_cast<double>(n);
  const double q_total = scale * prefix[n];
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 4; k + 4 <= n; ++k) {
    const double r = static_cast<double>(k) / static_cast<double>(n);
    const double g = q_total - scale * prefix[k] / r - scale * suffix[k] / (1.0 - r);
    best = std::max(best, r * (1.0 - r) * g);
  }
  return best;
}

double sample_mn_null_data_based(std::uint32_t n, std::uint32_t p, std::uint64_t seed) {
  if (n < 8) throw ValidationError("data_based: n must be at least 8");
  if (p < 1) throw ValidationError("data_based: p must be at least 1");
  RandomStream rs(substream_seed(seed, StreamDomain::datagen, 0));
  DataMatrix data(n, p);
  for (double& v : data.data) v = rs.normal();
  const GroupingScheme scheme = build_scheme(SchemeMode::l1_sqrt, p);
  const DistanceMatrix D = pairwise_matrix(data, scheme);
  return scan_max(D, 1, n).value;
}

std::vector<double> pair_array_q_windows(std::uint32_t grid_n, std::uint64_t seed,
                                         std::span<const std::pair<double, double>> windows) {
  if (grid_n < 2) throw ValidationError("pair_array: grid size must be at least 2");
  const std::size_t n = grid_n;

  struct Bounds {
    std::size_t lo, hi;
  };
  std::vector<Bounds> bounds;
  bounds.reserve(windows.size());
  for (const auto& [a, b] : windows) {
    if (!(a >= 0.0 && a < b && b <= 1.0)) {
      throw ValidationError("pair_array: window must satisfy 0 <= a < b <= 1");
    }
    bounds.push_back({static_cast<std::size_t>(std::floor(a * n)),
                      static_cast<std::size_t>(std::floor(b * n))});
  }

  // Same stream layout as the sampler: row-major, i = 2..N, j < i.
  RandomStream rs(seed);
  std::vector<double> sums(windows.size(), 0.0);
  for (std::size_t i = 2; i <= n; ++i) {
    for (std::size_t j = 1; j < i; ++j) {
      const double w = rs.normal();
      for (std::size_t t = 0; t < bounds.size(); ++t) {
        if (j > bounds[t].lo && i <= bounds[t].hi) sums[t] += w;
      }
    }
  }
  const double scale = std::sqrt(2.0) / static_cast<double>(n);
  for (double& v : sums) v *= scale;
  return sums;
}

double order_statistic_quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  if (!(prob > 0.0 && prob < 1.0)) {
    throw ValidationError("quantile probability must lie strictly inside (0, 1)");
  }
  std::size_t k =
      static_cast<std::size_t>(std::ceil(prob * static_cast<double>(values.size())));
  k = std::min(std::max<std::size_t>(k, 1), values.size());
  std::nth_element(values.begin(), values.begin() + (k - 1), values.end());
  return values[k - 1];
}

QuantileTable estimate_quantiles(const QuantileRequest& request) {
  if (request.reps < 100) throw ValidationError("estimate_quantiles: need at least 100 replicates");
  if (request.probs.empty()) throw ValidationError("estimate_quantiles: no probabilities given");
  for (const double q : request.probs) {
    if (!(q > 0.0 && q < 1.0)) {
      throw ValidationError("estimate_quantiles: probabilities must lie strictly inside (0, 1)");
    }
  }
  if (request.method == LimitMethod::pair_array) {
    if (request.grid_n < 8) throw ValidationError("estimate_quantiles: grid size must be >= 8");
  } else {
    if (request.n < 8 || request.p < 1) {
      throw ValidationError("estimate_quantiles: data_based needs n >= 8 and p >= 1");
    }
  }

  std::vector<double> draws(request.reps);
  parallel_for(0, request.reps, request.threads, [&](std::size_t rep) {
    const std::uint64_t rep_seed = substream_seed(request.seed, StreamDomain::replicate, rep);
    draws[rep] = request.method == LimitMethod::pair_array
                     ? sample_sup_statistic_pair_array(request.grid_n, rep_seed)
                     : sample_mn_null_data_based(request.n, request.p, rep_seed);
  });
  std::sort(draws.begin(), draws.end());

  QuantileTable table;
  table.method = request.method;
  table.reps = request.reps;
  table.grid = request.method == LimitMethod::pair_array ? request.grid_n : request.n;
  table.data_p = request.method == LimitMethod::data_based ? request.p : 0;
  table.probs = request.probs;
  table.quants.reserve(request.probs.size());
  for (const double q : request.probs) {
    std::size_t k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(draws.size())));
    k = std::min(std::max<std::size_t>(k, 1), draws.size());
    table.quants.push_back(draws[k - 1]);
  }
  return table;
}

}  // namespace hdcpd
