#include "hdcpd/distance.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "hdcpd/parallel.hpp"

namespace hdcpd {

namespace {

std::atomic<std::uint64_t> g_gamma_evals{0};

// Threshold for compensated (Neumaier) accumulation of group contributions.
constexpr std::size_t kCompensatedDim = 10000;

inline void neumaier_add(double& sum, double& comp, double value) {
  const double t = sum + value;
  if (std::abs(sum) >= std::abs(value)) {
    comp += (sum - t) + value;
  } else {
    comp += (value - t) + sum;
  }
  sum = t;
}

// Four-lane absolute-difference sum; lanes are combined in a fixed order.
double abs_diff_sum(const double* a, const double* b, std::size_t p) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= p; j += 4) {
    s0 += std::abs(a[j] - b[j]);
    s1 += std::abs(a[j + 1] - b[j + 1]);
    s2 += std::abs(a[j + 2] - b[j + 2]);
    s3 += std::abs(a[j + 3] - b[j + 3]);
  }
  for (; j < p; ++j) s0 += std::abs(a[j] - b[j]);
  return ((s0 + s1) + (s2 + s3));
}

double sq_diff_sum(const double* a, const double* b, std::size_t p) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= p; j += 4) {
    const double d0 = a[j] - b[j];
    const double d1 = a[j + 1] - b[j + 1];
    const double d2 = a[j + 2] - b[j + 2];
    const double d3 = a[j + 3] - b[j + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; j < p; ++j) {
    const double d = a[j] - b[j];
    s0 += d * d;
  }
  return ((s0 + s1) + (s2 + s3));
}

double group_base_distance(const double* a, const double* b,
                           const std::vector<std::uint32_t>& group) {
  if (group.size() == 1) {
    return std::abs(a[group[0]] - b[group[0]]);
  }
  double sq = 0.0;
  for (const std::uint32_t j : group) {
    const double d = a[j] - b[j];
    sq += d * d;
  }
  return std::sqrt(sq);
}

// Unchecked kernel: assumes finite inputs of the right length.
double gamma_kernel(const double* a, const double* b, const GroupingScheme& scheme) {
  switch (scheme.mode) {
    case SchemeMode::euclidean_baseline:
      return std::sqrt(sq_diff_sum(a, b, scheme.p));
    case SchemeMode::l1_sqrt:
      if (scheme.p < kCompensatedDim) {
        return std::sqrt(abs_diff_sum(a, b, scheme.p));
      }
      break;
    default:
      break;
  }
  if (scheme.p < kCompensatedDim) {
    double sum = 0.0;
    for (const auto& group : scheme.groups) sum += group_base_distance(a, b, group);
    return std::sqrt(sum);
  }
  double sum = 0.0, comp = 0.0;
  for (const auto& group : scheme.groups) {
    neumaier_add(sum, comp, group_base_distance(a, b, group));
  }
  return std::sqrt(sum + comp);
}

}  // namespace

std::uint64_t gamma_eval_count() { return g_gamma_evals.load(std::memory_order_relaxed); }

double gamma(std::span<const double> z, std::span<const double> z2, const GroupingScheme& scheme) {
  if (z.size() != scheme.p || z2.size() != scheme.p) {
    throw ValidationError("gamma: vector length " + std::to_string(z.size()) + "/" +
                          std::to_string(z2.size()) + " does not match scheme dimension " +
                          std::to_string(scheme.p));
  }
  for (std::size_t j = 0; j < scheme.p; ++j) {
    if (!std::isfinite(z[j]) || !std::isfinite(z2[j])) {
      throw ValidationError("gamma: non-finite input at coordinate " + std::to_string(j + 1));
    }
  }
  g_gamma_evals.fetch_add(1, std::memory_order_relaxed);
  return gamma_kernel(z.data(), z2.data(), scheme);
}

DistanceMatrix pairwise_matrix(const DataMatrix& data, const GroupingScheme& scheme,
                               unsigned threads) {
  if (data.n() == 0 || data.p() == 0) throw ValidationError("pairwise_matrix: empty data");
  if (data.p() != scheme.p) {
    throw ValidationError("pairwise_matrix: data dimension " + std::to_string(data.p()) +
                          " does not match scheme dimension " + std::to_string(scheme.p));
  }
  data.require_finite();

  const std::size_t n = data.n();
  DistanceMatrix out(n);
  parallel_for(0, n, threads, [&](std::size_t i) {
    const double* xi = data.row(i).data();
    for (std::size_t j = 0; j < i; ++j) {
      const double value = gamma_kernel(xi, data.row(j).data(), scheme);
      out.at(i, j) = value;
      out.at(j, i) = value;
    }
  });
  g_gamma_evals.fetch_add(n * (n - 1) / 2, std::memory_order_relaxed);
  return out;
}

}  // namespace hdcpd
