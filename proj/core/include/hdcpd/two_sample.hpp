#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "hdcpd/types.hpp"

// Generalized energy-distance U-statistic and the studentized two-sample
// statistic, evaluated on index sets into a shared DistanceMatrix. All
// functions are pure and read-only over the matrix.

namespace hdcpd {

/// Pooled variance at or below this value makes a split degenerate
/// (constant or duplicated data); the statistic is reported as 0 and the
/// scan treats the split as a non-candidate.
constexpr double kDegenerateVarianceEps = 1e-14;

struct TwoSampleResult {
  double e_stat = 0.0;  // energy U-statistic
  double s2 = 0.0;      // pooled variance (clamped at 0)
  double a_nm = 0.0;    // normalizing constant, a_nm^2 = 1/nm + 1/(2n(n-1)) + 1/(2m(m-1))
  double t = 0.0;       // studentized statistic, 0 when degenerate
  std::size_t n = 0;    // left sample size
  std::size_t m = 0;    // right sample size
  bool degenerate = false;
};

/// v_a = a(a-3)/2, the pooled-variance weight.
constexpr double pooled_weight(std::size_t a) { return static_cast<double>(a) * (a - 3.0) / 2.0; }

/// Energy U-statistic between disjoint index sets (sizes >= 2):
/// mean cross distance (x2) minus both within-sample off-diagonal means.
double energy_u_stat(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                     std::span<const std::uint32_t> idx_b);

/// U-centered within-sample distance matrix (four-term centering with
/// denominators n-2 and (n-1)(n-2); sums run over the full index set
/// including the zero diagonal). Requires |idx| >= 3.
RealMatrix u_center_within(const DistanceMatrix& D, std::span<const std::uint32_t> idx);

/// Plain double-centered cross-distance matrix; every row and column sum
/// vanishes. Requires disjoint, nonempty index sets.
RealMatrix double_center_cross(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                               std::span<const std::uint32_t> idx_b);

/// Sample distance variance: sum of squared off-diagonal U-centered
/// entries over n(n-3). Requires |idx| >= 4.
double distance_variance(const DistanceMatrix& D, std::span<const std::uint32_t> idx);

/// Cross distance covariance: sum of squared double-centered cross entries
/// over (n-1)(m-1). Requires disjoint sets of size >= 2.
double cross_distance_covariance(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                                 std::span<const std::uint32_t> idx_b);

/// Pooled variance combining both distance variances and the cross
/// covariance. Requires |idx_a|, |idx_b| >= 4.
double pooled_variance(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                       std::span<const std::uint32_t> idx_b);

/// Studentized two-sample statistic t = e_stat / (a_nm * sqrt(s2)).
/// Zero pooled variance (within kDegenerateVarianceEps) yields t = 0 with
/// the degenerate flag set instead of an error.
TwoSampleResult t_statistic(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                            std::span<const std::uint32_t> idx_b);

namespace detail {

/// Sufficient sums for one split. `sa/ssa/rqa` are the within-A distance
/// sum, sum of squares, and sum of squared row sums (rows include the zero
/// diagonal); same for B; `sc/ssc` are the cross-block sum and sum of
/// squares, `rq_u` the sum of squared cross row sums over A, `rq_w` over B.
struct SplitSums {
  std::size_t na = 0, nb = 0;
  double sa = 0, ssa = 0, rqa = 0;
  double sb = 0, ssb = 0, rqb = 0;
  double sc = 0, ssc = 0, rq_u = 0, rq_w = 0;
};

SplitSums gather_split_sums(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                            std::span<const std::uint32_t> idx_b);

/// Closed-form evaluation of all split statistics from the sufficient
/// sums. Shared by the public operations and the scan fast path.
TwoSampleResult assemble(const SplitSums& sums);

/// Sum of squared off-diagonal U-centered entries from within-set sums.
double u_centered_offdiag_sq(std::size_t n, double sum, double sumsq, double rowsq);

}  // namespace detail

}  // namespace hdcpd
