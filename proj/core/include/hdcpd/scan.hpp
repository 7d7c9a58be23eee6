#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hdcpd/two_sample.hpp"
#include "hdcpd/types.hpp"

// Weighted two-sample statistic profiles over candidate splits of a time
// segment. Time positions s, e, b are 1-based inclusive; a segment needs
// e - s >= 7 (at least 8 observations) so that both sides of every
// candidate split b in {s+3, ..., e-4} hold at least 4 observations.

namespace hdcpd {

struct SplitValue {
  std::uint32_t b = 0;     // split: left segment is [s..b], right is [b+1..e]
  double weight = 0.0;     // (e-b)(b-s+1) / (e-s+1)^2
  double t = 0.0;          // studentized two-sample statistic at this split
  double value = 0.0;      // weight * t
  bool degenerate = false;
};

struct ScanProfile {
  std::uint32_t s = 0, e = 0;
  std::vector<SplitValue> splits;
  std::uint32_t best_b = 0;       // smallest maximizer over non-degenerate splits
  double best_value = 0.0;        // 0 when every split is degenerate
  bool all_degenerate = false;
};

struct ScanMax {
  std::uint32_t b = 0;
  double value = 0.0;
  bool all_degenerate = false;
};

/// Profile of weight * t over every candidate split of [s..e], rows taken
/// in original time order.
ScanProfile weighted_t_profile(const DistanceMatrix& D, std::uint32_t s, std::uint32_t e);

/// Same, with time position t mapped to matrix row order[t-1]. Permutation
/// replicates relabel rows through `order`; gamma is never recomputed.
ScanProfile weighted_t_profile(const DistanceMatrix& D, std::span<const std::uint32_t> order,
                               std::uint32_t s, std::uint32_t e);

/// Maximizer of the profile: the single change-point statistic and its
/// candidate location. Degenerate splits cannot win; a fully degenerate
/// segment reports value 0 at the smallest candidate.
ScanMax scan_max(const DistanceMatrix& D, std::uint32_t s, std::uint32_t e);
ScanMax scan_max(const DistanceMatrix& D, std::span<const std::uint32_t> order, std::uint32_t s,
                 std::uint32_t e);

/// Squared norm of the embedded cumulative-sum process at split k
/// (1 <= k <= n-1), computed from distances alone. Nonnegative up to
/// rounding; used as a tested identity, not as a detector.
double cusum_sqnorm(const DistanceMatrix& D, std::uint32_t k);

namespace detail {

/// Contiguous copy of D restricted to a row subset, so per-split sweeps
/// run on cache-friendly memory. Each split is still evaluated
/// independently in O(L^2).
class SegmentScanner {
 public:
  void load(const DistanceMatrix& D, std::span<const std::uint32_t> rows);
  std::size_t size() const { return size_; }

  /// Statistic for the split with `left` elements on the left
  /// (4 <= left <= size - 4).
  TwoSampleResult split_stat(std::size_t left) const;

 private:
  std::size_t size_ = 0;
  std::vector<double> sub_;
};

}  // namespace detail

}  // namespace hdcpd
