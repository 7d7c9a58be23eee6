#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hdcpd/distance.hpp"
#include "hdcpd/scan.hpp"
#include "hdcpd/types.hpp"

// Permutation-calibrated single change-point test and the wild binary
// segmentation recursion for multiple change-points. Everything is
// deterministic given (data, scheme, config, seed): permutation replicates
// draw from substreams keyed by replicate id, so any thread count gives
// identical output.

namespace hdcpd {

struct DetectConfig {
  double alpha = 0.05;
  std::uint32_t permutations = 199;  // B
  std::uint32_t intervals = 50;      // M (WBS only)
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Shortest segment a test can run on. Candidate ranges keep >= 4
/// observations on each side of every split.
constexpr std::uint32_t kMinSegment = 8;

/// Random sub-sample window, 1-based inclusive, e - s >= 7.
struct Interval {
  std::uint32_t s = 0;
  std::uint32_t e = 0;
};

struct SingleResult {
  std::uint32_t tau_hat = 0;  // candidate location (last index of left segment)
  double m_n = 0.0;           // scan statistic on the original ordering
  double threshold = 0.0;     // permutation quantile
  double p_value = 1.0;       // (1 + #{replicates >= m_n}) / (B + 1)
  bool rejected = false;      // m_n strictly above threshold
  std::uint32_t permutations = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  ScanProfile profile;        // original-order profile over (1, n)
};

struct ChangePointRecord {
  std::uint32_t tau = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  std::uint32_t segment_s = 0, segment_e = 0;    // recursion segment tested
  std::uint32_t interval_s = 0, interval_e = 0;  // winning drawn interval
  std::uint32_t order_found = 0;                 // discovery order, 0-based
};

struct ChangePointSet {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> locations;    // sorted taus
  std::vector<ChangePointRecord> details;  // sorted by tau
  DetectConfig config;
};

/// Uniform random permutation of {0, ..., n-1} from the stream keyed by
/// (seed, replicate_id). Identical inputs give identical output.
std::vector<std::uint32_t> permute_indices(std::uint32_t n, std::uint64_t seed,
                                           std::uint64_t replicate_id);

/// M random windows: s uniform on {1..n-7}, then e uniform on {s+7..n}.
/// Drawn once per analysis; the recursion filters them per segment.
std::vector<Interval> draw_intervals(std::uint32_t n, std::uint32_t m, std::uint64_t seed);

struct WbsCandidate {
  std::size_t interval_index = 0;  // 0-based position in the interval list
  std::uint32_t b = 0;
  double value = 0.0;
  bool all_degenerate = false;
};

/// Best weighted split over every drawn interval inside [s..e]. Ties break
/// to the smallest interval index, then the smallest split. Returns
/// nothing when no interval fits the segment; reports value 0 at the first
/// candidate when every admissible split is degenerate.
std::optional<WbsCandidate> wbs_segment_max(const DistanceMatrix& D,
                                            std::span<const Interval> intervals, std::uint32_t s,
                                            std::uint32_t e);
std::optional<WbsCandidate> wbs_segment_max(const DistanceMatrix& D,
                                            std::span<const Interval> intervals,
                                            std::span<const std::uint32_t> order, std::uint32_t s,
                                            std::uint32_t e);

/// The ceil((1-alpha) * B)-th order statistic of the replicate values.
double permutation_threshold(std::vector<double> replicate_values, double alpha);

SingleResult single_changepoint_test(const DistanceMatrix& D, const DetectConfig& config);
SingleResult single_changepoint_test(const DataMatrix& data, const GroupingScheme& scheme,
                                     const DetectConfig& config);

ChangePointSet wbs_detect(const DistanceMatrix& D, const DetectConfig& config);
ChangePointSet wbs_detect(const DataMatrix& data, const GroupingScheme& scheme,
                          const DetectConfig& config);

/// WBS with caller-supplied intervals (the spec'd entry draws them from
/// the seed; this one is for tests and reproductions).
ChangePointSet wbs_detect_with_intervals(const DistanceMatrix& D, std::vector<Interval> intervals,
                                         const DetectConfig& config);

}  // namespace hdcpd
