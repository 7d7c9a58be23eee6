#include "hdcpd/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hdcpd/parallel.hpp"
#include "hdcpd/rng.hpp"

namespace hdcpd {

namespace {

void require_config(const DetectConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw ValidationError("detect: alpha must lie strictly inside (0, 1)");
  }
  if (config.permutations < 1) throw ValidationError("detect: need at least one permutation");
}

void require_length(std::uint32_t n) {
  if (n < kMinSegment) {
    throw ValidationError("detect: need at least " + std::to_string(kMinSegment) +
                          " observations, got " + std::to_string(n));
  }
}

std::vector<std::uint32_t> identity_order(std::size_t n) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  return order;
}

}  // namespace

std::vector<std::uint32_t> permute_indices(std::uint32_t n, std::uint64_t seed,
                                           std::uint64_t replicate_id) {
  if (n == 0) throw ValidationError("permute_indices: n must be at least 1");
  std::vector<std::uint32_t> perm = identity_order(n);
  RandomStream rs(substream_seed(seed, StreamDomain::permutation, replicate_id));
  rs.shuffle(std::span<std::uint32_t>(perm));
  return perm;
}

std::vector<Interval> draw_intervals(std::uint32_t n, std::uint32_t m, std::uint64_t seed) {
  require_length(n);
  if (m < 1) throw ValidationError("draw_intervals: need at least one interval");
  RandomStream rs(substream_seed(seed, StreamDomain::intervals, 0));
  std::vector<Interval> intervals(m);
  for (auto& iv : intervals) {
    iv.s = 1 + static_cast<std::uint32_t>(rs.uniform_below(n - 7));
    iv.e = iv.s + 7 + static_cast<std::uint32_t>(rs.uniform_below(n - iv.s - 6));
  }
  return intervals;
}

std::optional<WbsCandidate> wbs_segment_max(const DistanceMatrix& D,
                                            std::span<const Interval> intervals, std::uint32_t s,
                                            std::uint32_t e) {
  return wbs_segment_max(D, intervals, identity_order(D.n), s, e);
}

std::optional<WbsCandidate> wbs_segment_max(const DistanceMatrix& D,
                                            std::span<const Interval> intervals,
                                            std::span<const std::uint32_t> order, std::uint32_t s,
                                            std::uint32_t e) {
  if (e < s || e - s < 7) {
    throw ValidationError("wbs_segment_max: segment holds fewer than 8 observations");
  }
  std::optional<WbsCandidate> best;
  std::optional<WbsCandidate> first_candidate;
  detail::SegmentScanner scanner;

  for (std::size_t m = 0; m < intervals.size(); ++m) {
    const Interval iv = intervals[m];
    if (iv.s < s || iv.e > e) continue;  // admissible: s <= s_m <= e_m - 7 <= e - 7
    scanner.load(D, order.subspan(iv.s - 1, iv.e - iv.s + 1));
    const std::size_t len = scanner.size();
    const double denom = static_cast<double>(len) * static_cast<double>(len);
    for (std::size_t left = 4; left + 4 <= len; ++left) {
      const std::uint32_t b = iv.s + static_cast<std::uint32_t>(left) - 1;
      if (!first_candidate) {
        first_candidate = WbsCandidate{m, b, 0.0, true};
      }
      const TwoSampleResult r = scanner.split_stat(left);
      if (r.degenerate) continue;
      const double value =
          static_cast<double>(len - left) * static_cast<double>(left) / denom * r.t;
      if (!best || value > best->value) {
        best = WbsCandidate{m, b, value, false};
      }
    }
  }
  if (best) return best;
  return first_candidate;  // engaged iff some interval fits; value 0, all_degenerate
}

double permutation_threshold(std::vector<double> replicate_values, double alpha) {
  if (replicate_values.empty()) throw ValidationError("permutation_threshold: no replicates");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("permutation_threshold: alpha must lie strictly inside (0, 1)");
  }
  const std::size_t b = replicate_values.size();
  std::size_t k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(b)));
  k = std::min(std::max<std::size_t>(k, 1), b);
  std::nth_element(replicate_values.begin(), replicate_values.begin() + (k - 1),
                   replicate_values.end());
  return replicate_values[k - 1];
}

SingleResult single_changepoint_test(const DistanceMatrix& D, const DetectConfig& config) {
  require_config(config);
  require_length(static_cast<std::uint32_t>(D.n));
  const std::uint32_t n = static_cast<std::uint32_t>(D.n);

  SingleResult result;
  result.permutations = config.permutations;
  result.alpha = config.alpha;
  result.seed = config.seed;
  result.profile = weighted_t_profile(D, 1, n);
  result.tau_hat = result.profile.best_b;
  result.m_n = result.profile.best_value;

  std::vector<double> replicates(config.permutations);
  parallel_for(0, config.permutations, config.threads, [&](std::size_t j) {
    const std::vector<std::uint32_t> order = permute_indices(n, config.seed, j + 1);
    replicates[j] = scan_max(D, order, 1, n).value;
  });

  result.threshold = permutation_threshold(replicates, config.alpha);
  std::size_t count_ge = 0;
  for (const double v : replicates) {
    if (v >= result.m_n) ++count_ge;
  }
  result.p_value = static_cast<double>(1 + count_ge) / static_cast<double>(config.permutations + 1);
  result.rejected = !result.profile.all_degenerate && result.m_n > result.threshold;
  return result;
}

SingleResult single_changepoint_test(const DataMatrix& data, const GroupingScheme& scheme,
                                     const DetectConfig& config) {
  const DistanceMatrix D = pairwise_matrix(data, scheme, config.threads);
  return single_changepoint_test(D, config);
}

namespace {

class WbsRunner {
 public:
  WbsRunner(const DistanceMatrix& D, std::vector<Interval> intervals, const DetectConfig& config)
      : d_(D), intervals_(std::move(intervals)), config_(config) {
    result_.n = static_cast<std::uint32_t>(D.n);
    result_.config = config_;
  }

  ChangePointSet run() {
    recurse(1, static_cast<std::uint32_t>(d_.n));
    std::sort(result_.details.begin(), result_.details.end(),
              [](const ChangePointRecord& a, const ChangePointRecord& b) { return a.tau < b.tau; });
    result_.locations.reserve(result_.details.size());
    for (const auto& rec : result_.details) result_.locations.push_back(rec.tau);
    return std::move(result_);
  }

 private:
  void recurse(std::uint32_t s, std::uint32_t e) {
    if (e - s < 7) return;
    const auto candidate = wbs_segment_max(d_, intervals_, s, e);
    if (!candidate) return;

    const std::uint64_t node_id = next_node_id_++;
    std::vector<double> replicates(config_.permutations);
    parallel_for(0, config_.permutations, config_.threads, [&](std::size_t j) {
      std::vector<std::uint32_t> order(d_.n);
      std::iota(order.begin(), order.end(), 0u);
      RandomStream rs(substream_seed(config_.seed, StreamDomain::wbs_permutation,
                                     (node_id << 32) | (j + 1)));
      rs.shuffle(std::span<std::uint32_t>(order).subspan(s - 1, e - s + 1));
      const auto permuted = wbs_segment_max(d_, intervals_, order, s, e);
      replicates[j] = permuted ? permuted->value : 0.0;
    });
    const double zeta = permutation_threshold(std::move(replicates), config_.alpha);

    if (!candidate->all_degenerate && candidate->value > zeta) {
      const Interval iv = intervals_[candidate->interval_index];
      ChangePointRecord rec;
      rec.tau = candidate->b;
      rec.statistic = candidate->value;
      rec.threshold = zeta;
      rec.segment_s = s;
      rec.segment_e = e;
      rec.interval_s = iv.s;
      rec.interval_e = iv.e;
      rec.order_found = static_cast<std::uint32_t>(result_.details.size());
      result_.details.push_back(rec);
      recurse(s, candidate->b);
      recurse(candidate->b + 1, e);
    }
  }

  const DistanceMatrix& d_;
  std::vector<Interval> intervals_;
  DetectConfig config_;
  ChangePointSet result_;
  std::uint64_t next_node_id_ = 0;
};

}  // namespace

ChangePointSet wbs_detect_with_intervals(const DistanceMatrix& D, std::vector<Interval> intervals,
                                         const DetectConfig& config) {
  require_config(config);
  require_length(static_cast<std::uint32_t>(D.n));
  for (const Interval iv : intervals) {
    if (iv.s < 1 || iv.e > D.n || iv.e < iv.s || iv.e - iv.s < 7) {
      throw ValidationError("wbs_detect: interval [" + std::to_string(iv.s) + ", " +
                            std::to_string(iv.e) + "] violates the window invariants");
    }
  }
  return WbsRunner(D, std::move(intervals), config).run();
}

ChangePointSet wbs_detect(const DistanceMatrix& D, const DetectConfig& config) {
  require_config(config);
  require_length(static_cast<std::uint32_t>(D.n));
  if (config.intervals < 1) throw ValidationError("wbs_detect: need at least one interval");
  auto intervals =
      draw_intervals(static_cast<std::uint32_t>(D.n), config.intervals, config.seed);
  return wbs_detect_with_intervals(D, std::move(intervals), config);
}

ChangePointSet wbs_detect(const DataMatrix& data, const GroupingScheme& scheme,
                          const DetectConfig& config) {
  const DistanceMatrix D = pairwise_matrix(data, scheme, config.threads);
  return wbs_detect(D, config);
}

}  // namespace hdcpd
