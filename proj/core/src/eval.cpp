#include "hdcpd/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <unordered_map>

#include "hdcpd/detect.hpp"
#include "hdcpd/parallel.hpp"
#include "hdcpd/rng.hpp"

namespace hdcpd {

std::vector<std::uint32_t> segmentation_labels(std::span<const std::uint32_t> cps, std::size_t n) {
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] < 1 || cps[i] >= n) {
      throw ValidationError("segmentation_labels: location " + std::to_string(cps[i]) +
                            " outside [1, " + std::to_string(n - 1) + "]");
    }
    if (i > 0 && cps[i] <= cps[i - 1]) {
      throw ValidationError("segmentation_labels: locations must be strictly increasing");
    }
  }
  std::vector<std::uint32_t> labels(n);
  std::uint32_t label = 0;
  std::size_t next = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    while (next < cps.size() && cps[next] < t) {
      ++label;
      ++next;
    }
    labels[t - 1] = label;
  }
  return labels;
}

double adjusted_rand_index(std::span<const std::uint32_t> labels_a,
                           std::span<const std::uint32_t> labels_b) {
  if (labels_a.size() != labels_b.size()) {
    throw ValidationError("adjusted_rand_index: label sequences differ in length");
  }
  const std::size_t n = labels_a.size();
  if (n < 2) throw ValidationError("adjusted_rand_index: need at least 2 items");

  const auto remap = [n](std::span<const std::uint32_t> labels) {
    std::unordered_map<std::uint32_t, std::uint32_t> ids;
    std::vector<std::uint32_t> dense(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [it, inserted] = ids.emplace(labels[i], static_cast<std::uint32_t>(ids.size()));
      dense[i] = it->second;
    }
    return std::pair{dense, ids.size()};
  };
  const auto [a, ka] = remap(labels_a);
  const auto [b, kb] = remap(labels_b);

  std::vector<std::int64_t> table(ka * kb, 0);
  std::vector<std::int64_t> row(ka, 0), col(kb, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++table[a[i] * kb + b[i]];
    ++row[a[i]];
    ++col[b[i]];
  }

  const auto choose2 = [](std::int64_t x) { return x * (x - 1) / 2; };
  std::int64_t index = 0, sum_a = 0, sum_b = 0;
  for (const std::int64_t v : table) index += choose2(v);
  for (const std::int64_t v : row) sum_a += choose2(v);
  for (const std::int64_t v : col) sum_b += choose2(v);
  const std::int64_t total = choose2(static_cast<std::int64_t>(n));

  const double expected =
      static_cast<double>(sum_a) * static_cast<double>(sum_b) / static_cast<double>(total);
  const double maximum = 0.5 * (static_cast<double>(sum_a) + static_cast<double>(sum_b));
  const double denom = maximum - expected;
  if (denom == 0.0) {
    // both single-cluster or both all-singletons: identical partitions
    return 1.0;
  }
  return (static_cast<double>(index) - expected) / denom;
}

SchemeKind scheme_kind_from_name(std::string_view name) {
  if (name == "l1sqrt" || name == "l1_sqrt") return SchemeKind::l1_sqrt;
  if (name == "euclid" || name == "euclidean_baseline") return SchemeKind::euclidean_baseline;
  if (name == "chain-graph" || name == "chain_graph") return SchemeKind::chain_graph;
  if (name == "chain-dag" || name == "chain_dag") return SchemeKind::chain_dag;
  throw ValidationError("unknown scheme kind '" + std::string(name) + "'");
}

std::string_view scheme_kind_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::l1_sqrt: return "l1sqrt";
    case SchemeKind::euclidean_baseline: return "euclid";
    case SchemeKind::chain_graph: return "chain-graph";
    case SchemeKind::chain_dag: return "chain-dag";
  }
  return "unknown";
}

GroupingScheme scheme_for(SchemeKind kind, std::size_t p) {
  switch (kind) {
    case SchemeKind::l1_sqrt: return build_scheme(SchemeMode::l1_sqrt, p);
    case SchemeKind::euclidean_baseline: return build_scheme(SchemeMode::euclidean_baseline, p);
    case SchemeKind::chain_graph: return chain_graph_scheme(p);
    case SchemeKind::chain_dag: return chain_dag_scheme(p);
  }
  throw ValidationError("unknown scheme kind");
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  if (config.reps < 1) throw ValidationError("run_experiment: need at least one rep");

  ExperimentSummary summary;
  summary.config = config;
  summary.reps.resize(config.reps);

  const GroupingScheme scheme = scheme_for(config.scheme, config.p);

  parallel_for(0, config.reps, config.threads, [&](std::size_t r) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t gen_seed = substream_seed(config.seed, StreamDomain::experiment, 2 * r);
    const std::uint64_t det_seed =
        substream_seed(config.seed, StreamDomain::experiment, 2 * r + 1);

    const LabeledDataset dataset = generate(config.scenario, config.n, config.p, gen_seed);

    DetectConfig detect_config;
    detect_config.alpha = config.alpha;
    detect_config.permutations = config.permutations;
    detect_config.intervals = config.intervals;
    detect_config.seed = det_seed;
    detect_config.threads = 1;  // reps already run in parallel

    RepRecord& rec = summary.reps[r];
    rec.rep = static_cast<std::uint32_t>(r);
    if (config.method == DetectMethod::single) {
      const SingleResult result = single_changepoint_test(dataset.data, scheme, detect_config);
      if (result.rejected) rec.locations.push_back(result.tau_hat);
    } else {
      const ChangePointSet result = wbs_detect(dataset.data, scheme, detect_config);
      rec.locations = result.locations;
    }

    const auto truth = segmentation_labels(dataset.true_cps, config.n);
    const auto estimate = segmentation_labels(rec.locations, config.n);
    rec.ari = adjusted_rand_index(truth, estimate);
    rec.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  double sum = 0.0;
  std::size_t detected = 0;
  for (const auto& rec : summary.reps) {
    sum += rec.ari;
    if (!rec.locations.empty()) ++detected;
  }
  summary.mean_ari = sum / static_cast<double>(config.reps);
  double ss = 0.0;
  for (const auto& rec : summary.reps) {
    const double d = rec.ari - summary.mean_ari;
    ss += d * d;
  }
  summary.sd_ari =
      config.reps > 1 ? std::sqrt(ss / static_cast<double>(config.reps - 1)) : 0.0;
  summary.detection_fraction = static_cast<double>(detected) / static_cast<double>(config.reps);
  return summary;
}

}  // namespace hdcpd
