#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hdcpd/grouping.hpp"
#include "hdcpd/simgen.hpp"
#include "hdcpd/types.hpp"

// Adjusted Rand Index scoring of estimated against true segmentations, and
// the batch experiment harness that runs generate -> detect -> score over
// many seeded replicates.

namespace hdcpd {

/// Segment labels induced by change-points: label[t] counts the
/// change-points strictly below time t+1, so consecutive segments get
/// consecutive labels starting at 0.
std::vector<std::uint32_t> segmentation_labels(std::span<const std::uint32_t> cps, std::size_t n);

/// Hubert-Arabie adjusted Rand index between two labelings of equal length
/// (>= 2). Two single-cluster labelings score 1; a single-cluster labeling
/// against a nontrivial one scores 0. No clamping: slightly negative
/// values are reported as computed.
double adjusted_rand_index(std::span<const std::uint32_t> labels_a,
                           std::span<const std::uint32_t> labels_b);

enum class DetectMethod { single, wbs };
enum class SchemeKind { l1_sqrt, euclidean_baseline, chain_graph, chain_dag };

SchemeKind scheme_kind_from_name(std::string_view name);
std::string_view scheme_kind_name(SchemeKind kind);

/// Scheme instance for a given dimension. chain_graph pairs coordinates
/// (i, i+1); chain_dag uses the parent groups of the directed chain.
GroupingScheme scheme_for(SchemeKind kind, std::size_t p);

struct ExperimentConfig {
  Scenario scenario = Scenario::null_gauss_iid;
  std::size_t n = 100, p = 100;
  DetectMethod method = DetectMethod::single;
  SchemeKind scheme = SchemeKind::l1_sqrt;
  double alpha = 0.05;
  std::uint32_t permutations = 199;
  std::uint32_t intervals = 50;
  std::uint32_t reps = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // parallelism across reps; each rep runs serially
};

struct RepRecord {
  std::uint32_t rep = 0;
  double ari = 0.0;
  std::vector<std::uint32_t> locations;
  double runtime_seconds = 0.0;
};

struct ExperimentSummary {
  ExperimentConfig config;
  double mean_ari = 0.0;
  double sd_ari = 0.0;
  double detection_fraction = 0.0;  // reps reporting at least one location
  std::vector<RepRecord> reps;
};

/// generate -> detect -> ARI for each rep, fully seeded: rep r derives its
/// generator and detector streams from (seed, r).
ExperimentSummary run_experiment(const ExperimentConfig& config);

}  // namespace hdcpd
