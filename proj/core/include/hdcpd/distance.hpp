#pragma once

#include <cstdint>
#include <span>

#include "hdcpd/grouping.hpp"
#include "hdcpd/types.hpp"

namespace hdcpd {

/// Number of gamma evaluations since process start. Test hook: the
/// permutation machinery must never recompute distances, so this counter
/// must not move while replicates run against a prebuilt DistanceMatrix.
std::uint64_t gamma_eval_count();

/// Generalized Euclidean distance between two p-vectors under a scheme:
/// sqrt of the summed per-group base distances (Euclidean norm of the
/// subvector difference; absolute difference for singletons), or the plain
/// Euclidean norm in euclidean_baseline mode. Group contributions are
/// accumulated in group-index order, with compensated summation once
/// p >= 10^4, so results do not depend on threading.
double gamma(std::span<const double> z, std::span<const double> z2, const GroupingScheme& scheme);

/// n x n matrix of gamma values, computed once per analysis in O(n^2 p).
/// Entries are independent, so row blocks may run on several threads with
/// bit-identical results.
DistanceMatrix pairwise_matrix(const DataMatrix& data, const GroupingScheme& scheme,
                               unsigned threads = 1);

}  // namespace hdcpd
