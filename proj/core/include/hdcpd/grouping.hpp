#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "hdcpd/types.hpp"

namespace hdcpd {

enum class SchemeMode {
  l1_sqrt,             // sqrt of the l1 norm: p singleton groups, absolute difference
  grouped_sqrt,        // sqrt of summed per-group Euclidean distances
  euclidean_baseline,  // plain Euclidean norm, no square-root composition
  graph_cliques,       // groups are the edge pairs of an undirected graph
  dag_parents,         // groups are {i} union parents(i) of a DAG
};

std::string_view mode_name(SchemeMode mode);

/// Partition (possibly overlapping) of the p coordinates into groups, plus
/// the composition rule that turns per-group base distances into gamma.
/// Group members are stored 0-based; file formats and errors use 1-based
/// coordinate indices.
struct GroupingScheme {
  SchemeMode mode = SchemeMode::l1_sqrt;
  std::size_t p = 0;
  std::vector<std::vector<std::uint32_t>> groups;
};

/// l1_sqrt or euclidean_baseline scheme over p coordinates.
GroupingScheme build_scheme(SchemeMode mode, std::size_t p);

/// grouped_sqrt from explicit 1-based index groups. Groups may overlap but
/// must be nonempty, in range, and jointly cover {1..p}.
GroupingScheme build_scheme_from_groups(std::size_t p,
                                        const std::vector<std::vector<std::uint32_t>>& groups_1based);

/// graph_cliques: one group {i, j} per undirected edge. Every coordinate
/// must appear in at least one edge.
GroupingScheme build_scheme_from_edges(std::size_t p,
                                       const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges_1based);

/// dag_parents: group i is {i} union parents(i), for i = 1..p. parents_1based
/// may be shorter than p; missing nodes have no parents. The graph must be
/// acyclic.
GroupingScheme build_scheme_from_parents(std::size_t p,
                                         const std::vector<std::vector<std::uint32_t>>& parents_1based);

// Structure-file parsers. Formats (all UTF-8 text, 1-based indices,
// '#' starts a comment line, blank lines ignored):
//   groups: one group per line, comma-separated indices
//   graph:  one edge "i,j" per line
//   dag:    lines "i: p1,p2,..." (empty parent list allowed)
GroupingScheme parse_group_file(std::size_t p, std::istream& in);
GroupingScheme parse_graph_file(std::size_t p, std::istream& in);
GroupingScheme parse_dag_file(std::size_t p, std::istream& in);

/// Edge pairs {i, i+1} for i = 1..p-1 (the pairwise-neighbor graph).
GroupingScheme chain_graph_scheme(std::size_t p);

/// DAG groups of the directed chain 1 -> 2 -> ... -> p:
/// {1}, {1,2}, {2,3}, ..., {p-1,p}.
GroupingScheme chain_dag_scheme(std::size_t p);

}  // namespace hdcpd
