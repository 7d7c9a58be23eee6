#include "hdcpd/grouping.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <istream>
#include <sstream>
#include <string>

namespace hdcpd {

namespace {

[[noreturn]] void fail(const std::string& message) { throw ValidationError(message); }

std::uint32_t parse_index(std::string_view token, std::size_t p, std::size_t line_no) {
  // trim spaces
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
    token.remove_suffix(1);
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    fail("malformed index '" + std::string(token) + "' on line " + std::to_string(line_no));
  }
  if (value < 1 || value > p) {
    fail("index " + std::to_string(value) + " out of range [1, " + std::to_string(p) +
         "] on line " + std::to_string(line_no));
  }
  return value;
}

std::vector<std::uint32_t> to_zero_based_group(const std::vector<std::uint32_t>& group_1based,
                                               std::size_t p, std::size_t group_no) {
  if (group_1based.empty()) {
    fail("group " + std::to_string(group_no) + " is empty");
  }
  std::vector<std::uint32_t> out;
  out.reserve(group_1based.size());
  for (const std::uint32_t idx : group_1based) {
    if (idx < 1 || idx > p) {
      fail("group " + std::to_string(group_no) + ": index " + std::to_string(idx) +
           " out of range [1, " + std::to_string(p) + "]");
    }
    out.push_back(idx - 1);
  }
  auto sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail("group " + std::to_string(group_no) + " repeats an index");
  }
  return out;
}

void require_coverage(const GroupingScheme& scheme) {
  std::vector<char> seen(scheme.p, 0);
  for (const auto& group : scheme.groups) {
    for (const std::uint32_t idx : group) seen[idx] = 1;
  }
  for (std::size_t j = 0; j < scheme.p; ++j) {
    if (!seen[j]) {
      fail("coordinate " + std::to_string(j + 1) + " is not covered by any group");
    }
  }
}

// Returns meaningful lines with their 1-based line numbers.
std::vector<std::pair<std::string, std::size_t>> read_lines(std::istream& in) {
  std::vector<std::pair<std::string, std::size_t>> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.emplace_back(line, line_no);
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

bool is_blank(std::string_view token) {
  return token.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

std::string_view mode_name(SchemeMode mode) {
  switch (mode) {
    case SchemeMode::l1_sqrt: return "l1_sqrt";
    case SchemeMode::grouped_sqrt: return "grouped_sqrt";
    case SchemeMode::euclidean_baseline: return "euclidean_baseline";
    case SchemeMode::graph_cliques: return "graph_cliques";
    case SchemeMode::dag_parents: return "dag_parents";
  }
  return "unknown";
}

GroupingScheme build_scheme(SchemeMode mode, std::size_t p) {
  if (p == 0) fail("dimension p must be at least 1");
  if (mode != SchemeMode::l1_sqrt && mode != SchemeMode::euclidean_baseline) {
    fail("build_scheme(mode, p) is only for l1_sqrt and euclidean_baseline; "
         "structured modes need a structure payload");
  }
  GroupingScheme scheme;
  scheme.mode = mode;
  scheme.p = p;
  scheme.groups.reserve(p);
  for (std::uint32_t j = 0; j < p; ++j) scheme.groups.push_back({j});
  return scheme;
}

GroupingScheme build_scheme_from_groups(std::size_t p,
                                        const std::vector<std::vector<std::uint32_t>>& groups_1based) {
  if (p == 0) fail("dimension p must be at least 1");
  if (groups_1based.empty()) fail("scheme needs at least one group");
  GroupingScheme scheme;
  scheme.mode = SchemeMode::grouped_sqrt;
  scheme.p = p;
  scheme.groups.reserve(groups_1based.size());
  for (std::size_t g = 0; g < groups_1based.size(); ++g) {
    scheme.groups.push_back(to_zero_based_group(groups_1based[g], p, g + 1));
  }
  require_coverage(scheme);
  return scheme;
}

GroupingScheme build_scheme_from_edges(std::size_t p,
                                       const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges_1based) {
  if (p == 0) fail("dimension p must be at least 1");
  if (edges_1based.empty()) fail("graph scheme needs at least one edge");
  GroupingScheme scheme;
  scheme.mode = SchemeMode::graph_cliques;
  scheme.p = p;
  scheme.groups.reserve(edges_1based.size());
  for (std::size_t g = 0; g < edges_1based.size(); ++g) {
    const auto [i, j] = edges_1based[g];
    if (i == j) fail("edge " + std::to_string(g + 1) + " is a self-loop");
    scheme.groups.push_back(to_zero_based_group({i, j}, p, g + 1));
  }
  require_coverage(scheme);
  return scheme;
}

GroupingScheme build_scheme_from_parents(std::size_t p,
                                         const std::vector<std::vector<std::uint32_t>>& parents_1based) {
  if (p == 0) fail("dimension p must be at least 1");
  if (parents_1based.size() > p) fail("parent list names more nodes than p");

  // adjacency parent -> child, for the acyclicity check
  std::vector<std::vector<std::uint32_t>> children(p);
  std::vector<std::size_t> indegree(p, 0);
  for (std::size_t i = 0; i < parents_1based.size(); ++i) {
    for (const std::uint32_t parent : parents_1based[i]) {
      if (parent < 1 || parent > p) {
        fail("node " + std::to_string(i + 1) + ": parent " + std::to_string(parent) +
             " out of range [1, " + std::to_string(p) + "]");
      }
      if (parent == i + 1) fail("node " + std::to_string(i + 1) + " lists itself as parent");
      children[parent - 1].push_back(static_cast<std::uint32_t>(i));
      ++indegree[i];
    }
  }
  // Kahn's algorithm
  std::deque<std::uint32_t> ready;
  for (std::uint32_t i = 0; i < p; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::uint32_t node = ready.front();
    ready.pop_front();
    ++visited;
    for (const std::uint32_t child : children[node]) {
      if (--indegree[child] == 0) ready.push_back(child);
    }
  }
  if (visited != p) fail("parent structure contains a cycle");

  GroupingScheme scheme;
  scheme.mode = SchemeMode::dag_parents;
  scheme.p = p;
  scheme.groups.reserve(p);
  for (std::uint32_t i = 0; i < p; ++i) {
    std::vector<std::uint32_t> group{i};
    if (i < parents_1based.size()) {
      for (const std::uint32_t parent : parents_1based[i]) {
        if (parent - 1 != i) group.push_back(parent - 1);
      }
    }
    std::sort(group.begin(), group.end());
    group.erase(std::unique(group.begin(), group.end()), group.end());
    scheme.groups.push_back(std::move(group));
  }
  return scheme;  // coverage holds by construction: group i contains i
}

GroupingScheme parse_group_file(std::size_t p, std::istream& in) {
  std::vector<std::vector<std::uint32_t>> groups;
  for (const auto& [line, line_no] : read_lines(in)) {
    std::vector<std::uint32_t> group;
    for (const std::string_view token : split(line, ',')) {
      if (is_blank(token)) fail("empty index on line " + std::to_string(line_no));
      group.push_back(parse_index(token, p, line_no));
    }
    groups.push_back(std::move(group));
  }
  if (groups.empty()) fail("grouping file has no groups");
  return build_scheme_from_groups(p, groups);
}

GroupingScheme parse_graph_file(std::size_t p, std::istream& in) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& [line, line_no] : read_lines(in)) {
    const auto parts = split(line, ',');
    if (parts.size() != 2) {
      fail("expected an edge 'i,j' on line " + std::to_string(line_no));
    }
    edges.emplace_back(parse_index(parts[0], p, line_no), parse_index(parts[1], p, line_no));
  }
  if (edges.empty()) fail("graph file has no edges");
  return build_scheme_from_edges(p, edges);
}

GroupingScheme parse_dag_file(std::size_t p, std::istream& in) {
  std::vector<std::vector<std::uint32_t>> parents(p);
  std::vector<char> defined(p, 0);
  for (const auto& [line, line_no] : read_lines(in)) {
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
      fail("expected 'i: parents' on line " + std::to_string(line_no));
    }
    const std::uint32_t node = parse_index(std::string_view(line).substr(0, colon), p, line_no);
    if (defined[node - 1]) {
      fail("node " + std::to_string(node) + " defined twice (line " + std::to_string(line_no) + ")");
    }
    defined[node - 1] = 1;
    const std::string_view rest = std::string_view(line).substr(colon + 1);
    if (!is_blank(rest)) {
      for (const std::string_view token : split(rest, ',')) {
        if (is_blank(token)) fail("empty parent index on line " + std::to_string(line_no));
        parents[node - 1].push_back(parse_index(token, p, line_no));
      }
    }
  }
  return build_scheme_from_parents(p, parents);
}

GroupingScheme chain_graph_scheme(std::size_t p) {
  if (p < 2) fail("chain graph needs p >= 2");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(p - 1);
  for (std::uint32_t i = 1; i < p; ++i) edges.emplace_back(i, i + 1);
  return build_scheme_from_edges(p, edges);
}

GroupingScheme chain_dag_scheme(std::size_t p) {
  if (p == 0) fail("dimension p must be at least 1");
  std::vector<std::vector<std::uint32_t>> parents(p);
  for (std::uint32_t i = 1; i < p; ++i) parents[i] = {i};  // parent of node i+1 is node i
  return build_scheme_from_parents(p, parents);
}

}  // namespace hdcpd
