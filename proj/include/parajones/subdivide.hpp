#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "parajones/diagram.hpp"

namespace parajones {

/// Crossings as vertices, one edge per arc connecting two crossings
/// (self-loops allowed); arcs running to open endpoints contribute nothing.
struct CrossingGraph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

CrossingGraph build_graph(const Diagram& d);

/// Balanced bisection (sizes differ by at most 1), Kernighan-Lin style
/// refinement from a seeded start, deterministic for a fixed seed. Ties are
/// broken by lowest vertex id. Throws Error(errc::too_small) for graphs
/// with fewer than 2 vertices.
std::pair<std::vector<int>, std::vector<int>> min_bisect(const CrossingGraph& g, uint64_t seed);

/// Binary gluing tree over 2^m pieces. Leaves hold the piece diagrams;
/// every internal node holds exactly the cut transpositions whose two
/// labels lie in different children of that node.
struct GluingPlan {
  struct Node {
    int left = -1;
    int right = -1;
    Diagram piece;  // leaves only
    std::vector<std::pair<int, int>> transpositions;
    int leaf_index = -1;
  };
  std::vector<Node> nodes;
  int root = -1;
  int depth = 0;
  long total_writhe = 0;
  std::vector<int> original_endpoints;

  bool is_leaf(int node) const { return nodes[static_cast<size_t>(node)].left < 0; }
  std::vector<int> leaves() const;  // node indices in leaf order
  std::vector<int> leaf_crossing_counts() const;
};

/// Recursive bisection of the diagram to depth m (2^m leaves). Requires
/// 2^m <= max(1, crossing count); Error(errc::too_many_pieces) otherwise.
GluingPlan subdivide(const Diagram& d, int m, uint64_t seed);

}  // namespace parajones
