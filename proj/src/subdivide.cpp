#include "parajones/subdivide.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "parajones/error.hpp"

namespace parajones {

CrossingGraph build_graph(const Diagram& d) {
  CrossingGraph g;
  g.vertices = d.crossing_count();
  for (int c = 0; c < g.vertices; ++c) {
    for (int s = 0; s < 4; ++s) {
      const Attach& at = d.slots(c)[static_cast<size_t>(s)];
      if (at.is_endpoint()) continue;
      if (std::make_pair(c, s) <= std::make_pair(at.peer_crossing, at.peer_slot))
        g.edges.emplace_back(c, at.peer_crossing);
    }
  }
  return g;
}

namespace {

struct Bisection {
  std::vector<char> side;  // per vertex, 0 or 1
  long cut = 0;
};

long cut_size(const CrossingGraph& g, const std::vector<char>& side) {
  long cut = 0;
  for (const auto& [u, v] : g.edges)
    if (u != v && side[static_cast<size_t>(u)] != side[static_cast<size_t>(v)]) ++cut;
  return cut;
}

// One Kernighan-Lin run from a seeded balanced start. Self-loops are
// excluded up front: cutting one is never beneficial and the split machinery
// never separates an arc from its own crossing.
Bisection kl_run(const CrossingGraph& g, uint64_t seed) {
  const int real_n = g.vertices;
  const int n = real_n % 2 == 0 ? real_n : real_n + 1;  // dummy pad for odd sizes
  std::vector<std::vector<long>> w(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
  for (const auto& [u, v] : g.edges) {
    if (u == v) continue;
    w[static_cast<size_t>(u)][static_cast<size_t>(v)] += 1;
    w[static_cast<size_t>(v)][static_cast<size_t>(u)] += 1;
  }

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> side(static_cast<size_t>(n), 0);
  for (int i = n / 2; i < n; ++i) side[static_cast<size_t>(order[static_cast<size_t>(i)])] = 1;

  std::vector<long> dval(static_cast<size_t>(n));
  std::vector<char> locked(static_cast<size_t>(n));
  for (int pass = 0; pass < 32; ++pass) {
    std::fill(locked.begin(), locked.end(), 0);
    for (int v = 0; v < n; ++v) {
      long d = 0;
      for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        d += side[static_cast<size_t>(u)] != side[static_cast<size_t>(v)]
                 ? w[static_cast<size_t>(v)][static_cast<size_t>(u)]
                 : -w[static_cast<size_t>(v)][static_cast<size_t>(u)];
      }
      dval[static_cast<size_t>(v)] = d;
    }

    std::vector<std::pair<int, int>> swaps;
    std::vector<long> gains;
    for (int step = 0; step < n / 2; ++step) {
      int best_a = -1;
      int best_b = -1;
      long best_gain = 0;
      bool have = false;
      for (int a = 0; a < n; ++a) {
        if (locked[static_cast<size_t>(a)] || side[static_cast<size_t>(a)] != 0) continue;
        for (int b = 0; b < n; ++b) {
          if (locked[static_cast<size_t>(b)] || side[static_cast<size_t>(b)] != 1) continue;
          long gain = dval[static_cast<size_t>(a)] + dval[static_cast<size_t>(b)] -
                      2 * w[static_cast<size_t>(a)][static_cast<size_t>(b)];
          if (!have || gain > best_gain) {
            have = true;
            best_gain = gain;
            best_a = a;
            best_b = b;
          }
        }
      }
      if (!have) break;
      swaps.emplace_back(best_a, best_b);
      gains.push_back(best_gain);
      locked[static_cast<size_t>(best_a)] = locked[static_cast<size_t>(best_b)] = 1;
      for (int x = 0; x < n; ++x) {
        if (locked[static_cast<size_t>(x)]) continue;
        long delta = side[static_cast<size_t>(x)] == 0
                         ? 2 * w[static_cast<size_t>(x)][static_cast<size_t>(best_a)] -
                               2 * w[static_cast<size_t>(x)][static_cast<size_t>(best_b)]
                         : 2 * w[static_cast<size_t>(x)][static_cast<size_t>(best_b)] -
                               2 * w[static_cast<size_t>(x)][static_cast<size_t>(best_a)];
        dval[static_cast<size_t>(x)] += delta;
      }
    }

    long best_total = 0;
    size_t best_prefix = 0;
    long running = 0;
    for (size_t k = 0; k < gains.size(); ++k) {
      running += gains[k];
      if (running > best_total) {
        best_total = running;
        best_prefix = k + 1;
      }
    }
    if (best_prefix == 0) break;
    for (size_t k = 0; k < best_prefix; ++k) {
      side[static_cast<size_t>(swaps[k].first)] = 1;
      side[static_cast<size_t>(swaps[k].second)] = 0;
    }
  }

  side.resize(static_cast<size_t>(real_n));
  return Bisection{side, cut_size(g, side)};
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> min_bisect(const CrossingGraph& g, uint64_t seed) {
  if (g.vertices < 2) throw Error(errc::too_small, "bisection needs at least 2 vertices");
  constexpr int kRestarts = 4;
  Bisection best;
  bool have = false;
  for (int r = 0; r < kRestarts; ++r) {
    Bisection b = kl_run(g, seed + static_cast<uint64_t>(r) * 0x9e3779b97f4a7c15ull);
    // Canonicalize so the side holding vertex 0 comes first; prefer lower
    // cut, then the lexicographically smaller side vector.
    if (b.side[0] == 1)
      for (auto& s : b.side) s = static_cast<char>(1 - s);
    if (!have || b.cut < best.cut || (b.cut == best.cut && b.side < best.side)) {
      best = std::move(b);
      have = true;
    }
  }
  std::pair<std::vector<int>, std::vector<int>> parts;
  for (int v = 0; v < g.vertices; ++v)
    (best.side[static_cast<size_t>(v)] == 0 ? parts.first : parts.second).push_back(v);
  return parts;
}

std::vector<int> GluingPlan::leaves() const {
  std::vector<int> out;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].left < 0) out.push_back(static_cast<int>(i));
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    return nodes[static_cast<size_t>(a)].leaf_index < nodes[static_cast<size_t>(b)].leaf_index;
  });
  return out;
}

std::vector<int> GluingPlan::leaf_crossing_counts() const {
  std::vector<int> out;
  for (int node : leaves()) out.push_back(nodes[static_cast<size_t>(node)].piece.crossing_count());
  return out;
}

GluingPlan subdivide(const Diagram& d, int m, uint64_t seed) {
  if (m < 0) throw Error(errc::invalid_config, "subdivision depth must be nonnegative");
  const long n = d.crossing_count();
  if (m >= 63 || (1ll << m) > std::max(1l, n))
    throw Error(errc::too_many_pieces, "2^m exceeds the crossing count");

  GluingPlan plan;
  plan.depth = m;
  plan.total_writhe = d.writhe();
  plan.original_endpoints = d.endpoints();
  LabelAllocator alloc(next_free_label(d));
  int next_leaf = 0;

  auto build = [&](auto&& self, Diagram piece, int depth) -> int {
    if (depth == m) {
      GluingPlan::Node leaf;
      leaf.piece = std::move(piece);
      leaf.leaf_index = next_leaf++;
      plan.nodes.push_back(std::move(leaf));
      return static_cast<int>(plan.nodes.size() - 1);
    }
    CrossingGraph g = build_graph(piece);
    uint64_t node_seed = seed + 0x9e3779b97f4a7c15ull * static_cast<uint64_t>(plan.nodes.size() + 1) +
                         static_cast<uint64_t>(depth);
    auto [part_a, part_b] = min_bisect(g, node_seed);
    SplitResult split = split_pair(piece, part_a, alloc);
    GluingPlan::Node node;
    node.transpositions = std::move(split.transpositions);
    int left = self(self, std::move(split.inside), depth + 1);
    int right = self(self, std::move(split.outside), depth + 1);
    node.left = left;
    node.right = right;
    plan.nodes.push_back(std::move(node));
    return static_cast<int>(plan.nodes.size() - 1);
  };
  plan.root = build(build, d, 0);
  return plan;
}

}  // namespace parajones
