#include "parajones/bracket.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "parajones/error.hpp"
#include "parajones/parallel.hpp"
#include "parajones/permutation.hpp"

namespace parajones {

namespace {

constexpr int kMaxDirectCrossings = 30;

struct Uf {
  std::vector<int> parent;
  explicit Uf(int n) : parent(static_cast<size_t>(n)) {}
  void reset(int n) {
    parent.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  /// True when the edge closed a loop (both ends already connected).
  bool join(int a, int b) {
    int ra = find(a);
    int rb = find(b);
    if (ra == rb) return true;
    parent[static_cast<size_t>(ra)] = rb;
    return false;
  }
};

// Arcs of a piece, indexed densely; each open endpoint knows its arc.
struct ArcIndex {
  int count = 0;
  std::vector<std::array<int, 4>> slot_arc;
  std::vector<int> sorted_endpoints;
  std::vector<int> endpoint_arc;  // aligned with sorted_endpoints
};

ArcIndex build_arc_index(const Diagram& d) {
  const int n = d.crossing_count();
  ArcIndex ix;
  ix.slot_arc.assign(static_cast<size_t>(n), {-1, -1, -1, -1});
  std::map<int, int> label_arc;
  for (int c = 0; c < n; ++c) {
    for (int s = 0; s < 4; ++s) {
      if (ix.slot_arc[static_cast<size_t>(c)][static_cast<size_t>(s)] >= 0) continue;
      const Attach& at = d.slots(c)[static_cast<size_t>(s)];
      int arc = ix.count++;
      ix.slot_arc[static_cast<size_t>(c)][static_cast<size_t>(s)] = arc;
      if (at.is_endpoint()) {
        label_arc[at.endpoint] = arc;
      } else {
        ix.slot_arc[static_cast<size_t>(at.peer_crossing)][static_cast<size_t>(at.peer_slot)] = arc;
      }
    }
  }
  for (const auto& [foot, head] : d.free_strands()) {
    int arc = ix.count++;
    label_arc[foot] = arc;
    label_arc[head] = arc;
  }
  for (const auto& [label, arc] : label_arc) {
    ix.sorted_endpoints.push_back(label);
    ix.endpoint_arc.push_back(arc);
  }
  return ix;
}

StateTable expand_range(const Diagram& piece, const ArcIndex& ix, unsigned long long begin,
                        unsigned long long end) {
  const int n = piece.crossing_count();
  StateTable out;
  out.endpoints = ix.sorted_endpoints;
  out.piece_writhe = piece.writhe();

  std::vector<LaurentPoly> dpow(static_cast<size_t>(n + piece.free_loops() + 2));
  for (size_t k = 0; k < dpow.size(); ++k) dpow[k] = pow_d(static_cast<long>(k));

  Uf uf(ix.count);
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> root_label;  // scratch: first endpoint seen per root
  root_label.assign(static_cast<size_t>(ix.count), -1);

  for (unsigned long long state = begin; state < end; ++state) {
    uf.reset(ix.count);
    int loops = 0;
    for (int c = 0; c < n; ++c) {
      const auto& sa = ix.slot_arc[static_cast<size_t>(c)];
      if ((state >> c) & 1ull) {  // B-smoothing: join (a,d) and (b,c)
        loops += uf.join(sa[0], sa[3]);
        loops += uf.join(sa[1], sa[2]);
      } else {  // A-smoothing: join (a,b) and (c,d)
        loops += uf.join(sa[0], sa[1]);
        loops += uf.join(sa[2], sa[3]);
      }
    }
    const long alpha = n - 2 * static_cast<long>(__builtin_popcountll(state));

    pairs.clear();
    for (size_t i = 0; i < ix.sorted_endpoints.size(); ++i) {
      int r = uf.find(ix.endpoint_arc[i]);
      if (root_label[static_cast<size_t>(r)] < 0) {
        root_label[static_cast<size_t>(r)] = ix.sorted_endpoints[i];
      } else {
        pairs.emplace_back(root_label[static_cast<size_t>(r)], ix.sorted_endpoints[i]);
        root_label[static_cast<size_t>(r)] = -1;
      }
    }
    Pairing key = Pairing::from_canonical(pairs);
    out.rows[key] += dpow[static_cast<size_t>(loops + piece.free_loops())].shifted(alpha);
  }
  return out;
}

}  // namespace

void merge_tables(StateTable& lhs, StateTable&& rhs) {
  if (lhs.endpoints != rhs.endpoints)
    throw Error(errc::internal, "cannot merge tables over different endpoints");
  for (auto& [key, poly] : rhs.rows) {
    auto it = lhs.rows.find(key);
    if (it == lhs.rows.end()) {
      lhs.rows.emplace(key, std::move(poly));
    } else {
      it->second += poly;
      if (it->second.is_zero()) lhs.rows.erase(it);
    }
  }
}

StateTable expand_piece(const Diagram& piece, int workers) {
  const int n = piece.crossing_count();
  if (n > kMaxDirectCrossings)
    throw Error(errc::invalid_config, "piece too large for direct state expansion");
  ArcIndex ix = build_arc_index(piece);
  const unsigned long long total = 1ull << n;

  StateTable out;
  if (workers <= 1 || total < 1024) {
    out = expand_range(piece, ix, 0, total);
  } else {
    const int chunks = workers;
    std::vector<StateTable> parts(static_cast<size_t>(chunks));
    parallel_for_chunks(0, static_cast<long long>(total), chunks,
                        [&](int chunk, long long begin, long long end) {
                          parts[static_cast<size_t>(chunk)] =
                              expand_range(piece, ix, static_cast<unsigned long long>(begin),
                                           static_cast<unsigned long long>(end));
                        });
    out = std::move(parts[0]);
    for (size_t i = 1; i < parts.size(); ++i) merge_tables(out, std::move(parts[i]));
  }

  for (auto it = out.rows.begin(); it != out.rows.end();) {
    if (it->second.is_zero())
      it = out.rows.erase(it);
    else
      ++it;
  }
  mpz_class bound = catalan(static_cast<long>(out.endpoints.size() / 2));
  if (mpz_class(static_cast<unsigned long>(out.rows.size())) > bound)
    throw Error(errc::internal, "state-permutation count exceeds the Catalan bound");
  return out;
}

namespace {

// Node layout for the serial state sum: one node per crossing slot plus one
// per free strand. Kept structurally separate from the grouped expansion so
// the two paths stay independent checks of each other.
struct SerialIndex {
  int nodes = 0;
  std::vector<std::pair<int, int>> base_joins;  // interior arcs
  std::vector<int> sorted_endpoints;
  std::vector<int> endpoint_node;
};

SerialIndex build_serial_index(const Diagram& d) {
  const int n = d.crossing_count();
  SerialIndex ix;
  ix.nodes = 4 * n;
  std::map<int, int> label_node;
  for (int c = 0; c < n; ++c) {
    for (int s = 0; s < 4; ++s) {
      const Attach& at = d.slots(c)[static_cast<size_t>(s)];
      int node = 4 * c + s;
      if (at.is_endpoint()) {
        label_node[at.endpoint] = node;
      } else if (std::make_pair(c, s) < std::make_pair(at.peer_crossing, at.peer_slot)) {
        ix.base_joins.emplace_back(node, 4 * at.peer_crossing + at.peer_slot);
      }
    }
  }
  for (const auto& [foot, head] : d.free_strands()) {
    int node = ix.nodes++;
    label_node[foot] = node;
    label_node[head] = node;
  }
  for (const auto& [label, node] : label_node) {
    ix.sorted_endpoints.push_back(label);
    ix.endpoint_node.push_back(node);
  }
  return ix;
}

LaurentPoly serial_state_sum(const Diagram& d, const Pairing* sigma) {
  const int n = d.crossing_count();
  if (n > kMaxDirectCrossings)
    throw Error(errc::invalid_config, "diagram too large for direct state expansion");
  SerialIndex ix = build_serial_index(d);
  const std::vector<int>& labels = ix.sorted_endpoints;

  LaurentPoly acc;
  Uf uf(ix.nodes);
  std::vector<char> root_open(static_cast<size_t>(ix.nodes));
  std::vector<int> root_label(static_cast<size_t>(ix.nodes), -1);
  std::vector<std::pair<int, int>> pairs;

  const unsigned long long total = n == 0 ? 1 : (1ull << n);
  for (unsigned long long state = 0; state < total; ++state) {
    uf.reset(ix.nodes);
    for (const auto& [a, b] : ix.base_joins) uf.join(a, b);
    for (int c = 0; c < n; ++c) {
      if ((state >> c) & 1ull) {
        uf.join(4 * c + 0, 4 * c + 3);
        uf.join(4 * c + 1, 4 * c + 2);
      } else {
        uf.join(4 * c + 0, 4 * c + 1);
        uf.join(4 * c + 2, 4 * c + 3);
      }
    }
    // circles = components carrying no endpoint
    std::fill(root_open.begin(), root_open.end(), 0);
    for (int node : ix.endpoint_node) root_open[static_cast<size_t>(uf.find(node))] = 1;
    long circles = d.free_loops();
    long open_components = 0;
    for (int v = 0; v < ix.nodes; ++v) {
      if (uf.find(v) != v) continue;
      if (root_open[static_cast<size_t>(v)])
        ++open_components;
      else
        ++circles;
    }
    (void)open_components;

    long exponent_of_d = circles - 1;
    if (sigma != nullptr) {
      pairs.clear();
      for (size_t i = 0; i < labels.size(); ++i) {
        int r = uf.find(ix.endpoint_node[i]);
        if (root_label[static_cast<size_t>(r)] < 0) {
          root_label[static_cast<size_t>(r)] = labels[i];
        } else {
          pairs.emplace_back(root_label[static_cast<size_t>(r)], labels[i]);
          root_label[static_cast<size_t>(r)] = -1;
        }
      }
      Pairing tau = Pairing::from_canonical(pairs);
      exponent_of_d += segment_cycles_oracle(tau, *sigma, labels);
    }
    if (exponent_of_d < 0) {
      // only the empty diagram reaches here
      acc += LaurentPoly::one();
      continue;
    }
    const long alpha = n - 2 * static_cast<long>(__builtin_popcountll(state));
    acc += pow_d(exponent_of_d).shifted(alpha);
  }
  return acc;
}

}  // namespace

LaurentPoly serial_bracket(const Diagram& d) {
  if (!d.is_closed())
    throw Error(errc::open_diagram, "serial_bracket needs a closed diagram; use serial_bracket_sigma");
  return serial_state_sum(d, nullptr);
}

LaurentPoly serial_bracket_sigma(const Diagram& d, const Pairing& sigma) {
  return serial_state_sum(d, &sigma);
}

LaurentPoly serial_jones(const Diagram& d, const std::optional<Pairing>& sigma) {
  LaurentPoly bracket;
  if (d.is_closed()) {
    bracket = sigma.has_value() && !sigma->empty() ? serial_bracket_sigma(d, *sigma)
                                                   : serial_bracket(d);
  } else {
    if (!sigma.has_value())
      throw Error(errc::missing_closure, "open diagram needs a closure permutation");
    bracket = serial_bracket_sigma(d, *sigma);
  }
  return neg_a3_pow(-d.writhe()) * bracket;
}

mpz_class catalan(long c) {
  if (c < 0) throw Error(errc::invalid_config, "catalan index must be nonnegative");
  mpz_class v = 1;
  for (long k = 0; k < c; ++k) {
    v *= 2 * (2 * k + 1);
    mpz_class divisor = k + 2;
    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), divisor.get_mpz_t());
  }
  return v;
}

Diagram line_arrangement(int c) {
  if (c < 1) throw Error(errc::invalid_config, "need at least one line");
  if (c == 1) {
    DiagramBuilder b(0);
    b.add_free_strand(1, 2);
    return b.build();
  }
  // Lines y = s_i x + b_i with slopes s_i = i and staggered intercepts; all
  // crossings are distinct and positive, line i over line j for i < j.
  std::vector<double> slope(static_cast<size_t>(c)), icept(static_cast<size_t>(c));
  for (int i = 0; i < c; ++i) {
    slope[static_cast<size_t>(i)] = i;
    icept[static_cast<size_t>(i)] = static_cast<double>(i) * i * 0.37;
  }
  struct Hit {
    double x;
    int crossing;
    bool over;
  };
  std::vector<std::vector<Hit>> along(static_cast<size_t>(c));
  std::vector<std::pair<int, int>> crossing_lines;
  for (int i = 0; i < c; ++i) {
    for (int j = i + 1; j < c; ++j) {
      double x = (icept[static_cast<size_t>(j)] - icept[static_cast<size_t>(i)]) /
                 (slope[static_cast<size_t>(i)] - slope[static_cast<size_t>(j)]);
      int id = static_cast<int>(crossing_lines.size());
      crossing_lines.emplace_back(i, j);
      along[static_cast<size_t>(i)].push_back({x, id, true});
      along[static_cast<size_t>(j)].push_back({x, id, false});
    }
  }
  DiagramBuilder b(static_cast<int>(crossing_lines.size()));
  int next_label = 1;
  for (int i = 0; i < c; ++i) {
    auto& hits = along[static_cast<size_t>(i)];
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& h) { return a.x < h.x; });
    // all crossings positive: over enters slot 3 and leaves slot 1
    int prev_c = -1;
    int prev_out = -1;
    int foot = next_label++;
    for (const Hit& h : hits) {
      int in_slot = h.over ? 3 : 0;
      int out_slot = h.over ? 1 : 2;
      if (prev_c < 0) {
        b.attach_endpoint(h.crossing, in_slot, foot);
      } else {
        b.connect(prev_c, prev_out, h.crossing, in_slot);
      }
      prev_c = h.crossing;
      prev_out = out_slot;
    }
    int head = next_label++;
    b.attach_endpoint(prev_c, prev_out, head);
  }
  return b.build_with_signs(std::vector<int8_t>(crossing_lines.size(), 1));
}

}  // namespace parajones
