#include "parajones/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "parajones/error.hpp"

namespace parajones {

namespace {

// Strand passage within a crossing: under 0<->2, over 1<->3.
inline int passage(int slot) { return slot ^ 2; }

}  // namespace

long Diagram::writhe() const {
  long w = 0;
  for (int8_t s : sign_) w += s;
  return w;
}

Diagram Diagram::mirror() const {
  DiagramBuilder b(crossing_count());
  // Switching over/under re-frames each crossing's slots: the new incoming
  // under is the old over-in slot, so slots rotate by +1 (sign +1) or +3
  // (sign -1) and every sign flips.
  auto new_slot = [&](int c, int s) {
    return sign_[static_cast<size_t>(c)] > 0 ? (s + 1) % 4 : (s + 3) % 4;
  };
  for (int c = 0; c < crossing_count(); ++c) {
    for (int s = 0; s < 4; ++s) {
      const Attach& at = conn_[static_cast<size_t>(c)][static_cast<size_t>(s)];
      if (at.is_endpoint()) {
        b.attach_endpoint(c, new_slot(c, s), at.endpoint);
      } else if (std::make_pair(c, s) <
                 std::make_pair(at.peer_crossing, at.peer_slot)) {
        b.connect(c, new_slot(c, s), at.peer_crossing, new_slot(at.peer_crossing, at.peer_slot));
      }
    }
  }
  for (const auto& [foot, head] : free_strands_) b.add_free_strand(foot, head);
  b.add_free_loops(free_loops_);
  std::vector<int8_t> signs(sign_.size());
  for (size_t i = 0; i < sign_.size(); ++i) signs[i] = static_cast<int8_t>(-sign_[i]);
  return b.build_with_signs(signs);
}

DiagramBuilder::DiagramBuilder(int crossings)
    : n_(crossings),
      conn_(static_cast<size_t>(crossings)),
      used_(static_cast<size_t>(crossings), {false, false, false, false}) {}

void DiagramBuilder::connect(int c1, int s1, int c2, int s2) {
  if (c1 == c2 && s1 == s2) throw Error(errc::internal, "slot connected to itself");
  for (auto [c, s] : {std::pair{c1, s1}, std::pair{c2, s2}}) {
    if (c < 0 || c >= n_ || s < 0 || s > 3) throw Error(errc::internal, "slot out of range");
    if (used_[static_cast<size_t>(c)][static_cast<size_t>(s)])
      throw Error(errc::inconsistent_arc, "slot already attached");
    used_[static_cast<size_t>(c)][static_cast<size_t>(s)] = true;
  }
  conn_[static_cast<size_t>(c1)][static_cast<size_t>(s1)] = Attach{c2, s2, 0};
  conn_[static_cast<size_t>(c2)][static_cast<size_t>(s2)] = Attach{c1, s1, 0};
}

void DiagramBuilder::attach_endpoint(int c, int s, int label) {
  if (c < 0 || c >= n_ || s < 0 || s > 3) throw Error(errc::internal, "slot out of range");
  if (used_[static_cast<size_t>(c)][static_cast<size_t>(s)])
    throw Error(errc::inconsistent_arc, "slot already attached");
  used_[static_cast<size_t>(c)][static_cast<size_t>(s)] = true;
  conn_[static_cast<size_t>(c)][static_cast<size_t>(s)] = Attach{kNoCrossing, 0, label};
  endpoints_.push_back(label);
}

void DiagramBuilder::add_free_strand(int foot, int head) {
  free_strands_.emplace_back(foot, head);
  endpoints_.push_back(foot);
  endpoints_.push_back(head);
}

void DiagramBuilder::add_free_loops(int count) { free_loops_ += count; }

void DiagramBuilder::validate() const {
  for (int c = 0; c < n_; ++c)
    for (int s = 0; s < 4; ++s)
      if (!used_[static_cast<size_t>(c)][static_cast<size_t>(s)])
        throw Error(errc::inconsistent_arc, "crossing slot left unattached");
  std::vector<int> labels = endpoints_;
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw Error(errc::label_collision, "duplicate endpoint label");
}

// Directions: 0 unknown, 1 = arc enters the crossing here, 2 = arc leaves.
std::vector<int8_t> DiagramBuilder::orient() const {
  std::vector<std::array<int8_t, 4>> dir(static_cast<size_t>(n_), {0, 0, 0, 0});
  std::vector<std::pair<int, int>> work;

  auto set_dir = [&](int c, int s, int8_t v) {
    int8_t& cur = dir[static_cast<size_t>(c)][static_cast<size_t>(s)];
    if (cur == v) return;
    if (cur != 0)
      throw Error(errc::unorientable_diagram, "conflicting strand directions");
    cur = v;
    work.emplace_back(c, s);
  };

  for (int c = 0; c < n_; ++c) {
    set_dir(c, 0, 1);
    set_dir(c, 2, 2);
  }

  auto drain = [&] {
    while (!work.empty()) {
      auto [c, s] = work.back();
      work.pop_back();
      int8_t v = dir[static_cast<size_t>(c)][static_cast<size_t>(s)];
      // across the arc: head on one side, tail on the other
      const Attach& at = conn_[static_cast<size_t>(c)][static_cast<size_t>(s)];
      if (!at.is_endpoint())
        set_dir(at.peer_crossing, at.peer_slot, static_cast<int8_t>(3 - v));
      // through the over passage
      if (s == 1 || s == 3) set_dir(c, passage(s), static_cast<int8_t>(3 - v));
    }
  };
  drain();

  // Components that never pass under anything are left free; pick a
  // direction and propagate.
  for (int c = 0; c < n_; ++c) {
    if (dir[static_cast<size_t>(c)][3] == 0) {
      set_dir(c, 3, 1);
      drain();
    }
  }

  std::vector<int8_t> signs(static_cast<size_t>(n_));
  for (int c = 0; c < n_; ++c)
    signs[static_cast<size_t>(c)] = dir[static_cast<size_t>(c)][3] == 1 ? 1 : -1;
  return signs;
}

Diagram DiagramBuilder::finish(std::vector<int8_t> signs) {
  Diagram d;
  d.conn_ = conn_;
  d.sign_ = std::move(signs);
  d.endpoints_ = endpoints_;
  d.free_strands_ = free_strands_;
  d.free_loops_ = free_loops_;

  // Strand permutation by traversal, marking visited slots so the leftover
  // cycles count the closed components.
  std::vector<std::array<bool, 4>> visited(static_cast<size_t>(n_), {false, false, false, false});
  auto walk = [&](int c, int s) {
    // enter crossing c at slot s, follow the strand to an endpoint
    for (;;) {
      visited[static_cast<size_t>(c)][static_cast<size_t>(s)] = true;
      int out = passage(s);
      visited[static_cast<size_t>(c)][static_cast<size_t>(out)] = true;
      const Attach& at = d.conn_[static_cast<size_t>(c)][static_cast<size_t>(out)];
      if (at.is_endpoint()) return at.endpoint;
      c = at.peer_crossing;
      s = at.peer_slot;
    }
  };

  Pairing strand;
  std::vector<char> paired;  // labels already consumed, tracked via pairing
  for (const auto& [foot, head] : d.free_strands_) strand.add(foot, head);
  for (int c = 0; c < n_; ++c) {
    for (int s = 0; s < 4; ++s) {
      const Attach& at = d.conn_[static_cast<size_t>(c)][static_cast<size_t>(s)];
      if (at.is_endpoint() && !strand.contains(at.endpoint)) {
        int partner = walk(c, s);
        strand.add(at.endpoint, partner);
      }
    }
  }
  d.strand_perm_ = std::move(strand);

  int cycles = 0;
  for (int c = 0; c < n_; ++c) {
    for (int s = 0; s < 4; ++s) {
      if (visited[static_cast<size_t>(c)][static_cast<size_t>(s)]) continue;
      ++cycles;
      int cc = c;
      int ss = s;
      while (!visited[static_cast<size_t>(cc)][static_cast<size_t>(ss)]) {
        visited[static_cast<size_t>(cc)][static_cast<size_t>(ss)] = true;
        int out = passage(ss);
        visited[static_cast<size_t>(cc)][static_cast<size_t>(out)] = true;
        const Attach& at = d.conn_[static_cast<size_t>(cc)][static_cast<size_t>(out)];
        cc = at.peer_crossing;
        ss = at.peer_slot;
      }
    }
  }
  d.closed_components_ = cycles + d.free_loops_;
  return d;
}

Diagram DiagramBuilder::build() {
  validate();
  return finish(orient());
}

Diagram DiagramBuilder::build_with_signs(const std::vector<int8_t>& signs) {
  validate();
  if (static_cast<int>(signs.size()) != n_)
    throw Error(errc::internal, "sign count does not match crossings");
  return finish(signs);
}

namespace {

std::vector<std::string> tokenize_line(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::vector<std::string> toks;
  std::istringstream is(body);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

long parse_int(const std::string& tok, const char* what) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw Error(errc::parse_error, std::string("expected integer ") + what + ", got '" + tok + "'");
  }
  if (pos != tok.size())
    throw Error(errc::parse_error, std::string("expected integer ") + what + ", got '" + tok + "'");
  return v;
}

}  // namespace

Diagram parse_pd(const std::string& text) {
  std::vector<std::array<long, 4>> crossings;
  std::vector<long> endpoint_directives;
  int loops = 0;

  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto toks = tokenize_line(line);
    if (toks.empty()) continue;
    std::string head = toks[0];
    for (auto& ch : head) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (head == "x") {
      if (toks.size() != 5) throw Error(errc::parse_error, "crossing line needs 4 arc labels");
      crossings.push_back({parse_int(toks[1], "arc"), parse_int(toks[2], "arc"),
                           parse_int(toks[3], "arc"), parse_int(toks[4], "arc")});
    } else if (head == "loop") {
      if (toks.size() != 1) throw Error(errc::parse_error, "loop line takes no arguments");
      ++loops;
    } else if (head == "endpoint") {
      if (toks.size() != 2) throw Error(errc::parse_error, "endpoint line needs one arc label");
      endpoint_directives.push_back(parse_int(toks[1], "arc"));
    } else {
      throw Error(errc::parse_error, "unknown directive '" + toks[0] + "'");
    }
  }

  // occurrences of each arc label in scan order
  std::map<long, std::vector<std::pair<int, int>>> occ;
  for (size_t c = 0; c < crossings.size(); ++c)
    for (int s = 0; s < 4; ++s) occ[crossings[c][static_cast<size_t>(s)]].push_back(
        {static_cast<int>(c), s});
  for (const auto& [arc, places] : occ)
    if (places.size() > 2)
      throw Error(errc::inconsistent_arc,
                  "arc " + std::to_string(arc) + " used " + std::to_string(places.size()) + " times");
  for (long arc : endpoint_directives) {
    auto it = occ.find(arc);
    if (it == occ.end() || it->second.size() != 1)
      throw Error(errc::inconsistent_arc,
                  "endpoint directive for arc " + std::to_string(arc) + " not used exactly once");
  }

  DiagramBuilder b(static_cast<int>(crossings.size()));
  int next_label = 1;
  std::map<long, int> endpoint_of_arc;
  for (size_t c = 0; c < crossings.size(); ++c) {
    for (int s = 0; s < 4; ++s) {
      long arc = crossings[c][static_cast<size_t>(s)];
      const auto& places = occ.at(arc);
      if (places.size() == 1) {
        b.attach_endpoint(static_cast<int>(c), s, next_label++);
      } else if (places[0] == std::make_pair(static_cast<int>(c), s)) {
        b.connect(places[0].first, places[0].second, places[1].first, places[1].second);
      }
    }
  }
  b.add_free_loops(loops);
  return b.build();
}

namespace {

struct GaussPassage {
  int in_arc = -1;
  int out_arc = -1;
};

struct GaussCrossing {
  GaussPassage over, under;
  int sign = 0;
  bool seen_over = false, seen_under = false;
};

}  // namespace

Diagram parse_gauss(const std::string& text) {
  // components separated by '|'; a component starting with the token "open"
  // is an open strand (foot first)
  std::vector<std::vector<std::string>> components(1);
  {
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> all;
    while (std::getline(is, line))
      for (const auto& t : tokenize_line(line)) all.push_back(t);
    for (const auto& t : all) {
      if (t == "|")
        components.emplace_back();
      else
        components.back().push_back(t);
    }
  }

  std::map<long, GaussCrossing> reg;
  struct Plug {
    bool is_endpoint;
    long crossing;
    bool over;
    bool incoming;
    int endpoint;
  };

  int next_endpoint = 1;
  int free_loops = 0;
  std::vector<std::pair<int, int>> free_strands;
  struct ArcRec {
    Plug tail, head;
  };
  std::vector<ArcRec> arc_recs;

  for (auto& comp : components) {
    bool open = false;
    size_t start = 0;
    if (!comp.empty() && comp[0] == "open") {
      open = true;
      start = 1;
    }
    std::vector<std::tuple<bool, long, int>> passes;  // (is_over, id, sign)
    for (size_t i = start; i < comp.size(); ++i) {
      const std::string& t = comp[i];
      if (t.size() < 3) throw Error(errc::parse_error, "bad gauss token '" + t + "'");
      char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
      if (kind != 'O' && kind != 'U') throw Error(errc::parse_error, "bad gauss token '" + t + "'");
      char sc = t.back();
      if (sc != '+' && sc != '-') throw Error(errc::parse_error, "gauss token needs a sign: '" + t + "'");
      long id = parse_int(t.substr(1, t.size() - 2), "crossing label");
      passes.emplace_back(kind == 'O', id, sc == '+' ? 1 : -1);
    }

    const size_t k = passes.size();
    if (k == 0) {
      if (open) {
        int foot = next_endpoint++;
        int head = next_endpoint++;
        free_strands.emplace_back(foot, head);
      } else {
        ++free_loops;
      }
      continue;
    }

    // register passages and create arcs between consecutive ones
    for (size_t i = 0; i < k; ++i) {
      auto [is_over, id, sgn] = passes[i];
      GaussCrossing& gc = reg[id];
      if (gc.sign == 0) gc.sign = sgn;
      if (gc.sign != sgn)
        throw Error(errc::inconsistent_crossing,
                    "crossing " + std::to_string(id) + " has conflicting signs");
      bool& seen = is_over ? gc.seen_over : gc.seen_under;
      if (seen)
        throw Error(errc::inconsistent_crossing,
                    "crossing " + std::to_string(id) + " passed " + (is_over ? "over" : "under") +
                        " twice");
      seen = true;
    }

    const size_t n_arcs = open ? k + 1 : k;
    int first_arc = static_cast<int>(arc_recs.size());
    arc_recs.resize(arc_recs.size() + n_arcs);
    auto plug_of_pass = [&](size_t i, bool incoming) {
      auto [is_over, id, sgn] = passes[i];
      (void)sgn;
      return Plug{false, id, is_over, incoming, 0};
    };
    if (open) {
      int foot = next_endpoint;
      // arcs: 0: foot->pass0, i: pass(i-1)->pass(i), k: pass(k-1)->head
      arc_recs[static_cast<size_t>(first_arc)].tail = Plug{true, 0, false, false, foot};
      next_endpoint++;
      for (size_t i = 0; i < k; ++i) {
        arc_recs[static_cast<size_t>(first_arc) + i].head = plug_of_pass(i, true);
        arc_recs[static_cast<size_t>(first_arc) + i + 1].tail = plug_of_pass(i, false);
      }
      int head = next_endpoint++;
      arc_recs[static_cast<size_t>(first_arc) + k].head = Plug{true, 0, false, false, head};
    } else {
      for (size_t i = 0; i < k; ++i) {
        arc_recs[static_cast<size_t>(first_arc) + i].head = plug_of_pass(i, true);
        arc_recs[static_cast<size_t>(first_arc) + (i + 1) % k].tail = plug_of_pass(i, false);
      }
    }
  }

  for (const auto& [id, gc] : reg) {
    if (!gc.seen_over || !gc.seen_under)
      throw Error(errc::inconsistent_crossing,
                  "crossing " + std::to_string(id) + " appears only once");
  }

  // dense crossing indices in label order
  std::map<long, int> index;
  std::vector<int8_t> signs;
  for (const auto& [id, gc] : reg) {
    index[id] = static_cast<int>(index.size());
    signs.push_back(static_cast<int8_t>(gc.sign));
  }

  DiagramBuilder b(static_cast<int>(reg.size()));
  auto slot_of_plug = [&](const Plug& p) -> std::pair<int, int> {
    const GaussCrossing& gc = reg.at(p.crossing);
    int slot;
    if (!p.over) {
      slot = p.incoming ? 0 : 2;
    } else if (gc.sign > 0) {
      slot = p.incoming ? 3 : 1;
    } else {
      slot = p.incoming ? 1 : 3;
    }
    return {index.at(p.crossing), slot};
  };
  for (const auto& arc : arc_recs) {
    if (arc.tail.is_endpoint && arc.head.is_endpoint)
      throw Error(errc::internal, "unexpected free arc");
    if (arc.tail.is_endpoint) {
      auto [c, s] = slot_of_plug(arc.head);
      b.attach_endpoint(c, s, arc.tail.endpoint);
    } else if (arc.head.is_endpoint) {
      auto [c, s] = slot_of_plug(arc.tail);
      b.attach_endpoint(c, s, arc.head.endpoint);
    } else {
      auto [c1, s1] = slot_of_plug(arc.tail);
      auto [c2, s2] = slot_of_plug(arc.head);
      b.connect(c1, s1, c2, s2);
    }
  }
  for (auto [foot, head] : free_strands) b.add_free_strand(foot, head);
  b.add_free_loops(free_loops);
  // Slot layout already encodes the declared signs and a consistent
  // traversal orientation, so the signs are taken as given.
  return b.build_with_signs(signs);
}

std::string emit_pd(const Diagram& d) {
  if (!d.free_strands().empty())
    throw Error(errc::invalid_config, "free open strands are not representable in PD text");
  const int n = d.crossing_count();
  std::vector<std::array<int, 4>> arc_no(static_cast<size_t>(n), {0, 0, 0, 0});
  int next = 1;
  std::vector<int> endpoint_arcs;
  for (int c = 0; c < n; ++c) {
    for (int s = 0; s < 4; ++s) {
      if (arc_no[static_cast<size_t>(c)][static_cast<size_t>(s)] != 0) continue;
      const Attach& at = d.slots(c)[static_cast<size_t>(s)];
      arc_no[static_cast<size_t>(c)][static_cast<size_t>(s)] = next;
      if (at.is_endpoint()) {
        endpoint_arcs.push_back(next);
      } else {
        arc_no[static_cast<size_t>(at.peer_crossing)][static_cast<size_t>(at.peer_slot)] = next;
      }
      ++next;
    }
  }
  std::ostringstream os;
  for (int c = 0; c < n; ++c) {
    os << "X";
    for (int s = 0; s < 4; ++s) os << " " << arc_no[static_cast<size_t>(c)][static_cast<size_t>(s)];
    os << "\n";
  }
  for (int arc : endpoint_arcs) os << "endpoint " << arc << "\n";
  for (int i = 0; i < d.free_loops(); ++i) os << "loop\n";
  return os.str();
}

SplitResult split_pair(const Diagram& d, const std::vector<int>& subset, LabelAllocator& alloc) {
  const int n = d.crossing_count();
  std::vector<char> in_set(static_cast<size_t>(n), 0);
  for (int c : subset) {
    if (c < 0 || c >= n) throw Error(errc::invalid_config, "crossing id out of range");
    in_set[static_cast<size_t>(c)] = 1;
  }
  std::vector<int> new_idx(static_cast<size_t>(n), -1);
  int n_in = 0;
  int n_out = 0;
  for (int c = 0; c < n; ++c) new_idx[static_cast<size_t>(c)] = in_set[static_cast<size_t>(c)] ? n_in++ : n_out++;
  const bool all_inside = n_out == 0;

  DiagramBuilder bin(n_in);
  DiagramBuilder bout(n_out);
  std::vector<int8_t> signs_in, signs_out;
  SplitResult res;

  auto builder_of = [&](int c) -> DiagramBuilder& {
    return in_set[static_cast<size_t>(c)] ? bin : bout;
  };

  for (int c = 0; c < n; ++c) {
    (in_set[static_cast<size_t>(c)] ? signs_in : signs_out)
        .push_back(static_cast<int8_t>(d.sign(c)));
    for (int s = 0; s < 4; ++s) {
      const Attach& at = d.slots(c)[static_cast<size_t>(s)];
      if (at.is_endpoint()) {
        builder_of(c).attach_endpoint(new_idx[static_cast<size_t>(c)], s, at.endpoint);
        continue;
      }
      const bool same_side =
          in_set[static_cast<size_t>(c)] == in_set[static_cast<size_t>(at.peer_crossing)];
      if (std::make_pair(c, s) > std::make_pair(at.peer_crossing, at.peer_slot)) continue;
      if (same_side) {
        builder_of(c).connect(new_idx[static_cast<size_t>(c)], s,
                              new_idx[static_cast<size_t>(at.peer_crossing)], at.peer_slot);
      } else {
        // cut: one fresh label per side, inside label first
        int label_here = alloc.fresh();
        int label_peer = alloc.fresh();
        builder_of(c).attach_endpoint(new_idx[static_cast<size_t>(c)], s, label_here);
        builder_of(at.peer_crossing)
            .attach_endpoint(new_idx[static_cast<size_t>(at.peer_crossing)], at.peer_slot,
                             label_peer);
        if (in_set[static_cast<size_t>(c)])
          res.transpositions.emplace_back(label_here, label_peer);
        else
          res.transpositions.emplace_back(label_peer, label_here);
      }
    }
  }

  DiagramBuilder& free_home = all_inside ? bin : bout;
  for (const auto& [foot, head] : d.free_strands()) free_home.add_free_strand(foot, head);
  free_home.add_free_loops(d.free_loops());

  res.inside = bin.build_with_signs(signs_in);
  res.outside = bout.build_with_signs(signs_out);
  return res;
}

std::pair<Diagram, std::vector<std::pair<int, int>>> split_piece(const Diagram& d,
                                                                 const std::vector<int>& subset,
                                                                 LabelAllocator& alloc) {
  SplitResult r = split_pair(d, subset, alloc);
  return {std::move(r.inside), std::move(r.transpositions)};
}

int next_free_label(const Diagram& d) {
  int mx = 0;
  for (int e : d.endpoints()) mx = std::max(mx, e);
  return mx + 1;
}

std::string torus_pd(int q) {
  if (q < 1) throw Error(errc::invalid_config, "torus braid needs at least one crossing");
  std::ostringstream os;
  for (int i = 0; i < q; ++i) {
    int j = (i + 1) % q;
    os << "X " << 2 * i + 2 << " " << 2 * j + 2 << " " << 2 * j + 1 << " " << 2 * i + 1 << "\n";
  }
  return os.str();
}

}  // namespace parajones
