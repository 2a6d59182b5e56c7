#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parajones/pairing.hpp"

namespace parajones {

inline constexpr int kNoCrossing = -1;

/// Where a crossing slot attaches: the peer slot of an interior arc, or an
/// open endpoint label.
struct Attach {
  int peer_crossing = kNoCrossing;
  int peer_slot = 0;
  int endpoint = 0;

  bool is_endpoint() const { return peer_crossing == kNoCrossing; }
};

/// Issues globally unique endpoint labels. Owned by the subdivision driver
/// so that gluing permutations live on the union of all pieces' endpoints.
class LabelAllocator {
 public:
  explicit LabelAllocator(int first) : next_(first) {}
  int fresh() { return next_++; }
  int peek() const { return next_; }

 private:
  int next_;
};

/// A link/linkoid diagram.
///
/// Slots of a crossing are numbered counterclockwise 0..3 starting at the
/// incoming under-strand: 0 = under in, 2 = under out, {1,3} = the over
/// strand. sign +1 means the over strand runs slot 3 -> slot 1.
/// Crossing-free components are tracked separately: free_loops by count,
/// free open strands as endpoint pairs. Diagrams are immutable once built.
class Diagram {
 public:
  int crossing_count() const { return static_cast<int>(conn_.size()); }
  const std::array<Attach, 4>& slots(int c) const { return conn_[static_cast<size_t>(c)]; }
  int sign(int c) const { return sign_[static_cast<size_t>(c)]; }
  long writhe() const;

  const std::vector<int>& endpoints() const { return endpoints_; }
  const Pairing& strand_permutation() const { return strand_perm_; }
  const std::vector<std::pair<int, int>>& free_strands() const { return free_strands_; }
  int free_loops() const { return free_loops_; }
  int closed_component_count() const { return closed_components_; }
  int open_component_count() const { return static_cast<int>(endpoints_.size()) / 2; }
  bool is_closed() const { return endpoints_.empty(); }

  Diagram mirror() const;

 private:
  friend class DiagramBuilder;
  std::vector<std::array<Attach, 4>> conn_;
  std::vector<int8_t> sign_;
  std::vector<int> endpoints_;
  std::vector<std::pair<int, int>> free_strands_;
  int free_loops_ = 0;
  int closed_components_ = 0;
  Pairing strand_perm_;
};

/// Assembles a Diagram from slot connectivity. build() runs the orientation
/// pass (deriving crossing signs); build_with_signs() trusts the caller's
/// signs, which is how pieces inherit the signs of their parent diagram.
class DiagramBuilder {
 public:
  explicit DiagramBuilder(int crossings);

  void connect(int c1, int s1, int c2, int s2);
  void attach_endpoint(int c, int s, int label);
  void add_free_strand(int foot, int head);
  void add_free_loops(int count);

  Diagram build();
  Diagram build_with_signs(const std::vector<int8_t>& signs);

 private:
  Diagram finish(std::vector<int8_t> signs);
  void validate() const;
  std::vector<int8_t> orient() const;

  int n_;
  std::vector<std::array<Attach, 4>> conn_;
  std::vector<std::array<bool, 4>> used_;
  std::vector<int> endpoints_;
  std::vector<std::pair<int, int>> free_strands_;
  int free_loops_ = 0;
};

Diagram parse_pd(const std::string& text);
Diagram parse_gauss(const std::string& text);

/// PD text for a diagram without free strands (arcs renumbered from 1 in
/// scan order; free loops become "loop" lines).
std::string emit_pd(const Diagram& d);

struct SplitResult {
  Diagram inside;
  Diagram outside;
  /// (label on the inside piece, label on the outside piece), one per arc cut.
  std::vector<std::pair<int, int>> transpositions;
};

/// Cut the diagram along the boundary of a crossing subset. Every arc with
/// exactly one end in the subset is cut at one interior point, producing a
/// fresh endpoint on each side recorded as a gluing transposition.
/// Crossing-free components ride with the outside piece unless the subset
/// is the whole diagram.
SplitResult split_pair(const Diagram& d, const std::vector<int>& subset, LabelAllocator& alloc);

std::pair<Diagram, std::vector<std::pair<int, int>>> split_piece(const Diagram& d,
                                                                 const std::vector<int>& subset,
                                                                 LabelAllocator& alloc);

/// First endpoint label not used by the diagram (safe start for a
/// LabelAllocator).
int next_free_label(const Diagram& d);

/// PD code of the (2, q) torus link as a braid closure; q >= 1 crossings,
/// all positive (right-handed trefoil at q = 3).
std::string torus_pd(int q);

}  // namespace parajones
