#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace parajones {

/// A fixed-point-free involution on integer labels, kept as a sorted list of
/// unordered transpositions. This single representation serves strand
/// permutations, state permutations, closure permutations and gluing
/// permutations. Canonical storage (lo < hi, sorted by lo) makes equality
/// and hashing structural.
class Pairing {
 public:
  Pairing() = default;
  static Pairing from_pairs(const std::vector<std::pair<int, int>>& pairs);
  /// Fast path for callers that already hold canonical pairs (each lo < hi,
  /// sorted by lo, labels disjoint). Not validated.
  static Pairing from_canonical(std::vector<std::pair<int, int>> pairs);

  /// Insert a transposition. Throws Error(errc::label_collision) when a
  /// label is already paired or a == b.
  void add(int a, int b);

  bool empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  /// Sorted list of all labels moved by the involution.
  std::vector<int> domain() const;

  bool contains(int label) const;
  /// Partner of a label. Throws Error(errc::domain_mismatch) if unknown.
  int apply(int label) const;

  /// Disjoint union. Throws Error(errc::label_collision) on overlap.
  Pairing united(const Pairing& other) const;

  bool operator==(const Pairing& rhs) const { return pairs_ == rhs.pairs_; }
  bool operator!=(const Pairing& rhs) const { return pairs_ != rhs.pairs_; }
  bool operator<(const Pairing& rhs) const { return pairs_ < rhs.pairs_; }

 private:
  std::vector<std::pair<int, int>> pairs_;
};

struct PairingHash {
  std::size_t operator()(const Pairing& p) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& [a, b] : p.pairs()) {
      h ^= static_cast<std::size_t>(a) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h ^= static_cast<std::size_t>(b) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace parajones
