#include "parajones/pairing.hpp"

#include <algorithm>

#include "parajones/error.hpp"

namespace parajones {

Pairing Pairing::from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  Pairing p;
  for (const auto& [a, b] : pairs) p.add(a, b);
  return p;
}

Pairing Pairing::from_canonical(std::vector<std::pair<int, int>> pairs) {
  Pairing p;
  p.pairs_ = std::move(pairs);
  return p;
}

void Pairing::add(int a, int b) {
  if (a == b) throw Error(errc::label_collision, "transposition must move its labels");
  if (a > b) std::swap(a, b);
  if (contains(a) || contains(b))
    throw Error(errc::label_collision, "label already paired");
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::make_pair(a, b));
  pairs_.insert(it, {a, b});
}

std::vector<int> Pairing::domain() const {
  std::vector<int> out;
  out.reserve(pairs_.size() * 2);
  for (const auto& [a, b] : pairs_) {
    out.push_back(a);
    out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Pairing::contains(int label) const {
  for (const auto& [a, b] : pairs_)
    if (a == label || b == label) return true;
  return false;
}

int Pairing::apply(int label) const {
  for (const auto& [a, b] : pairs_) {
    if (a == label) return b;
    if (b == label) return a;
  }
  throw Error(errc::domain_mismatch, "label not moved by this pairing");
}

Pairing Pairing::united(const Pairing& other) const {
  Pairing out = *this;
  for (const auto& [a, b] : other.pairs_) out.add(a, b);
  return out;
}

}  // namespace parajones
