#include "parajones/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "parajones/error.hpp"

namespace parajones {

namespace {

// Dense index of each label plus validation that tau and sigma are
// fixed-point-free involutions exactly on the label set.
std::unordered_map<int, int> index_labels(const Pairing& tau, const Pairing& sigma,
                                          const std::vector<int>& labels) {
  std::unordered_map<int, int> idx;
  idx.reserve(labels.size());
  for (int l : labels) {
    if (!idx.emplace(l, static_cast<int>(idx.size())).second)
      throw Error(errc::domain_mismatch, "duplicate label in E");
  }
  for (const Pairing* p : {&tau, &sigma}) {
    std::size_t touched = 0;
    for (const auto& [a, b] : p->pairs()) {
      if (!idx.count(a) || !idx.count(b))
        throw Error(errc::domain_mismatch, "pairing moves a label outside E");
      touched += 2;
    }
    if (touched != labels.size())
      throw Error(errc::domain_mismatch, "pairing is not fixed-point-free on E");
  }
  return idx;
}

}  // namespace

CycleDecomposition compose_to_cycles(const Pairing& tau, const Pairing& sigma,
                                     const std::vector<int>& labels) {
  auto idx = index_labels(tau, sigma, labels);
  const int n = static_cast<int>(labels.size());
  // product sigma∘tau as a dense permutation
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = idx.at(sigma.apply(tau.apply(labels[i])));

  CycleDecomposition out;
  std::vector<char> seen(n, 0);
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<int> cycle;
    int j = i;
    while (!seen[j]) {
      seen[j] = 1;
      cycle.push_back(labels[j]);
      j = perm[j];
    }
    out.order = std::lcm(out.order, static_cast<long>(cycle.size()));
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

long segment_cycles_formula(const Pairing& tau, const Pairing& sigma,
                            const std::vector<int>& labels) {
  if (labels.empty()) {
    index_labels(tau, sigma, labels);
    return 0;
  }
  CycleDecomposition dec = compose_to_cycles(tau, sigma, labels);
  const long two_n = static_cast<long>(labels.size());
  const long order = dec.order;
  long acc = two_n;
  for (long p = 1; p < order; ++p) {
    for (const auto& cycle : dec.cycles) {
      const long len = static_cast<long>(cycle.size());
      if (p % len == 0) acc += len;
    }
  }
  return acc / (2 * order);
}

long segment_cycles_oracle(const Pairing& tau, const Pairing& sigma,
                           const std::vector<int>& labels) {
  auto idx = index_labels(tau, sigma, labels);
  const int n = static_cast<int>(labels.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const Pairing* p : {&tau, &sigma}) {
    for (const auto& [a, b] : p->pairs()) {
      int ra = find(idx.at(a));
      int rb = find(idx.at(b));
      if (ra != rb) parent[ra] = rb;
    }
  }
  long orbits = 0;
  for (int i = 0; i < n; ++i)
    if (find(i) == i) ++orbits;
  return orbits;
}

}  // namespace parajones
