#pragma once

#include <vector>

#include "parajones/pairing.hpp"

namespace parajones {

/// Cycle decomposition of the product sigma*tau (tau applied first),
/// including fixed points as 1-cycles.
struct CycleDecomposition {
  std::vector<std::vector<int>> cycles;
  long order = 1;  // lcm of cycle lengths
};

/// Cycles of sigma∘tau as a permutation of E. Both pairings must be
/// fixed-point-free involutions exactly on E (Error(errc::domain_mismatch)
/// otherwise).
CycleDecomposition compose_to_cycles(const Pairing& tau, const Pairing& sigma,
                                     const std::vector<int>& labels);

/// Number of segment cycles |E/<tau,sigma>| via the closed-form dihedral
/// orbit count over the cycle decomposition of sigma*tau.
long segment_cycles_formula(const Pairing& tau, const Pairing& sigma,
                            const std::vector<int>& labels);

/// Same count via direct orbit enumeration (union-find over the
/// transpositions of tau and sigma). This is the path used by the
/// recombination hot loop; the formula above is the reference.
long segment_cycles_oracle(const Pairing& tau, const Pairing& sigma,
                           const std::vector<int>& labels);

}  // namespace parajones
