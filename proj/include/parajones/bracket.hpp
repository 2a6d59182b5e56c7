#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "parajones/diagram.hpp"
#include "parajones/laurent.hpp"
#include "parajones/pairing.hpp"

namespace parajones {

/// Grouped bracket states of one (possibly glued) piece: for every distinct
/// state permutation on the piece's open endpoints, the accumulated
/// coefficient sum A^alpha * d^{|S|} over the states that induce it. Loop
/// factors are absorbed into the coefficients as powers of d; the global
/// "-1" normalization is applied exactly once at final assembly.
struct StateTable {
  std::vector<int> endpoints;  // sorted labels
  std::unordered_map<Pairing, LaurentPoly, PairingHash> rows;
  long piece_writhe = 0;
};

/// Expand all 2^n smoothings of a piece, grouping by distinct state
/// permutation. The state space is range-partitioned across workers and the
/// partial tables merged by row-key addition, so the result does not depend
/// on the worker count.
StateTable expand_piece(const Diagram& piece, int workers = 1);

/// Merge rhs into lhs by row-key addition (endpoints must match).
void merge_tables(StateTable& lhs, StateTable&& rhs);

/// Whole-diagram state sum, ungrouped: sum over S of A^{alpha(S)} d^{|S|-1}.
/// Serial oracle for the parallel pipeline; requires a closed diagram
/// (Error(errc::open_diagram) otherwise).
LaurentPoly serial_bracket(const Diagram& d);

/// Generalized bracket of a linkoid with respect to a closure permutation:
/// sum over S of A^{alpha(S)} d^{|S| + |E/<tau_S, sigma>| - 1}.
LaurentPoly serial_bracket_sigma(const Diagram& d, const Pairing& sigma);

/// Writhe-normalized bracket (-A^3)^{-Wr} <.> via the serial state sum. A
/// closure permutation is required exactly when the diagram has endpoints.
LaurentPoly serial_jones(const Diagram& d, const std::optional<Pairing>& sigma = {});

/// c-th Catalan number (exact).
mpz_class catalan(long c);

/// Diagram of c pairwise-crossing straight lines (no two parallel, no
/// triple point). Its expansion realizes the full Catalan family of state
/// permutations; line i passes over line j for i < j.
Diagram line_arrangement(int c);

}  // namespace parajones
