#pragma once

#include <cstddef>
#include <optional>

#include "parajones/bracket.hpp"
#include "parajones/subdivide.hpp"

namespace parajones {

/// Transpositions consumed when two tables are glued.
struct GlueContext {
  std::vector<std::pair<int, int>> transpositions;
};

struct RunStats {
  std::size_t max_table_rows = 0;
  std::vector<int> leaf_crossings;
};

/// Glue two state tables: for every row pair, contract the union pairing
/// through the context transpositions (each closed loop contributes a factor
/// d), key the output row by the surviving open pairing and sum the
/// coefficient products. Row-pair products are range-partitioned across
/// workers and merged by key.
StateTable glue_tables(const StateTable& a, const StateTable& b, const GlueContext& ctx,
                       int workers = 1);

/// Close the root table: each row picks up d^{|E/<tau, sigma>|}, rows are
/// summed, the single global division by d implements the "-1" exponent and
/// the result is writhe-normalized by (-A^3)^{-writhe}.
LaurentPoly finalize(const StateTable& root, const std::optional<Pairing>& user_sigma,
                     long total_writhe);

/// Expand all leaves, glue level by level up the tree, return the root
/// table. Output is identical for every worker count.
StateTable run_plan_tables(const GluingPlan& plan, int workers, RunStats* stats = nullptr);

/// Full pipeline: run_plan_tables + finalize.
LaurentPoly run_plan(const GluingPlan& plan, int workers,
                     const std::optional<Pairing>& user_sigma = {}, RunStats* stats = nullptr);

}  // namespace parajones
