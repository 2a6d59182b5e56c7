#include "parajones/recombine.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <unordered_map>

#include "parajones/error.hpp"
#include "parajones/parallel.hpp"
#include "parajones/permutation.hpp"

namespace parajones {

namespace {

struct DenseRow {
  std::vector<std::pair<int, int>> pairs;  // dense indices
  const LaurentPoly* coeff;
};

std::vector<DenseRow> densify(const StateTable& t,
                              const std::unordered_map<int, int>& index) {
  std::vector<DenseRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& [pairing, coeff] : t.rows) {
    DenseRow r;
    r.coeff = &coeff;
    r.pairs.reserve(pairing.pairs().size());
    for (const auto& [x, y] : pairing.pairs()) r.pairs.emplace_back(index.at(x), index.at(y));
    rows.push_back(std::move(r));
  }
  return rows;
}

struct GlueScratch {
  std::vector<int> parent;
  std::vector<int> root_label;

  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
};

}  // namespace

StateTable glue_tables(const StateTable& a, const StateTable& b, const GlueContext& ctx,
                       int workers) {
  // union of endpoint label sets (must be disjoint)
  std::vector<int> all_labels;
  all_labels.reserve(a.endpoints.size() + b.endpoints.size());
  std::merge(a.endpoints.begin(), a.endpoints.end(), b.endpoints.begin(), b.endpoints.end(),
             std::back_inserter(all_labels));
  if (std::adjacent_find(all_labels.begin(), all_labels.end()) != all_labels.end())
    throw Error(errc::label_collision, "glued tables share an endpoint label");

  std::unordered_map<int, int> index;
  index.reserve(all_labels.size());
  for (int l : all_labels) index.emplace(l, static_cast<int>(index.size()));

  std::vector<char> consumed(all_labels.size(), 0);
  std::vector<std::pair<int, int>> dense_ctx;
  dense_ctx.reserve(ctx.transpositions.size());
  for (const auto& [x, y] : ctx.transpositions) {
    auto ix = index.find(x);
    auto iy = index.find(y);
    if (ix == index.end() || iy == index.end())
      throw Error(errc::dangling_transposition, "transposition label missing from glued tables");
    for (int di : {ix->second, iy->second}) {
      if (consumed[static_cast<size_t>(di)])
        throw Error(errc::dangling_transposition, "endpoint label consumed twice");
      consumed[static_cast<size_t>(di)] = 1;
    }
    dense_ctx.emplace_back(ix->second, iy->second);
  }

  StateTable out;
  out.piece_writhe = a.piece_writhe + b.piece_writhe;
  std::vector<int> survivor_dense;
  for (size_t i = 0; i < all_labels.size(); ++i) {
    if (!consumed[i]) {
      out.endpoints.push_back(all_labels[i]);
      survivor_dense.push_back(static_cast<int>(i));
    }
  }

  const std::vector<DenseRow> rows_a = densify(a, index);
  const std::vector<DenseRow> rows_b = densify(b, index);
  const long long total = static_cast<long long>(rows_a.size()) * static_cast<long long>(rows_b.size());
  const int k = static_cast<int>(all_labels.size());

  auto glue_range = [&](long long begin, long long end, StateTable& part) {
    part.endpoints = out.endpoints;
    GlueScratch scratch;
    scratch.parent.resize(static_cast<size_t>(k));
    scratch.root_label.assign(static_cast<size_t>(k), -1);
    std::vector<LaurentPoly> dpow(static_cast<size_t>(dense_ctx.size()) + 1);
    for (size_t i = 0; i < dpow.size(); ++i) dpow[i] = pow_d(static_cast<long>(i));
    std::vector<std::pair<int, int>> pairs;

    for (long long t = begin; t < end; ++t) {
      const DenseRow& ra = rows_a[static_cast<size_t>(t / static_cast<long long>(rows_b.size()))];
      const DenseRow& rb = rows_b[static_cast<size_t>(t % static_cast<long long>(rows_b.size()))];
      for (int i = 0; i < k; ++i) scratch.parent[static_cast<size_t>(i)] = i;
      for (const auto& [x, y] : ra.pairs) scratch.parent[static_cast<size_t>(scratch.find(x))] = scratch.find(y);
      for (const auto& [x, y] : rb.pairs) scratch.parent[static_cast<size_t>(scratch.find(x))] = scratch.find(y);
      int loops = 0;
      for (const auto& [x, y] : dense_ctx) {
        int rx = scratch.find(x);
        int ry = scratch.find(y);
        if (rx == ry)
          ++loops;
        else
          scratch.parent[static_cast<size_t>(rx)] = ry;
      }
      pairs.clear();
      for (int di : survivor_dense) {
        int r = scratch.find(di);
        if (scratch.root_label[static_cast<size_t>(r)] < 0) {
          scratch.root_label[static_cast<size_t>(r)] = all_labels[static_cast<size_t>(di)];
        } else {
          pairs.emplace_back(scratch.root_label[static_cast<size_t>(r)],
                             all_labels[static_cast<size_t>(di)]);
          scratch.root_label[static_cast<size_t>(r)] = -1;
        }
      }
      LaurentPoly contribution = (*ra.coeff) * (*rb.coeff) * dpow[static_cast<size_t>(loops)];
      part.rows[Pairing::from_canonical(pairs)] += contribution;
    }
  };

  if (workers <= 1 || total < 64) {
    glue_range(0, total, out);
  } else {
    std::vector<StateTable> parts(static_cast<size_t>(workers));
    parallel_for_chunks(0, total, workers, [&](int chunk, long long begin, long long end) {
      glue_range(begin, end, parts[static_cast<size_t>(chunk)]);
    });
    for (auto& part : parts) merge_tables(out, std::move(part));
  }

  // drop rows whose coefficients cancelled to zero
  for (auto it = out.rows.begin(); it != out.rows.end();) {
    if (it->second.is_zero())
      it = out.rows.erase(it);
    else
      ++it;
  }

  mpz_class bound = catalan(static_cast<long>(out.endpoints.size() / 2));
  if (mpz_class(static_cast<unsigned long>(out.rows.size())) > bound)
    throw Error(errc::internal, "glued table exceeds the Catalan bound");
  return out;
}

LaurentPoly finalize(const StateTable& root, const std::optional<Pairing>& user_sigma,
                     long total_writhe) {
  LaurentPoly sum;
  if (root.endpoints.empty()) {
    for (const auto& [key, coeff] : root.rows) sum += coeff;
  } else {
    if (!user_sigma.has_value() || user_sigma->empty())
      throw Error(errc::missing_closure, "open assembly needs a closure permutation");
    for (const auto& [key, coeff] : root.rows) {
      long orbits = segment_cycles_oracle(key, *user_sigma, root.endpoints);
      sum += coeff * pow_d(orbits);
    }
  }
  if (sum == LaurentPoly::one()) return neg_a3_pow(-total_writhe);  // empty assembly
  return neg_a3_pow(-total_writhe) * div_exact_d(sum);
}

StateTable run_plan_tables(const GluingPlan& plan, int workers, RunStats* stats) {
  const std::vector<int> leaf_nodes = plan.leaves();
  std::vector<StateTable> tables(plan.nodes.size());
  std::atomic<std::size_t> max_rows{0};
  auto note_rows = [&max_rows](std::size_t rows) {
    std::size_t cur = max_rows.load();
    while (cur < rows && !max_rows.compare_exchange_weak(cur, rows)) {
    }
  };

  if (static_cast<int>(leaf_nodes.size()) >= workers) {
    std::vector<std::function<void()>> tasks;
    for (int node : leaf_nodes)
      tasks.emplace_back([&, node] {
        tables[static_cast<size_t>(node)] = expand_piece(plan.nodes[static_cast<size_t>(node)].piece, 1);
        note_rows(tables[static_cast<size_t>(node)].rows.size());
      });
    parallel_tasks(workers, tasks);
  } else {
    for (int node : leaf_nodes) {
      tables[static_cast<size_t>(node)] = expand_piece(plan.nodes[static_cast<size_t>(node)].piece, workers);
      note_rows(tables[static_cast<size_t>(node)].rows.size());
    }
  }

  // internal nodes grouped by height above the leaves; same-level gluings
  // are independent
  std::vector<int> height(plan.nodes.size(), 0);
  std::vector<std::vector<int>> by_height;
  for (size_t i = 0; i < plan.nodes.size(); ++i) {
    const auto& node = plan.nodes[i];
    if (node.left < 0) continue;
    height[i] = 1 + std::max(height[static_cast<size_t>(node.left)],
                             height[static_cast<size_t>(node.right)]);
    if (static_cast<size_t>(height[i]) > by_height.size()) by_height.resize(static_cast<size_t>(height[i]));
    by_height[static_cast<size_t>(height[i] - 1)].push_back(static_cast<int>(i));
  }

  for (const auto& level : by_height) {
    auto glue_node = [&](int node, int glue_workers) {
      const auto& nd = plan.nodes[static_cast<size_t>(node)];
      GlueContext ctx{nd.transpositions};
      tables[static_cast<size_t>(node)] =
          glue_tables(tables[static_cast<size_t>(nd.left)], tables[static_cast<size_t>(nd.right)],
                      ctx, glue_workers);
      note_rows(tables[static_cast<size_t>(node)].rows.size());
      tables[static_cast<size_t>(nd.left)] = StateTable{};
      tables[static_cast<size_t>(nd.right)] = StateTable{};
    };
    if (static_cast<int>(level.size()) >= workers) {
      std::vector<std::function<void()>> tasks;
      for (int node : level) tasks.emplace_back([&, node] { glue_node(node, 1); });
      parallel_tasks(workers, tasks);
    } else {
      for (int node : level) glue_node(node, workers);
    }
  }

  if (stats != nullptr) {
    stats->max_table_rows = max_rows.load();
    stats->leaf_crossings = plan.leaf_crossing_counts();
  }
  return std::move(tables[static_cast<size_t>(plan.root)]);
}

LaurentPoly run_plan(const GluingPlan& plan, int workers,
                     const std::optional<Pairing>& user_sigma, RunStats* stats) {
  StateTable root = run_plan_tables(plan, workers, stats);
  return finalize(root, user_sigma, plan.total_writhe);
}

}  // namespace parajones
