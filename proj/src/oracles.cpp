#include "sfo/oracles.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "sfo/contracted_graph.hpp"
#include "sfo/error.hpp"
#include "sfo/union_find.hpp"

namespace sfo {

std::vector<Edge> prim_mst(const InstanceView& view, std::span<const TerminalId> terminals) {
  std::vector<Edge> tree;
  const std::size_t k = terminals.size();
  if (k < 2) return tree;
  constexpr Dist kInf = std::numeric_limits<Dist>::max();
  std::vector<bool> in_tree(k, false);
  std::vector<Dist> best(k, kInf);
  std::vector<std::size_t> link(k, 0);
  in_tree[0] = true;
  for (std::size_t j = 1; j < k; ++j) best[j] = view.dist(terminals[0], terminals[j]);
  for (std::size_t round = 1; round < k; ++round) {
    std::size_t pick = k;
    for (std::size_t j = 0; j < k; ++j) {
      if (!in_tree[j] && (pick == k || best[j] < best[pick])) pick = j;
    }
    in_tree[pick] = true;
    tree.push_back(make_edge(terminals[link[pick]], terminals[pick]));
    for (std::size_t j = 0; j < k; ++j) {
      if (in_tree[j]) continue;
      const Dist d = view.dist(terminals[pick], terminals[j]);
      if (d < best[j]) {
        best[j] = d;
        link[j] = pick;
      }
    }
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

OptimumResult exact_optimum(const InstanceView& view, std::size_t limit) {
  const std::size_t t = view.arrivals();
  if (t > limit) {
    throw Error(ErrorCode::oracle_limit, "exact optimum limited to " + std::to_string(limit) +
                                             " pairs, asked for " + std::to_string(t));
  }
  OptimumResult result;
  if (t == 0) return result;
  ensure(t < 31, "oracle limit too large for subset tables");

  const std::size_t masks = std::size_t{1} << t;
  std::vector<Dist> group_cost(masks, 0);
  for (std::size_t mask = 1; mask < masks; ++mask) {
    std::vector<TerminalId> terms;
    for (std::size_t p = 0; p < t; ++p) {
      if ((mask >> p) & 1u) {
        terms.push_back(view.demand(p + 1).u);
        terms.push_back(view.demand(p + 1).v);
      }
    }
    std::sort(terms.begin(), terms.end());
    group_cost[mask] = edge_cost(view, prim_mst(view, terms));
  }

  // Restricted-growth enumeration: pair p joins an existing block or opens the
  // next one, which visits partitions in lexicographic order.
  std::vector<std::size_t> blocks;
  std::vector<std::size_t> best_blocks;
  Dist best = std::numeric_limits<Dist>::max();
  std::function<void(std::size_t)> visit = [&](std::size_t p) {
    if (p == t) {
      Dist total = 0;
      for (std::size_t m : blocks) total += group_cost[m];
      if (total < best) {
        best = total;
        best_blocks = blocks;
      }
      return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      blocks[b] |= std::size_t{1} << p;
      visit(p + 1);
      blocks[b] &= ~(std::size_t{1} << p);
    }
    blocks.push_back(std::size_t{1} << p);
    visit(p + 1);
    blocks.pop_back();
  };
  visit(0);

  result.cost = best;
  for (std::size_t mask : best_blocks) {
    std::vector<std::size_t> group;
    std::vector<TerminalId> terms;
    for (std::size_t p = 0; p < t; ++p) {
      if ((mask >> p) & 1u) {
        group.push_back(p + 1);
        terms.push_back(view.demand(p + 1).u);
        terms.push_back(view.demand(p + 1).v);
      }
    }
    std::sort(terms.begin(), terms.end());
    const auto tree = prim_mst(view, terms);
    result.forest.insert(result.forest.end(), tree.begin(), tree.end());
    result.partition.push_back(std::move(group));
  }
  std::sort(result.forest.begin(), result.forest.end());
  return result;
}

OfflineForest offline_gluttonous_forest(const InstanceView& view, Exec exec) {
  const Hierarchy h = build_hierarchy(view, exec);
  OfflineForest out;
  for (int i = 0; i <= h.max_level; ++i) {
    const Clustering& ci = h.at(i);
    const std::size_t merged = ci.size() - h.at(i + 1).size();
    out.merges_per_level.push_back(merged);
    out.merge_budget += static_cast<Dist>(merged) * (Dist{2} << i);

    auto graph_edges = h.virtual_graph(i);
    if (graph_edges.empty()) continue;
    std::vector<VirtualGraphEdge> sorted(graph_edges.begin(), graph_edges.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& x, const auto& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
    DisjointSet sets(view.terminal_count());
    const ContractedGraph graph(view, ci.assignment(), {}, exec);
    for (const auto& e : sorted) {
      if (!sets.unite(e.a, e.b)) continue;
      const ClusterPath path = graph.shortest_path(e.a, e.b);
      out.edges.insert(out.edges.end(), path.edges.begin(), path.edges.end());
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  out.cost = edge_cost(view, out.edges);
  return out;
}

namespace {

// Adds `path` to the sorted edge list; returns the number of new edges.
std::size_t buy(std::vector<Edge>& owned, std::span<const Edge> path) {
  std::size_t added = 0;
  for (const Edge& e : path) {
    auto it = std::lower_bound(owned.begin(), owned.end(), e);
    if (it != owned.end() && *it == e) continue;
    owned.insert(it, e);
    ++added;
  }
  return added;
}

void check_pair(const Instance& inst, std::size_t t, const Demand& pair) {
  if (t >= inst.n || !(inst.demands[t] == pair)) {
    throw Error(ErrorCode::config, "baseline received an out-of-order pair");
  }
}

}  // namespace

OnlineGluttonous::OnlineGluttonous(const Instance& instance) : instance_(&instance) {}

BaselineStep OnlineGluttonous::step(const Demand& pair) {
  check_pair(*instance_, t_, pair);
  ++t_;
  const InstanceView view(*instance_, t_);
  for (TerminalId v : {pair.u, pair.v}) {
    cluster_of_.push_back(v);
    terminal_level_.push_back(terminal_level(view, v));
  }
  const int max_level = *std::max_element(terminal_level_.begin(), terminal_level_.end());
  if (merges_.size() < static_cast<std::size_t>(max_level) + 1) merges_.resize(max_level + 1, 0);

  std::size_t inserted = 0;
  for (int i = 0; i <= max_level; ++i) {
    while (true) {
      const Clustering c = Clustering::from_labels(
          i, std::vector<std::size_t>(cluster_of_.begin(), cluster_of_.end()), terminal_level_);
      const auto& clusters = c.clusters();
      std::vector<std::size_t> group(view.terminal_count());
      for (std::size_t p = 0; p < clusters.size(); ++p) {
        for (TerminalId v : clusters[p].members) group[v] = p;
      }
      const auto d = group_apsp_reference(view, group, clusters.size());
      std::size_t pick_p = clusters.size(), pick_q = clusters.size();
      for (std::size_t p = 0; p < clusters.size() && pick_p == clusters.size(); ++p) {
        if (!c.active(clusters[p])) continue;
        for (std::size_t q = p + 1; q < clusters.size(); ++q) {
          if (c.active(clusters[q]) && below_pow2(d[p * clusters.size() + q], i + 1)) {
            pick_p = p;
            pick_q = q;
            break;
          }
        }
      }
      if (pick_p == clusters.size()) break;

      const ClusterId c1 = clusters[pick_p].id;
      const ClusterId c2 = clusters[pick_q].id;
      const ContractedGraph graph(view, cluster_of_, {}, Exec::serial);
      const ClusterPath path = graph.shortest_path(c1, c2);
      inserted += buy(edges_, path.edges);
      for (auto& id : cluster_of_) {
        if (id == c2) id = c1;
      }
      ++merges_[static_cast<std::size_t>(i)];
    }
  }
  cost_ = edge_cost(view, edges_);
  return {t_, cost_, inserted, 0};
}

GreedyOnline::GreedyOnline(const Instance& instance) : instance_(&instance) {}

BaselineStep GreedyOnline::step(const Demand& pair) {
  check_pair(*instance_, t_, pair);
  ++t_;
  const InstanceView view(*instance_, t_);
  std::vector<ClusterId> singletons(view.terminal_count());
  for (std::size_t v = 0; v < singletons.size(); ++v) singletons[v] = static_cast<ClusterId>(v);
  const ContractedGraph graph(view, singletons, edges_, Exec::serial);
  const ClusterPath path = graph.shortest_path(pair.u, pair.v);
  const std::size_t inserted = buy(edges_, path.edges);
  cost_ = edge_cost(view, edges_);
  return {t_, cost_, inserted, 0};
}

}  // namespace sfo
