#pragma once

#include <cstdlib>
#include <initializer_list>
#include <limits>
#include <vector>

#include "sfo/clustering.hpp"
#include "sfo/metric.hpp"
#include "sfo/union_find.hpp"

namespace sfo::test {

// Instance whose terminals sit on a line at the given positions.
inline Instance line_instance(std::initializer_list<Dist> positions) {
  const std::vector<Dist> pos(positions);
  Instance inst;
  inst.n = pos.size() / 2;
  inst.dist = DistMatrix(pos.size());
  for (std::size_t a = 0; a < pos.size(); ++a) {
    for (std::size_t b = 0; b < pos.size(); ++b) inst.dist(a, b) = std::llabs(pos[a] - pos[b]);
  }
  for (std::size_t t = 0; t < inst.n; ++t) {
    inst.demands.push_back({static_cast<TerminalId>(2 * t), static_cast<TerminalId>(2 * t + 1)});
  }
  return inst;
}

// a=0, b=1, c=10, d=14; pairs (a,b), (c,d).
inline Instance w1() { return line_instance({0, 1, 10, 14}); }

inline std::vector<Instance> random_instances(std::size_t count, std::size_t max_n, std::uint64_t seed0) {
  std::vector<Instance> out;
  const GeneratorKind kinds[] = {GeneratorKind::euclidean, GeneratorKind::random_metric, GeneratorKind::line_chain};
  for (std::size_t k = 0; k < count; ++k) {
    GeneratorSpec spec;
    spec.kind = kinds[k % 3];
    spec.n = 1 + (k * 7 + 3) % max_n;
    spec.seed = seed0 + k;
    spec.scale = k % 2 == 0 ? 1000 : 50;
    out.push_back(generate_instance(spec));
  }
  return out;
}

// Distances between super-nodes after collapsing `cluster_of` and then
// `links`, by plain Bellman-Ford relaxation over every terminal pair.
inline std::vector<Dist> brute_supernode_distance(const InstanceView& view, const std::vector<ClusterId>& cluster_of,
                                                  const std::vector<Edge>& links, TerminalId source) {
  const std::size_t m = view.terminal_count();
  DisjointSet sets(m);
  for (std::size_t v = 0; v < m; ++v) sets.unite(v, cluster_of[v]);
  for (const Edge& e : links) sets.unite(e.a, e.b);
  constexpr Dist kInf = std::numeric_limits<Dist>::max() / 4;
  std::vector<Dist> d(m, kInf);
  for (std::size_t v = 0; v < m; ++v) {
    if (sets.same(v, source)) d[v] = 0;
  }
  for (std::size_t round = 0; round < m; ++round) {
    bool changed = false;
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = 0; y < m; ++y) {
        Dist cand = d[x] + view.dist(static_cast<TerminalId>(x), static_cast<TerminalId>(y));
        if (sets.same(x, y)) cand = d[x];
        if (cand < d[y]) {
          d[y] = cand;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return d;
}

// Minimum cost edge subset connecting every demand of the prefix, over all
// subsets of the complete graph. Only for tiny prefixes.
inline Dist brute_force_optimum(const InstanceView& view) {
  const std::size_t m = view.terminal_count();
  std::vector<Edge> all;
  for (TerminalId a = 0; a < m; ++a) {
    for (TerminalId b = a + 1; b < m; ++b) all.push_back({a, b});
  }
  Dist best = std::numeric_limits<Dist>::max();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
    DisjointSet sets(m);
    Dist cost = 0;
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (mask >> k & 1u) {
        sets.unite(all[k].a, all[k].b);
        cost += view.cost(all[k]);
      }
    }
    if (cost >= best) continue;
    bool ok = true;
    for (std::size_t t = 1; t <= view.arrivals() && ok; ++t) ok = sets.same(view.demand(t).u, view.demand(t).v);
    if (ok) best = cost;
  }
  return best;
}

}  // namespace sfo::test
