#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sfo/contracted_graph.hpp"
#include "sfo/error.hpp"
#include "sfo/kernels.hpp"

using namespace sfo;

namespace {

std::vector<std::size_t> groups_of(DisjointSet& sets, std::size_t m, std::size_t& count) {
  std::vector<std::size_t> index(m, m), group(m);
  count = 0;
  for (std::size_t v = 0; v < m; ++v) {
    const auto r = sets.find(v);
    if (index[r] == m) index[r] = count++;
    group[v] = index[r];
  }
  return group;
}

}  // namespace

TEST_CASE("incremental contraction matches the reference on every step") {
  for (std::size_t n : {4u, 20u, 60u}) {
    const auto inst = generate_instance({GeneratorKind::random_metric, n, 17 + n, 100});
    const InstanceView view(inst, n);
    const std::size_t m = view.terminal_count();
    ContractedDistances serial(view, Exec::serial), parallel(view, Exec::parallel);
    DisjointSet sets(m);
    std::mt19937_64 rng(n);
    for (std::size_t step = 0; step < 8; ++step) {
      const auto a = static_cast<TerminalId>(rng() % m);
      const auto b = static_cast<TerminalId>(rng() % m);
      serial.contract(a, b);
      parallel.contract(a, b);
      sets.unite(a, b);
      CHECK(serial.raw() == parallel.raw());

      std::size_t g = 0;
      const auto group = groups_of(sets, m, g);
      const auto ref = group_apsp_reference(view, group, g);
      bool same = true;
      for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = 0; y < m; ++y) same = same && serial(x, y) == ref[group[x] * g + group[y]];
      }
      CHECK(same);
    }
  }
}

TEST_CASE("cross edges agree between kernels") {
  const auto inst = generate_instance({GeneratorKind::euclidean, 55, 4, 1000});
  const InstanceView view(inst, 55);
  std::vector<std::size_t> group(view.terminal_count());
  for (std::size_t v = 0; v < group.size(); ++v) group[v] = (v * 7) % 13;
  const auto s = cross_edges_serial(view, group, 13);
  const auto p = cross_edges_parallel(view, group, 13);
  CHECK(s.weight == p.weight);
  CHECK(s.argmin == p.argmin);
  for (std::size_t x = 0; x < 13; ++x) {
    for (std::size_t y = 0; y < 13; ++y) {
      if (x == y) continue;
      const Edge e = s.edge(x, y);
      CHECK(view.cost(e) == s.w(x, y));
      CHECK(((group[e.a] == x && group[e.b] == y) || (group[e.a] == y && group[e.b] == x)));
    }
  }
}

TEST_CASE("cluster_distance on small cases") {
  const auto inst = test::line_instance({0, 1, 2, 50});
  const InstanceView view(inst, 2);
  const auto trivial = Clustering::trivial(0, terminal_levels(view));

  SUBCASE("same super-node") {
    const std::vector<Edge> merged{{0, 2}};
    const auto p = cluster_distance(view, trivial, merged, 0, 2);
    CHECK(p.distance == 0);
    CHECK(p.edges.empty());
  }
  SUBCASE("two singletons") {
    const auto p = cluster_distance(view, trivial, {}, 0, 1);
    CHECK(p.distance == 1);
    CHECK(p.edges == std::vector<Edge>{{0, 1}});
  }
  SUBCASE("path through the middle point") {
    const auto p = cluster_distance(view, trivial, {}, 0, 2);
    CHECK(p.distance == 2);
    CHECK(p.edges == std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK(p.supernodes == std::vector<ClusterId>{0, 1, 2});
  }
  SUBCASE("unknown cluster id") {
    const std::vector<std::size_t> label{0, 0, 1, 2};
    const auto c = Clustering::from_labels(0, label, terminal_levels(view));
    CHECK_THROWS_AS(cluster_distance(view, c, {}, 1, 2), Error);
  }
}

TEST_CASE("contracted shortest paths match brute force") {
  for (const auto& inst : test::random_instances(30, 5, 100)) {
    const InstanceView view(inst, inst.n);
    const std::size_t m = view.terminal_count();
    std::mt19937_64 rng(inst.n * 31 + inst.dist(0, 1));
    std::vector<std::size_t> label(m);
    for (auto& l : label) l = rng() % m;
    const auto c = Clustering::from_labels(0, label, terminal_levels(view));
    std::vector<Edge> links;
    if (m >= 4) links.push_back(make_edge(static_cast<TerminalId>(rng() % m), static_cast<TerminalId>(rng() % m)));
    if (links.size() == 1 && links[0].a == links[0].b) links.clear();

    const ContractedGraph graph(view, c.assignment(), links, Exec::serial);
    const ContractedGraph graph_par(view, c.assignment(), links, Exec::parallel);
    for (TerminalId s = 0; s < m; ++s) {
      const auto brute = test::brute_supernode_distance(view, c.assignment(), links, s);
      for (TerminalId t = 0; t < m; ++t) {
        const auto p = graph.shortest_path(s, t);
        CHECK(p.distance == brute[t]);
        CHECK(p == graph_par.shortest_path(s, t));
        Dist cost = 0;
        for (const Edge& e : p.edges) cost += view.cost(e);
        CHECK(cost == p.distance);
        CHECK(p.edges.size() + 1 == std::max<std::size_t>(p.supernodes.size(), 1));
      }
    }
  }
}
