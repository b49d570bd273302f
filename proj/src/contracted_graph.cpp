#include "sfo/contracted_graph.hpp"

#include <algorithm>
#include <limits>

#include "sfo/error.hpp"
#include "sfo/union_find.hpp"

namespace sfo {

ContractedGraph::ContractedGraph(const InstanceView& view, std::span<const ClusterId> cluster_of,
                                 std::span<const Edge> contracted_by, Exec exec)
    : view_(&view) {
  const std::size_t size = view.terminal_count();
  ensure(cluster_of.size() == size, "cluster assignment does not cover the arrived terminals");
  DisjointSet sets(size);
  for (std::size_t v = 0; v < size; ++v) sets.unite(v, cluster_of[v]);
  for (const Edge& e : contracted_by) {
    ensure(view.contains(e.a) && view.contains(e.b), "contracted edge outside the view");
    sets.unite(e.a, e.b);
  }
  // Terminals are scanned in increasing order, so the first member seen of a
  // super-node is its minimum and indices come out sorted by id.
  std::vector<std::size_t> index_of_root(size, size);
  group_.resize(size);
  for (std::size_t v = 0; v < size; ++v) {
    const std::size_t root = sets.find(v);
    if (index_of_root[root] == size) {
      index_of_root[root] = ids_.size();
      ids_.push_back(static_cast<ClusterId>(v));
    }
    group_[v] = index_of_root[root];
  }
  cross_ = cross_edges(view, group_, ids_.size(), exec);
}

std::vector<Dist> ContractedGraph::distances_to(std::size_t target) const {
  constexpr Dist kInf = std::numeric_limits<Dist>::max();
  const std::size_t k = ids_.size();
  std::vector<Dist> dist(k, kInf);
  std::vector<bool> done(k, false);
  dist[target] = 0;
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best = k;
    for (std::size_t p = 0; p < k; ++p) {
      if (!done[p] && dist[p] != kInf && (best == k || dist[p] < dist[best])) best = p;
    }
    if (best == k) break;
    done[best] = true;
    for (std::size_t q = 0; q < k; ++q) {
      if (done[q] || q == best) continue;
      const Dist cand = dist[best] + cross_.w(best, q);
      if (cand < dist[q]) dist[q] = cand;
    }
  }
  return dist;
}

ClusterPath ContractedGraph::shortest_path(TerminalId from, TerminalId to) const {
  ensure(view_->contains(from) && view_->contains(to), "path endpoint has not arrived");
  const std::size_t source = group_[from];
  const std::size_t target = group_[to];
  ClusterPath path;
  path.supernodes.push_back(ids_[source]);
  if (source == target) return path;

  const std::vector<Dist> to_target = distances_to(target);
  path.distance = to_target[source];
  std::size_t cur = source;
  while (cur != target) {
    std::size_t next = ids_.size();
    for (std::size_t q = 0; q < ids_.size(); ++q) {
      if (q == cur) continue;
      if (cross_.w(cur, q) + to_target[q] == to_target[cur]) {
        next = q;
        break;
      }
    }
    ensure(next != ids_.size(), "shortest-path walk lost the target");
    path.edges.push_back(cross_.edge(cur, next));
    path.supernodes.push_back(ids_[next]);
    cur = next;
  }
  return path;
}

}  // namespace sfo
