#pragma once

#include <span>
#include <vector>

#include "sfo/kernels.hpp"
#include "sfo/metric.hpp"

namespace sfo {

// Clusters are named by their smallest member terminal.
using ClusterId = TerminalId;

// A shortest path between two super-nodes of G_orig((M/C)/E').
struct ClusterPath {
  Dist distance = 0;
  std::vector<ClusterId> supernodes;  // source .. target, by canonical id
  std::vector<Edge> edges;            // one realized original edge per hop

  bool operator==(const ClusterPath&) const = default;
};

// The graph obtained from the terminal metric by contracting each cluster and
// then every edge of `contracted_by`. Super-edges carry the cheapest original
// cross edge (ties by canonical edge order).
class ContractedGraph {
 public:
  ContractedGraph(const InstanceView& view, std::span<const ClusterId> cluster_of,
                  std::span<const Edge> contracted_by, Exec exec = Exec::parallel);

  std::size_t supernode_count() const noexcept { return ids_.size(); }
  std::size_t supernode_index(TerminalId v) const { return group_[v]; }
  ClusterId supernode_id(std::size_t index) const { return ids_[index]; }
  bool same_supernode(TerminalId x, TerminalId y) const { return group_[x] == group_[y]; }

  // Shortest path between the super-nodes holding terminals `from` and `to`.
  // Among equal-length paths the one with the lexicographically smallest
  // super-node id sequence is returned.
  ClusterPath shortest_path(TerminalId from, TerminalId to) const;

 private:
  std::vector<Dist> distances_to(std::size_t target) const;

  const InstanceView* view_;
  std::vector<std::size_t> group_;  // terminal -> super-node index
  std::vector<ClusterId> ids_;      // super-node index -> id, ascending
  CrossEdges cross_;
};

}  // namespace sfo
