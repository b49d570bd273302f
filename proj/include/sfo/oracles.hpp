#pragma once

#include <vector>

#include "sfo/clustering.hpp"
#include "sfo/kernels.hpp"
#include "sfo/metric.hpp"

namespace sfo {

inline constexpr std::size_t kDefaultOracleLimit = 9;

struct OptimumResult {
  Dist cost = 0;
  // Groups of 1-based pair indices; every pair appears in exactly one group.
  std::vector<std::vector<std::size_t>> partition;
  std::vector<Edge> forest;  // union of per-group minimum spanning trees, sorted
};

// Minimum spanning tree (Prim, canonical vertex order) over the given terminals.
std::vector<Edge> prim_mst(const InstanceView& view, std::span<const TerminalId> terminals);

// Exact optimum of the prefix: in a terminal-only metric every component of an
// optimal forest is a minimum spanning tree of its terminals, so minimizing over
// partitions of the pairs is exact. Throws Error(oracle_limit) above `limit`.
OptimumResult exact_optimum(const InstanceView& view, std::size_t limit = kDefaultOracleLimit);

struct OfflineForest {
  std::vector<Edge> edges;  // sorted, unique
  Dist cost = 0;
  std::vector<std::size_t> merges_per_level;  // |C_i| - |C_{i+1}|, i = 0..L
  Dist merge_budget = 0;                      // sum_i (|C_i| - |C_{i+1}|) * 2^{i+1}
};

// Offline forest-forming procedure: canonical spanning forest of every H_i,
// each virtual edge realized by a shortest path in M / C_i.
OfflineForest offline_gluttonous_forest(const InstanceView& view, Exec exec = Exec::parallel);

struct BaselineStep {
  std::size_t t = 0;
  Dist cost = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;  // always zero: baselines never remove edges
};

// Online simulation of the timed gluttonous algorithm (no recourse).
class OnlineGluttonous {
 public:
  explicit OnlineGluttonous(const Instance& instance);

  BaselineStep step(const Demand& pair);
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t arrivals() const noexcept { return t_; }
  // Current clustering labels (terminal -> cluster id) and merge count per level.
  const std::vector<ClusterId>& clusters() const noexcept { return cluster_of_; }
  const std::vector<std::size_t>& merges_per_level() const noexcept { return merges_; }

 private:
  const Instance* instance_;
  std::size_t t_ = 0;
  std::vector<ClusterId> cluster_of_;
  std::vector<int> terminal_level_;
  std::vector<Edge> edges_;  // sorted
  Dist cost_ = 0;
  std::vector<std::size_t> merges_;
};

// Greedy: connect the new pair by a shortest path in the metric contracted by
// the current solution. Never removes edges.
class GreedyOnline {
 public:
  explicit GreedyOnline(const Instance& instance);

  BaselineStep step(const Demand& pair);
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  const Instance* instance_;
  std::size_t t_ = 0;
  std::vector<Edge> edges_;
  Dist cost_ = 0;
};

}  // namespace sfo
