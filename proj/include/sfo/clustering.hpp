#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sfo/contracted_graph.hpp"
#include "sfo/kernels.hpp"
#include "sfo/metric.hpp"

namespace sfo {

// Highest level a 2^61-bounded distance can produce.
inline constexpr int kMaxLevel = 61;

// ceil(log2 d) for d >= 1, via bit length.
int ceil_log2(Dist d);

// level(v) = ceil(log2 dist(v, mate(v))).
int terminal_level(const InstanceView& view, TerminalId v);

// Levels of all arrived terminals.
std::vector<int> terminal_levels(const InstanceView& view);

// True iff d < 2^k.
bool below_pow2(Dist d, int k);

struct Cluster {
  ClusterId id = 0;                  // smallest member
  std::vector<TerminalId> members;   // ascending
  int level = 0;                     // max member level

  bool operator==(const Cluster&) const = default;
};

// A partition of the arrived terminals, as used at one level i of a hierarchy.
// A cluster is i-active when its level is at least i.
class Clustering {
 public:
  Clustering() = default;

  // `label` maps each terminal to an arbitrary group key below label.size();
  // clusters are renamed to their minimum member.
  static Clustering from_labels(int level_index, std::span<const std::size_t> label,
                                std::span<const int> terminal_level);
  static Clustering trivial(int level_index, std::span<const int> terminal_level);

  int level_index() const noexcept { return level_index_; }
  std::size_t terminal_count() const noexcept { return assignment_.size(); }
  std::size_t size() const noexcept { return clusters_.size(); }

  ClusterId cluster_of(TerminalId v) const { return assignment_.at(v); }
  const std::vector<ClusterId>& assignment() const noexcept { return assignment_; }
  const std::vector<Cluster>& clusters() const noexcept { return clusters_; }
  bool has_cluster(ClusterId id) const;
  const Cluster& cluster(ClusterId id) const;  // throws for unknown ids
  std::size_t index_of_cluster(ClusterId id) const;  // position in clusters()

  bool active(const Cluster& c) const noexcept { return c.level >= level_index_; }
  std::size_t active_count() const;

  bool same_partition(const Clustering& other) const { return assignment_ == other.assignment_; }
  bool operator==(const Clustering& other) const = default;

 private:
  int level_index_ = 0;
  std::vector<ClusterId> assignment_;
  std::vector<Cluster> clusters_;     // ascending id
  std::vector<std::size_t> index_of_; // terminal id -> position in clusters_ (or npos)
};

// Merge the clusters joined by `links` (pairs of cluster ids or member
// terminals) and return the result labelled with `level_index`.
Clustering contract_over(const Clustering& base, std::span<const Edge> links, int level_index,
                         std::span<const int> terminal_level);

// An edge of the level-i virtual graph H_i between two i-active clusters.
struct VirtualGraphEdge {
  ClusterId a = 0;  // a < b
  ClusterId b = 0;
  Dist distance = 0;  // dist in M / C_i

  bool operator==(const VirtualGraphEdge&) const = default;
};

// Clustering hierarchy C_0 .. C_{L+1} of one arrival, with the virtual graphs
// H_0 .. H_L. Levels above L+1 alias the top clustering and have empty H.
struct Hierarchy {
  std::size_t t = 0;
  int max_level = 0;  // L
  std::vector<int> levels_of_terminals;
  std::vector<Clustering> levels;                        // L + 2 entries
  std::vector<std::vector<VirtualGraphEdge>> virtual_graphs;  // L + 1 entries

  const Clustering& at(int i) const;
  const Clustering& top() const { return levels.back(); }
  std::span<const VirtualGraphEdge> virtual_graph(int i) const;
};

// Shortest path between clusters c1 and c2 of `clustering` in the metric
// contracted by the clustering and then by `contracted_by`.
ClusterPath cluster_distance(const InstanceView& view, const Clustering& clustering,
                             std::span<const Edge> contracted_by, ClusterId c1, ClusterId c2,
                             Exec exec = Exec::parallel);

// H_i for the given C_i, computed from scratch on the explicit cluster graph.
std::vector<VirtualGraphEdge> virtual_graph(const InstanceView& view, const Clustering& clustering);

Hierarchy build_hierarchy(const InstanceView& view, Exec exec = Exec::parallel);

// fine <= coarse: every fine cluster lies inside one coarse cluster. Throws
// Error(config) if fine covers terminals that coarse does not.
bool check_refinement(const Clustering& fine, const Clustering& coarse);

// One line per level: "i | id: m m .. [active] | id: .. [inactive]".
void dump_hierarchy(const Hierarchy& h, std::ostream& out);
std::string dump_clustering_line(const Clustering& c);
// Inverse of dump_clustering_line given the terminal levels.
Clustering parse_clustering_line(const std::string& line, std::span<const int> terminal_level);

}  // namespace sfo
