#pragma once

#include <limits>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "sfo/clustering.hpp"
#include "sfo/kernels.hpp"
#include "sfo/metric.hpp"
#include "sfo/union_find.hpp"

namespace sfo {

inline constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

// A virtual edge chosen into the level-i spanning forest of one arrival.
struct VirtualEdge {
  int level = 0;
  ClusterId a = 0;  // endpoints are i-active clusters of C_i^(t), a < b
  ClusterId b = 0;
  bool inherited = false;
  std::size_t parent = kNoParent;  // index into the previous arrival's level-i edges
  std::size_t origin = 0;          // arrival at which e_orig was realized
  std::vector<Edge> e_orig;        // realized original edges, sorted

  bool operator==(const VirtualEdge&) const = default;
};

// F_i for one arrival. Inherited edges come first; both groups are in
// canonical (a, b) order.
struct LevelForest {
  std::vector<VirtualEdge> edges;
  std::size_t inherited_count = 0;
  Clustering inh_clustering;  // C_inh,i: contraction of the inherited edges over C_i

  std::span<const VirtualEdge> inherited() const {
    return std::span<const VirtualEdge>(edges).first(inherited_count);
  }
  std::size_t non_inherited_count() const { return edges.size() - inherited_count; }
};

struct VirtualForest {
  std::vector<LevelForest> levels;  // 0..L of the arrival
};

// Image of an inheritable edge of the previous arrival in H_i^(t).
struct InheritedEdge {
  ClusterId a = 0;
  ClusterId b = 0;
  std::size_t parent = kNoParent;

  bool operator==(const InheritedEdge&) const = default;
};

// Maps the previous level-i forest into H_i^(t). `prev` / `prev_ci` are null
// at the first arrival or when the previous hierarchy had no level i.
std::vector<InheritedEdge> classify_inheritance(const LevelForest* prev, const Clustering* prev_ci,
                                                std::span<const VirtualGraphEdge> h_i,
                                                const Clustering& new_ci);

// Kruskal over the inherited edges first, then over the rest of H_i, both in
// canonical order. E_orig is left empty.
LevelForest select_spanning_forest(int level, std::span<const VirtualGraphEdge> h_i,
                                   std::span<const InheritedEdge> inherited, const Clustering& ci,
                                   std::span<const int> terminal_level);

enum class PinKind { batch, single };

struct PinnedEdge {
  Edge edge;
  std::size_t arrival = 0;
  int level = 0;
  PinKind kind = PinKind::batch;

  bool operator==(const PinnedEdge&) const = default;
};

// The growing pinned forest A. Pinning an edge that would close a cycle is an
// algorithm bug and throws.
class PinnedSet {
 public:
  explicit PinnedSet(std::size_t terminal_capacity = 0) : forest_(terminal_capacity) {}

  std::size_t size() const noexcept { return entries_.size(); }
  bool contains(const Edge& e) const { return members_.count(e) != 0; }
  void pin(const Edge& e, std::size_t arrival, int level, PinKind kind);

  const std::vector<PinnedEdge>& entries() const noexcept { return entries_; }
  std::vector<Edge> edges() const { return {members_.begin(), members_.end()}; }

 private:
  DisjointSet forest_;
  std::set<Edge> members_;
  std::vector<PinnedEdge> entries_;  // pin order
};

struct PinEvent {
  std::size_t arrival = 0;
  int level = 0;
  PinKind kind = PinKind::batch;
  std::size_t source_size = 0;  // |E_orig| for batch, |B| for single
  std::size_t count = 0;
  Dist cost = 0;

  bool operator==(const PinEvent&) const = default;
};

struct RealizeResult {
  std::vector<PinEvent> events;
  std::size_t buffer_end = 0;
  std::size_t buffer_peak = 0;  // largest |B| seen right before a single pin check
};

// The pinning pass for one arrival: realizes every non-inherited edge of
// `forest` by a shortest path in (M / C_i) / A and grows A. Levels ascend,
// edges within a level in canonical order. Inherited edges must already carry
// their E_orig.
RealizeResult pin_and_realize(const InstanceView& view, const Hierarchy& h, VirtualForest& forest,
                              PinnedSet& pinned, std::size_t lambda, std::size_t arrival,
                              Exec exec = Exec::parallel);

struct Snapshot {
  std::size_t t = 0;
  std::vector<Edge> edges;  // sorted, unique
  Dist cost = 0;
};

struct LedgerEntry {
  std::size_t t = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t cum_insertions = 0;
  std::size_t cum_deletions = 0;
  std::size_t pinned_count = 0;
  std::size_t buffer_end = 0;
  std::size_t buffer_peak = 0;

  bool operator==(const LedgerEntry&) const = default;
};

// Everything the certifier needs about one arrival.
struct ArrivalRecord {
  std::size_t t = 0;
  Hierarchy hierarchy;
  VirtualForest forest;
  Snapshot snapshot;
  std::vector<Edge> pinned;  // A^(t), sorted
  Dist cost_pinned = 0;
  Dist cost_forest_forming = 0;  // sum over virtual edges of cost(E_orig)
  LedgerEntry ledger;
  std::vector<PinEvent> pin_events;
};

struct RunTrace {
  const Instance* instance = nullptr;
  std::size_t lambda = 1;
  std::vector<ArrivalRecord> arrivals;
};

// (|now \ prev|, |prev \ now|) for sorted unique edge lists.
std::pair<std::size_t, std::size_t> recourse_diff(std::span<const Edge> prev, std::span<const Edge> now);

// Online low-recourse Steiner forest: one advance() per arriving pair.
class OnlineState {
 public:
  OnlineState(const Instance& instance, std::size_t lambda, Exec exec = Exec::parallel);

  std::size_t arrivals() const noexcept { return t_; }
  std::size_t lambda() const noexcept { return lambda_; }
  const PinnedSet& pinned() const noexcept { return pinned_; }
  const Snapshot& snapshot() const noexcept { return snapshot_; }

  // Processes demand t+1; `next` must match the instance order.
  ArrivalRecord advance(const Demand& next);

 private:
  const Instance* instance_;
  std::size_t lambda_;
  Exec exec_;
  std::size_t t_ = 0;
  Hierarchy hierarchy_;
  VirtualForest forest_;
  PinnedSet pinned_;
  Snapshot snapshot_;
  std::size_t cum_insertions_ = 0;
  std::size_t cum_deletions_ = 0;
};

// Runs all arrivals and keeps every record.
RunTrace run_online(const Instance& instance, std::size_t lambda, Exec exec = Exec::parallel);

}  // namespace sfo
