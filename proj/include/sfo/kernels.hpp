#pragma once

// Dense distance kernels. Each kernel has a serial reference version and an
// OpenMP version; both must produce identical results, which the unit tests
// and the benchmark target rely on.

#include <span>
#include <vector>

#include "sfo/metric.hpp"

namespace sfo {

enum class Exec { serial, parallel };

// Below this many rows the OpenMP kernels run single-threaded.
inline constexpr std::size_t kParallelThreshold = 96;

// Terminal-indexed shortest-path matrix of a contracted metric M/C: entry
// (x, y) is the distance between the clusters of x and y. Starts as the plain
// metric (trivial clustering) and absorbs one zero-cost contraction at a time.
class ContractedDistances {
 public:
  ContractedDistances() = default;
  ContractedDistances(const InstanceView& view, Exec exec);

  std::size_t size() const noexcept { return size_; }
  Dist operator()(std::size_t x, std::size_t y) const { return d_[x * size_ + y]; }

  // Contract terminals a and b into one vertex:
  //   d'(x,y) = min(d(x,y), d(x,a) + d(b,y), d(x,b) + d(a,y)).
  void contract(TerminalId a, TerminalId b);

  const std::vector<Dist>& raw() const noexcept { return d_; }

 private:
  std::size_t size_ = 0;
  Exec exec_ = Exec::parallel;
  std::vector<Dist> d_;
  std::vector<Dist> col_a_, col_b_;
};

void contract_serial(std::vector<Dist>& d, std::size_t size, TerminalId a, TerminalId b,
                     std::vector<Dist>& col_a, std::vector<Dist>& col_b);
void contract_parallel(std::vector<Dist>& d, std::size_t size, TerminalId a, TerminalId b,
                       std::vector<Dist>& col_a, std::vector<Dist>& col_b);

// Cheapest original edge between every pair of groups. `group` maps terminal
// -> group index in [0, groups). Ties break on the smaller canonical edge.
struct CrossEdges {
  std::size_t groups = 0;
  std::vector<Dist> weight;  // groups x groups; diagonal unused
  std::vector<Edge> argmin;  // groups x groups

  Dist w(std::size_t p, std::size_t q) const { return weight[p * groups + q]; }
  const Edge& edge(std::size_t p, std::size_t q) const { return argmin[p * groups + q]; }
};

CrossEdges cross_edges_serial(const InstanceView& view, std::span<const std::size_t> group,
                              std::size_t groups);
CrossEdges cross_edges_parallel(const InstanceView& view, std::span<const std::size_t> group,
                                std::size_t groups);
CrossEdges cross_edges(const InstanceView& view, std::span<const std::size_t> group,
                       std::size_t groups, Exec exec);

// Reference route: Floyd-Warshall over the explicit group graph built from
// cross edges. Returns a groups x groups matrix.
std::vector<Dist> group_apsp_reference(const InstanceView& view,
                                       std::span<const std::size_t> group, std::size_t groups);

}  // namespace sfo
