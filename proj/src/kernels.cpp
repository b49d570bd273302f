#include "sfo/kernels.hpp"

#include <algorithm>
#include <limits>

namespace sfo {

ContractedDistances::ContractedDistances(const InstanceView& view, Exec exec)
    : size_(view.terminal_count()), exec_(exec), d_(size_ * size_), col_a_(size_), col_b_(size_) {
  for (std::size_t x = 0; x < size_; ++x) {
    for (std::size_t y = 0; y < size_; ++y) {
      d_[x * size_ + y] = view.dist(static_cast<TerminalId>(x), static_cast<TerminalId>(y));
    }
  }
}

void ContractedDistances::contract(TerminalId a, TerminalId b) {
  if (exec_ == Exec::parallel) {
    contract_parallel(d_, size_, a, b, col_a_, col_b_);
  } else {
    contract_serial(d_, size_, a, b, col_a_, col_b_);
  }
}

void contract_serial(std::vector<Dist>& d, std::size_t size, TerminalId a, TerminalId b,
                     std::vector<Dist>& col_a, std::vector<Dist>& col_b) {
  col_a.resize(size);
  col_b.resize(size);
  for (std::size_t x = 0; x < size; ++x) {
    col_a[x] = d[x * size + a];
    col_b[x] = d[x * size + b];
  }
  for (std::size_t x = 0; x < size; ++x) {
    Dist* row = d.data() + x * size;
    const Dist xa = col_a[x];
    const Dist xb = col_b[x];
    for (std::size_t y = 0; y < size; ++y) {
      const Dist via = std::min(xa + col_b[y], xb + col_a[y]);
      if (via < row[y]) row[y] = via;
    }
  }
}

void contract_parallel(std::vector<Dist>& d, std::size_t size, TerminalId a, TerminalId b,
                       std::vector<Dist>& col_a, std::vector<Dist>& col_b) {
  col_a.resize(size);
  col_b.resize(size);
  for (std::size_t x = 0; x < size; ++x) {
    col_a[x] = d[x * size + a];
    col_b[x] = d[x * size + b];
  }
  const auto rows = static_cast<long long>(size);
  Dist* base = d.data();
  const Dist* ca = col_a.data();
  const Dist* cb = col_b.data();
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (long long x = 0; x < rows; ++x) {
    Dist* row = base + x * rows;
    const Dist xa = ca[x];
    const Dist xb = cb[x];
#pragma omp simd
    for (std::size_t y = 0; y < size; ++y) {
      const Dist via = std::min(xa + cb[y], xb + ca[y]);
      row[y] = std::min(row[y], via);
    }
  }
}

namespace {

constexpr Dist kNoEdge = std::numeric_limits<Dist>::max();

bool better(Dist w, const Edge& e, Dist best_w, const Edge& best_e) {
  return w < best_w || (w == best_w && e < best_e);
}

CrossEdges empty_cross(std::size_t groups) {
  CrossEdges out;
  out.groups = groups;
  out.weight.assign(groups * groups, kNoEdge);
  out.argmin.assign(groups * groups, Edge{});
  return out;
}

}  // namespace

CrossEdges cross_edges_serial(const InstanceView& view, std::span<const std::size_t> group,
                              std::size_t groups) {
  CrossEdges out = empty_cross(groups);
  const std::size_t size = view.terminal_count();
  // Scanning (x, y) with x < y in lexicographic order visits candidate edges in
  // canonical order, so a strict improvement keeps the smallest tied edge.
  for (std::size_t x = 0; x < size; ++x) {
    for (std::size_t y = x + 1; y < size; ++y) {
      const std::size_t p = group[x];
      const std::size_t q = group[y];
      if (p == q) continue;
      const Dist w = view.dist(static_cast<TerminalId>(x), static_cast<TerminalId>(y));
      if (w < out.weight[p * groups + q]) {
        const Edge e{static_cast<TerminalId>(x), static_cast<TerminalId>(y)};
        out.weight[p * groups + q] = out.weight[q * groups + p] = w;
        out.argmin[p * groups + q] = out.argmin[q * groups + p] = e;
      }
    }
  }
  return out;
}

CrossEdges cross_edges_parallel(const InstanceView& view, std::span<const std::size_t> group,
                                std::size_t groups) {
  CrossEdges out = empty_cross(groups);
  const std::size_t size = view.terminal_count();
  std::vector<std::vector<TerminalId>> members(groups);
  for (std::size_t x = 0; x < size; ++x) members[group[x]].push_back(static_cast<TerminalId>(x));

  const auto rows = static_cast<long long>(groups);
#pragma omp parallel for schedule(dynamic, 4) if (size >= kParallelThreshold)
  for (long long p = 0; p < rows; ++p) {
    for (std::size_t q = static_cast<std::size_t>(p) + 1; q < groups; ++q) {
      Dist best_w = kNoEdge;
      Edge best_e{};
      for (TerminalId x : members[p]) {
        for (TerminalId y : members[q]) {
          const Edge e = make_edge(x, y);
          const Dist w = view.dist(x, y);
          if (better(w, e, best_w, best_e)) {
            best_w = w;
            best_e = e;
          }
        }
      }
      out.weight[p * groups + q] = out.weight[q * groups + p] = best_w;
      out.argmin[p * groups + q] = out.argmin[q * groups + p] = best_e;
    }
  }
  return out;
}

CrossEdges cross_edges(const InstanceView& view, std::span<const std::size_t> group,
                       std::size_t groups, Exec exec) {
  return exec == Exec::parallel ? cross_edges_parallel(view, group, groups)
                                : cross_edges_serial(view, group, groups);
}

std::vector<Dist> group_apsp_reference(const InstanceView& view,
                                       std::span<const std::size_t> group, std::size_t groups) {
  const CrossEdges cross = cross_edges_serial(view, group, groups);
  std::vector<Dist> d(groups * groups);
  for (std::size_t p = 0; p < groups; ++p) {
    for (std::size_t q = 0; q < groups; ++q) d[p * groups + q] = p == q ? 0 : cross.w(p, q);
  }
  for (std::size_t k = 0; k < groups; ++k) {
    for (std::size_t p = 0; p < groups; ++p) {
      const Dist pk = d[p * groups + k];
      if (pk == kNoEdge) continue;
      for (std::size_t q = 0; q < groups; ++q) {
        const Dist kq = d[k * groups + q];
        if (kq == kNoEdge) continue;
        if (pk + kq < d[p * groups + q]) d[p * groups + q] = pk + kq;
      }
    }
  }
  return d;
}

}  // namespace sfo
