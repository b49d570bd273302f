#include "sfo/online_forest.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "sfo/contracted_graph.hpp"
#include "sfo/error.hpp"

namespace sfo {

std::vector<InheritedEdge> classify_inheritance(const LevelForest* prev, const Clustering* prev_ci,
                                                std::span<const VirtualGraphEdge> h_i,
                                                const Clustering& new_ci) {
  std::vector<InheritedEdge> out;
  if (prev == nullptr || prev->edges.empty()) return out;
  ensure(prev_ci != nullptr, "previous forest without previous clustering");
  if (!check_refinement(*prev_ci, new_ci)) {
    throw Error(ErrorCode::invariant, "previous C_i does not refine the new C_i");
  }

  std::set<std::pair<ClusterId, ClusterId>> in_h;
  for (const auto& e : h_i) in_h.emplace(e.a, e.b);

  // Visiting parents in canonical order makes the first hit the parent.
  std::vector<std::size_t> order(prev->edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [prev](std::size_t x, std::size_t y) {
    const auto& ex = prev->edges[x];
    const auto& ey = prev->edges[y];
    return std::pair(ex.a, ex.b) < std::pair(ey.a, ey.b);
  });

  std::map<std::pair<ClusterId, ClusterId>, std::size_t> image;
  for (std::size_t idx : order) {
    const auto& e = prev->edges[idx];
    ClusterId d1 = new_ci.cluster_of(e.a);
    ClusterId d2 = new_ci.cluster_of(e.b);
    if (d1 == d2) continue;  // non-inheritable
    if (d1 > d2) std::swap(d1, d2);
    if (in_h.count({d1, d2}) == 0) {
      throw Error(ErrorCode::invariant, "inheritable edge has no image in the new virtual graph");
    }
    image.try_emplace({d1, d2}, idx);
  }
  for (const auto& [ends, parent] : image) out.push_back({ends.first, ends.second, parent});
  return out;
}

LevelForest select_spanning_forest(int level, std::span<const VirtualGraphEdge> h_i,
                                   std::span<const InheritedEdge> inherited, const Clustering& ci,
                                   std::span<const int> terminal_level) {
  LevelForest out;
  DisjointSet sets(ci.terminal_count());
  std::set<std::pair<ClusterId, ClusterId>> inherited_ends;

  std::vector<InheritedEdge> inh(inherited.begin(), inherited.end());
  std::sort(inh.begin(), inh.end(),
            [](const auto& x, const auto& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  std::vector<Edge> inh_links;
  for (const auto& e : inh) {
    inherited_ends.emplace(e.a, e.b);
    if (!sets.unite(e.a, e.b)) continue;
    VirtualEdge ve;
    ve.level = level;
    ve.a = e.a;
    ve.b = e.b;
    ve.inherited = true;
    ve.parent = e.parent;
    out.edges.push_back(std::move(ve));
    inh_links.push_back({e.a, e.b});
  }
  out.inherited_count = out.edges.size();
  out.inh_clustering = contract_over(ci, inh_links, level, terminal_level);

  std::vector<VirtualGraphEdge> rest(h_i.begin(), h_i.end());
  std::sort(rest.begin(), rest.end(),
            [](const auto& x, const auto& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  for (const auto& e : rest) {
    if (inherited_ends.count({e.a, e.b}) != 0) continue;
    if (!sets.unite(e.a, e.b)) continue;
    VirtualEdge ve;
    ve.level = level;
    ve.a = e.a;
    ve.b = e.b;
    out.edges.push_back(std::move(ve));
  }
  return out;
}

void PinnedSet::pin(const Edge& e, std::size_t arrival, int level, PinKind kind) {
  if (forest_.size() <= e.b) {
    DisjointSet grown(e.b + 1);
    for (const auto& p : entries_) grown.unite(p.edge.a, p.edge.b);
    forest_ = std::move(grown);
  }
  if (!forest_.unite(e.a, e.b)) {
    throw Error(ErrorCode::invariant, "pinning (" + std::to_string(e.a) + "," +
                                          std::to_string(e.b) + ") would close a cycle in A");
  }
  members_.insert(e);
  entries_.push_back({e, arrival, level, kind});
}

namespace {

std::vector<Edge> cheapest(const InstanceView& view, std::vector<Edge> edges, std::size_t k) {
  std::sort(edges.begin(), edges.end(), [&view](const Edge& x, const Edge& y) {
    const Dist cx = view.cost(x);
    const Dist cy = view.cost(y);
    return cx != cy ? cx < cy : x < y;
  });
  edges.resize(std::min(k, edges.size()));
  return edges;
}

}  // namespace

RealizeResult pin_and_realize(const InstanceView& view, const Hierarchy& h, VirtualForest& forest,
                              PinnedSet& pinned, std::size_t lambda, std::size_t arrival, Exec exec) {
  ensure(lambda >= 1, "lambda must be at least 1");
  RealizeResult result;
  std::vector<Edge> buffer;  // multiset B

  for (std::size_t li = 0; li < forest.levels.size(); ++li) {
    const int level = static_cast<int>(li);
    LevelForest& lf = forest.levels[li];
    std::optional<ContractedGraph> graph;
    std::size_t graph_pins = 0;

    for (std::size_t k = lf.inherited_count; k < lf.edges.size(); ++k) {
      VirtualEdge& ve = lf.edges[k];
      // A may have grown since the graph was built.
      if (!graph || graph_pins != pinned.size()) {
        const auto a_edges = pinned.edges();
        graph.emplace(view, h.at(level).assignment(), a_edges, exec);
        graph_pins = pinned.size();
      }
      ClusterPath path = graph->shortest_path(ve.a, ve.b);
      ve.e_orig = std::move(path.edges);
      std::sort(ve.e_orig.begin(), ve.e_orig.end());
      ve.origin = arrival;

      const std::size_t size = ve.e_orig.size();
      if (size >= lambda) {
        const auto chosen = cheapest(view, ve.e_orig, size / lambda);
        PinEvent ev{arrival, level, PinKind::batch, size, chosen.size(), 0};
        for (const Edge& e : chosen) {
          pinned.pin(e, arrival, level, PinKind::batch);
          ev.cost += view.cost(e);
        }
        result.events.push_back(ev);
        buffer.clear();
      } else {
        buffer.insert(buffer.end(), ve.e_orig.begin(), ve.e_orig.end());
        result.buffer_peak = std::max(result.buffer_peak, buffer.size());
        if (buffer.size() >= lambda) {
          const auto chosen = cheapest(view, buffer, 1);
          pinned.pin(chosen.front(), arrival, level, PinKind::single);
          result.events.push_back(
              {arrival, level, PinKind::single, buffer.size(), 1, view.cost(chosen.front())});
          buffer.clear();
        }
      }
    }
  }
  result.buffer_end = buffer.size();
  return result;
}

std::pair<std::size_t, std::size_t> recourse_diff(std::span<const Edge> prev, std::span<const Edge> now) {
  std::size_t common = 0;
  auto p = prev.begin();
  auto q = now.begin();
  while (p != prev.end() && q != now.end()) {
    if (*p < *q) {
      ++p;
    } else if (*q < *p) {
      ++q;
    } else {
      ++common;
      ++p;
      ++q;
    }
  }
  return {now.size() - common, prev.size() - common};
}

OnlineState::OnlineState(const Instance& instance, std::size_t lambda, Exec exec)
    : instance_(&instance), lambda_(lambda), exec_(exec), pinned_(instance.terminal_count()) {
  if (lambda < 1) throw Error(ErrorCode::config, "lambda must be at least 1");
}

ArrivalRecord OnlineState::advance(const Demand& next) {
  if (t_ >= instance_->n) throw Error(ErrorCode::config, "all pairs have already arrived");
  if (!(instance_->demands[t_] == next)) {
    throw Error(ErrorCode::config, "pair (" + std::to_string(next.u) + "," + std::to_string(next.v) +
                                       ") does not match demand " + std::to_string(t_ + 1));
  }
  const std::size_t t = t_ + 1;
  const InstanceView view(*instance_, t);
  Hierarchy h = build_hierarchy(view, exec_);

  VirtualForest forest;
  forest.levels.reserve(static_cast<std::size_t>(h.max_level) + 1);
  for (int i = 0; i <= h.max_level; ++i) {
    const bool has_prev = t > 1 && i <= hierarchy_.max_level;
    const LevelForest* prev = has_prev ? &forest_.levels[static_cast<std::size_t>(i)] : nullptr;
    const Clustering* prev_ci = t > 1 ? &hierarchy_.at(i) : nullptr;
    const auto inherited = classify_inheritance(prev, prev_ci, h.virtual_graph(i), h.at(i));
    LevelForest lf = select_spanning_forest(i, h.virtual_graph(i), inherited, h.at(i),
                                            h.levels_of_terminals);
    for (std::size_t k = 0; k < lf.inherited_count; ++k) {
      VirtualEdge& ve = lf.edges[k];
      const VirtualEdge& parent = prev->edges[ve.parent];
      ve.e_orig = parent.e_orig;
      ve.origin = parent.origin;
    }
    forest.levels.push_back(std::move(lf));
  }

  RealizeResult realized = pin_and_realize(view, h, forest, pinned_, lambda_, t, exec_);

  ArrivalRecord rec;
  rec.t = t;
  rec.pinned = pinned_.edges();
  std::vector<Edge> f = rec.pinned;
  for (const auto& lf : forest.levels) {
    for (const auto& ve : lf.edges) {
      f.insert(f.end(), ve.e_orig.begin(), ve.e_orig.end());
      rec.cost_forest_forming += edge_cost(view, ve.e_orig);
    }
  }
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());

  const auto [ins, del] = recourse_diff(snapshot_.edges, f);
  cum_insertions_ += ins;
  cum_deletions_ += del;

  snapshot_.t = t;
  snapshot_.cost = edge_cost(view, f);
  snapshot_.edges = std::move(f);

  rec.snapshot = snapshot_;
  rec.cost_pinned = edge_cost(view, rec.pinned);
  rec.ledger = {t, ins, del, cum_insertions_, cum_deletions_, pinned_.size(),
                realized.buffer_end, realized.buffer_peak};
  rec.pin_events = std::move(realized.events);
  rec.hierarchy = h;
  rec.forest = forest;

  hierarchy_ = std::move(h);
  forest_ = std::move(forest);
  t_ = t;
  return rec;
}

RunTrace run_online(const Instance& instance, std::size_t lambda, Exec exec) {
  RunTrace trace;
  trace.instance = &instance;
  trace.lambda = lambda;
  OnlineState state(instance, lambda, exec);
  for (const Demand& d : instance.demands) trace.arrivals.push_back(state.advance(d));
  return trace;
}

}  // namespace sfo
