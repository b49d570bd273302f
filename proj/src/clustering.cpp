#include "sfo/clustering.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <ostream>
#include <sstream>

#include "sfo/error.hpp"
#include "sfo/union_find.hpp"

namespace sfo {

namespace {
constexpr std::size_t kNpos = std::numeric_limits<std::size_t>::max();
}

int ceil_log2(Dist d) {
  ensure(d >= 1, "ceil_log2 of a non-positive distance");
  return d == 1 ? 0 : static_cast<int>(std::bit_width(static_cast<std::uint64_t>(d - 1)));
}

int terminal_level(const InstanceView& view, TerminalId v) {
  ensure(view.contains(v), "terminal has not arrived");
  return ceil_log2(view.dist(v, mate(v)));
}

std::vector<int> terminal_levels(const InstanceView& view) {
  std::vector<int> out(view.terminal_count());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = terminal_level(view, static_cast<TerminalId>(v));
  return out;
}

bool below_pow2(Dist d, int k) {
  if (k >= 62) return true;  // every admissible distance is <= 2^61
  return d < (Dist{1} << k);
}

Clustering Clustering::from_labels(int level_index, std::span<const std::size_t> label,
                                   std::span<const int> terminal_level) {
  const std::size_t size = label.size();
  ensure(terminal_level.size() >= size, "missing terminal levels");
  Clustering c;
  c.level_index_ = level_index;
  c.assignment_.resize(size);
  c.index_of_.assign(size, kNpos);

  std::vector<std::size_t> first_of_label(size, kNpos);
  for (std::size_t v = 0; v < size; ++v) {
    ensure(label[v] < size, "cluster label out of range");
    if (first_of_label[label[v]] == kNpos) {
      first_of_label[label[v]] = v;
      c.index_of_[v] = c.clusters_.size();
      c.clusters_.push_back(Cluster{static_cast<ClusterId>(v), {}, 0});
    }
    const auto id = static_cast<ClusterId>(first_of_label[label[v]]);
    c.assignment_[v] = id;
    Cluster& cl = c.clusters_[c.index_of_[id]];
    if (cl.members.empty()) {
      cl.level = terminal_level[v];
    } else {
      cl.level = std::max(cl.level, terminal_level[v]);
    }
    cl.members.push_back(static_cast<TerminalId>(v));
  }
  return c;
}

Clustering Clustering::trivial(int level_index, std::span<const int> terminal_level) {
  std::vector<std::size_t> label(terminal_level.size());
  for (std::size_t v = 0; v < label.size(); ++v) label[v] = v;
  return from_labels(level_index, label, terminal_level);
}

bool Clustering::has_cluster(ClusterId id) const {
  return id < index_of_.size() && index_of_[id] != kNpos;
}

const Cluster& Clustering::cluster(ClusterId id) const {
  if (!has_cluster(id)) {
    throw Error(ErrorCode::config, "terminal " + std::to_string(id) + " does not name a cluster");
  }
  return clusters_[index_of_[id]];
}

std::size_t Clustering::index_of_cluster(ClusterId id) const {
  cluster(id);
  return index_of_[id];
}

std::size_t Clustering::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(clusters_.begin(), clusters_.end(), [this](const Cluster& c) { return active(c); }));
}

Clustering contract_over(const Clustering& base, std::span<const Edge> links, int level_index,
                         std::span<const int> terminal_level) {
  const std::size_t size = base.terminal_count();
  DisjointSet sets(size);
  for (std::size_t v = 0; v < size; ++v) sets.unite(v, base.cluster_of(static_cast<TerminalId>(v)));
  for (const Edge& e : links) {
    ensure(e.a < size && e.b < size, "contraction link outside the clustering");
    sets.unite(e.a, e.b);
  }
  std::vector<std::size_t> label(size);
  for (std::size_t v = 0; v < size; ++v) label[v] = sets.find(v);
  return Clustering::from_labels(level_index, label, terminal_level);
}

const Clustering& Hierarchy::at(int i) const {
  ensure(i >= 0, "negative level");
  const auto top_index = static_cast<int>(levels.size()) - 1;
  return levels[static_cast<std::size_t>(std::min(i, top_index))];
}

std::span<const VirtualGraphEdge> Hierarchy::virtual_graph(int i) const {
  if (i < 0 || i > max_level) return {};
  return virtual_graphs[static_cast<std::size_t>(i)];
}

ClusterPath cluster_distance(const InstanceView& view, const Clustering& clustering,
                             std::span<const Edge> contracted_by, ClusterId c1, ClusterId c2,
                             Exec exec) {
  if (!clustering.has_cluster(c1) || !clustering.has_cluster(c2)) {
    throw Error(ErrorCode::config, "cluster_distance endpoints must be clusters of the clustering");
  }
  ContractedGraph graph(view, clustering.assignment(), contracted_by, exec);
  return graph.shortest_path(c1, c2);
}

std::vector<VirtualGraphEdge> virtual_graph(const InstanceView& view, const Clustering& clustering) {
  const auto& clusters = clustering.clusters();
  std::vector<std::size_t> group(clustering.terminal_count());
  for (std::size_t p = 0; p < clusters.size(); ++p) {
    for (TerminalId v : clusters[p].members) group[v] = p;
  }
  const auto d = group_apsp_reference(view, group, clusters.size());
  const int i = clustering.level_index();
  std::vector<VirtualGraphEdge> edges;
  for (std::size_t p = 0; p < clusters.size(); ++p) {
    if (!clustering.active(clusters[p])) continue;
    for (std::size_t q = p + 1; q < clusters.size(); ++q) {
      if (!clustering.active(clusters[q])) continue;
      const Dist dist = d[p * clusters.size() + q];
      if (below_pow2(dist, i + 1)) edges.push_back({clusters[p].id, clusters[q].id, dist});
    }
  }
  return edges;
}

Hierarchy build_hierarchy(const InstanceView& view, Exec exec) {
  ensure(view.arrivals() >= 1, "hierarchy needs at least one arrival");
  Hierarchy h;
  h.t = view.arrivals();
  h.levels_of_terminals = terminal_levels(view);
  h.max_level = *std::max_element(h.levels_of_terminals.begin(), h.levels_of_terminals.end());
  const std::size_t size = view.terminal_count();

  ContractedDistances dist(view, exec);
  h.levels.push_back(Clustering::trivial(0, h.levels_of_terminals));

  for (int i = 0; i <= h.max_level; ++i) {
    const Clustering& cur = h.levels.back();
    const auto& clusters = cur.clusters();
    std::vector<std::size_t> active;
    for (std::size_t p = 0; p < clusters.size(); ++p) {
      if (cur.active(clusters[p])) active.push_back(p);
    }

    std::vector<VirtualGraphEdge> edges;
    DisjointSet sets(clusters.size());
    std::vector<Edge> merges;
    for (std::size_t x = 0; x < active.size(); ++x) {
      const ClusterId a = clusters[active[x]].id;
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const ClusterId b = clusters[active[y]].id;
        const Dist d = dist(a, b);
        if (!below_pow2(d, i + 1)) continue;
        edges.push_back({a, b, d});
        if (sets.unite(active[x], active[y])) merges.push_back({a, b});
      }
    }
    for (const Edge& m : merges) dist.contract(m.a, m.b);

    std::vector<std::size_t> label(size);
    for (std::size_t v = 0; v < size; ++v) {
      const std::size_t p = sets.find(cur.index_of_cluster(cur.cluster_of(static_cast<TerminalId>(v))));
      label[v] = clusters[p].id;
    }
    h.virtual_graphs.push_back(std::move(edges));
    h.levels.push_back(Clustering::from_labels(i + 1, label, h.levels_of_terminals));
  }
  return h;
}

bool check_refinement(const Clustering& fine, const Clustering& coarse) {
  if (fine.terminal_count() > coarse.terminal_count()) {
    throw Error(ErrorCode::config, "refinement check: fine clustering covers terminals the coarse one lacks");
  }
  for (const Cluster& c : fine.clusters()) {
    const ClusterId target = coarse.cluster_of(c.members.front());
    for (TerminalId v : c.members) {
      if (coarse.cluster_of(v) != target) return false;
    }
  }
  return true;
}

std::string dump_clustering_line(const Clustering& c) {
  std::ostringstream os;
  os << c.level_index();
  for (const Cluster& cl : c.clusters()) {
    os << " | " << cl.id << ':';
    for (TerminalId v : cl.members) os << ' ' << v;
    os << (c.active(cl) ? " [active]" : " [inactive]");
  }
  return os.str();
}

void dump_hierarchy(const Hierarchy& h, std::ostream& out) {
  for (const Clustering& c : h.levels) out << dump_clustering_line(c) << '\n';
}

Clustering parse_clustering_line(const std::string& line, std::span<const int> terminal_level) {
  auto bad = [&line](const std::string& why) {
    return Error(ErrorCode::format_header, "hierarchy line '" + line + "': " + why);
  };
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(" | ", start);
    parts.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 3;
  }
  int level_index = -1;
  try {
    level_index = std::stoi(parts.front());
  } catch (const std::exception&) {
    throw bad("missing level index");
  }
  const std::size_t size = terminal_level.size();
  std::vector<std::size_t> label(size, kNpos);
  std::vector<std::pair<ClusterId, bool>> expect_active;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    std::istringstream is(parts[k]);
    std::string head;
    is >> head;
    if (head.empty() || head.back() != ':') throw bad("expected 'id:'");
    std::string token;
    std::vector<TerminalId> members;
    bool flag_seen = false;
    while (is >> token) {
      if (token == "[active]" || token == "[inactive]") {
        if (members.empty()) throw bad("empty cluster");
        expect_active.emplace_back(*std::min_element(members.begin(), members.end()),
                                   token == "[active]");
        flag_seen = true;
        break;
      }
      const auto v = std::stoul(token);
      if (v >= size || label[v] != kNpos) throw bad("bad member " + token);
      members.push_back(static_cast<TerminalId>(v));
    }
    if (!flag_seen || members.empty()) throw bad("incomplete cluster");
    for (TerminalId v : members) label[v] = expect_active.back().first;
  }
  for (std::size_t v = 0; v < size; ++v) {
    if (label[v] == kNpos) throw bad("terminal " + std::to_string(v) + " missing");
  }
  Clustering c = Clustering::from_labels(level_index, label, terminal_level);
  if (expect_active.size() != c.size()) throw bad("cluster count mismatch");
  for (const auto& [id, flag] : expect_active) {
    if (c.active(c.cluster(id)) != flag) throw bad("activity flag mismatch");
  }
  return c;
}

}  // namespace sfo
