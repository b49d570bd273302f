#include "sfo/certify.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "sfo/error.hpp"
#include "sfo/kernels.hpp"
#include "sfo/union_find.hpp"

namespace sfo {

namespace {

using Status = CheckResult::Status;

const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::info: return "info";
  }
  return "?";
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string ratio(Dist num, Dist den) {
  return den == 0 ? std::string() : fixed6(static_cast<double>(num) / static_cast<double>(den));
}

template <class Range>
std::string join_ids(const Range& ids) {
  std::ostringstream os;
  bool first = true;
  for (const auto& v : ids) {
    if (!first) os << ' ';
    os << v;
    first = false;
  }
  return os.str();
}

class Recorder {
 public:
  explicit Recorder(CertReport& report) : report_(report) {}

  void check(bool ok, std::string name, int level, std::size_t arrival, std::string value = {},
             std::string detail = {}) {
    report_.add({std::move(name), level, arrival, ok ? Status::pass : Status::fail,
                 std::move(value), ok ? std::string() : std::move(detail)});
  }
  void info(std::string name, int level, std::size_t arrival, std::string value) {
    report_.add({std::move(name), level, arrival, Status::info, std::move(value), {}});
  }

 private:
  CertReport& report_;
};

std::vector<std::size_t> group_of(const Clustering& c) {
  std::vector<std::size_t> group(c.terminal_count());
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (TerminalId v : c.clusters()[p].members) group[v] = p;
  }
  return group;
}

}  // namespace

bool CertReport::ok() const { return failures() == 0; }

std::size_t CertReport::failures() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                [](const auto& e) { return e.status == Status::fail; }));
}

void CertReport::write_csv(std::ostream& out) const {
  out << "check,level,arrival,status,value\n";
  for (const auto& e : entries) {
    out << e.check << ',';
    if (e.level >= 0) out << e.level;
    out << ',';
    if (e.arrival > 0) out << e.arrival;
    out << ',' << status_name(e.status) << ',' << e.value << '\n';
  }
}

void CertReport::write_summary(std::ostream& out) const {
  struct Tally {
    std::size_t pass = 0, fail = 0;
  };
  std::map<std::string, Tally> tally;
  for (const auto& e : entries) {
    if (e.status == Status::pass) ++tally[e.check].pass;
    if (e.status == Status::fail) ++tally[e.check].fail;
  }
  out << "instance " << instance_hash << '\n';
  out << (ok() ? "CERTIFIED" : "FAILED") << " (" << failures() << " failing check(s))\n";
  for (const auto& [name, t] : tally) {
    out << "  " << (t.fail == 0 ? "ok  " : "FAIL") << ' ' << name << "  pass=" << t.pass
        << " fail=" << t.fail << '\n';
  }
  std::size_t shown = 0;
  for (const auto& e : entries) {
    if (e.status != Status::fail || shown >= 20) continue;
    ++shown;
    out << "  first failure: " << e.check << " instance=" << instance_hash << " arrival=" << e.arrival
        << " level=" << e.level << ": " << e.detail << '\n';
  }
  bool header = false;
  for (const auto& e : entries) {
    if (e.status != Status::info || e.arrival != 0) continue;
    if (!header) {
      out << "measured:\n";
      header = true;
    }
    out << "  " << e.check;
    if (e.level >= 0) out << "[level " << e.level << "]";
    out << " = " << e.value << '\n';
  }
}

std::string instance_hash(const Instance& inst) {
  std::ostringstream os;
  save_instance(inst, os);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool check_feasible(std::span<const Edge> edges, std::span<const Demand> demands,
                    std::size_t terminal_count) {
  DisjointSet sets(terminal_count);
  for (const Edge& e : edges) {
    if (e.a >= terminal_count || e.b >= terminal_count) return false;
    sets.unite(e.a, e.b);
  }
  for (const Demand& d : demands) {
    if (d.u >= terminal_count || d.v >= terminal_count || !sets.same(d.u, d.v)) return false;
  }
  return true;
}

bool check_pinned_forest(std::span<const Edge> pinned, std::size_t terminal_count) {
  if (terminal_count == 0) return pinned.empty();
  if (pinned.size() > terminal_count - 1) return false;
  DisjointSet sets(terminal_count);
  for (const Edge& e : pinned) {
    if (e.a >= terminal_count || e.b >= terminal_count) return false;
    if (!sets.unite(e.a, e.b)) return false;
  }
  return true;
}

Radius witness_radius(int level) {
  ensure(level >= 0 && level <= kMaxLevel, "witness level out of range");
  return level == 0 ? Radius{1, 2} : Radius{Dist{1} << (level - 1), 1};
}

WitnessState build_dual_witness(const RunTrace& trace, int level) {
  ensure(trace.instance != nullptr, "trace without instance");
  WitnessState w;
  w.level = level;
  w.radius = witness_radius(level);
  const int i = level;
  const Dist min_gap = Dist{1} << std::min(i, kMaxLevel);  // 2r = 2^i

  std::set<TerminalId> x_hat, x;
  for (const ArrivalRecord& rec : trace.arrivals) {
    const std::size_t t = rec.t;
    const InstanceView view(*trace.instance, t);
    const Hierarchy& h = rec.hierarchy;
    const auto& lvl = h.levels_of_terminals;
    const bool in_range = i <= h.max_level;
    const Clustering& c_inh = in_range ? rec.forest.levels[static_cast<std::size_t>(i)].inh_clustering
                                       : h.at(i);
    const Clustering& c_next = h.at(i + 1);
    std::size_t non_inherited = in_range ? rec.forest.levels[static_cast<std::size_t>(i)].non_inherited_count() : 0;
    w.non_inherited_total += non_inherited;

    auto high_count = [&](const Cluster& c) {
      return static_cast<std::size_t>(
          std::count_if(c.members.begin(), c.members.end(), [&](TerminalId v) { return lvl[v] >= i; }));
    };

    // X-hat.
    const Demand& pair = view.demand(t);
    if (lvl[pair.u] >= i) {
      const Cluster& cu = c_inh.cluster(c_inh.cluster_of(pair.u));
      const Cluster& cv = c_inh.cluster(c_inh.cluster_of(pair.v));
      if (cu.id == cv.id) {
        if (high_count(cu) == 2) x_hat.insert(pair.u);
      } else {
        if (high_count(cu) == 1) x_hat.insert(pair.u);
        if (high_count(cv) == 1) x_hat.insert(pair.v);
      }
    }

    // X: per i-active C_{i+1} cluster made of k i-active C_inh clusters, add k-1.
    const std::set<TerminalId> x_prev = x;
    for (const Cluster& c : c_next.clusters()) {
      if (c.level < i) continue;
      std::set<ClusterId> parts;
      for (TerminalId v : c.members) {
        const ClusterId part = c_inh.cluster_of(v);
        if (c_inh.cluster(part).level >= i) parts.insert(part);
      }
      const std::size_t need = parts.empty() ? 0 : parts.size() - 1;
      std::size_t added = 0;
      for (TerminalId v : c.members) {  // ascending ids
        if (added == need) break;
        if (x_hat.count(v) != 0 && x_prev.count(v) == 0) {
          x.insert(v);
          ++added;
        }
      }
      if (added < need) {
        w.violations.push_back({"witness_construction", i, t, Status::fail, {},
                                "cluster " + std::to_string(c.id) + " needs " + std::to_string(need) +
                                    " fresh X-hat vertices, found " + std::to_string(added)});
      }
    }

    // Witness invariants.
    auto fail = [&](const std::string& which, const std::string& why) {
      std::ostringstream dump;
      dump << why << "; X-hat={" << join_ids(x_hat) << "} X={" << join_ids(x) << "}";
      w.violations.push_back({which, i, t, Status::fail, {}, dump.str()});
    };
    for (TerminalId v : x_hat) {
      if (c_next.cluster(c_next.cluster_of(v)).level < i) {
        fail("witness_in_active", "vertex " + std::to_string(v) + " outside active clusters");
      }
    }
    for (auto p = x_hat.begin(); p != x_hat.end(); ++p) {
      for (auto q = std::next(p); q != x_hat.end(); ++q) {
        if (view.dist(*p, *q) < min_gap) {
          fail("witness_separation", "vertices " + std::to_string(*p) + "," + std::to_string(*q) +
                                         " closer than 2r");
        }
      }
    }
    for (TerminalId v : x) {
      if (x_hat.count(v) == 0) fail("witness_spare", "X vertex " + std::to_string(v) + " not in X-hat");
    }
    for (const Cluster& c : c_next.clusters()) {
      if (c.level < i) continue;
      const bool spare = std::any_of(c.members.begin(), c.members.end(),
                                     [&](TerminalId v) { return x_hat.count(v) && !x.count(v); });
      if (!spare) fail("witness_spare", "cluster " + std::to_string(c.id) + " has no spare X-hat vertex");
    }
    if (x.size() != w.non_inherited_total) {
      fail("witness_count", "|X|=" + std::to_string(x.size()) + " but non-inherited total=" +
                                     std::to_string(w.non_inherited_total));
    }

    w.steps.push_back({t, {x_hat.begin(), x_hat.end()}, {x.begin(), x.end()}});
  }
  return w;
}

Dist DualSolution::total_scaled() const {
  Dist total = 0;
  for (const auto& [cut, value] : y) total += value;
  return total;
}

DualSolution grow_balls(const InstanceView& view, std::span<const TerminalId> sources, Radius r) {
  DualSolution dual;
  dual.radius = r;
  dual.sources.assign(sources.begin(), sources.end());
  std::sort(dual.sources.begin(), dual.sources.end());
  for (std::size_t p = 0; p < dual.sources.size(); ++p) {
    for (std::size_t q = p + 1; q < dual.sources.size(); ++q) {
      if (view.dist(dual.sources[p], dual.sources[q]) * r.den < 2 * r.num) {
        throw Error(ErrorCode::config, "ball sources " + std::to_string(dual.sources[p]) + " and " +
                                           std::to_string(dual.sources[q]) + " are closer than 2r");
      }
    }
  }
  const std::size_t m = view.terminal_count();
  constexpr Dist kInf = std::numeric_limits<Dist>::max();
  for (TerminalId v : dual.sources) {
    std::vector<TerminalId> order(m);
    for (std::size_t u = 0; u < m; ++u) order[u] = static_cast<TerminalId>(u);
    std::sort(order.begin(), order.end(), [&](TerminalId a, TerminalId b) {
      const Dist da = view.dist(v, a);
      const Dist db = view.dist(v, b);
      return da != db ? da < db : a < b;
    });
    std::vector<TerminalId> prefix;
    for (std::size_t j = 0; j < m; ++j) {
      prefix.push_back(order[j]);
      const Dist here = view.dist(v, order[j]) * r.den;
      if (here > r.num) break;
      const Dist next = j + 1 < m ? view.dist(v, order[j + 1]) * r.den : kInf;
      const Dist inc = std::min(next, r.num) - here;
      if (inc <= 0) continue;
      std::vector<TerminalId> cut = prefix;
      std::sort(cut.begin(), cut.end());
      dual.y[cut] += inc;
    }
  }
  return dual;
}

CheckResult check_dual_feasibility(const DualSolution& dual, const InstanceView& view,
                                   const Clustering& top) {
  CheckResult res{"dual_feasible", -1, 0, Status::pass, {}, {}};
  const std::size_t m = view.terminal_count();
  std::vector<std::vector<char>> inside;
  std::vector<Dist> value;
  for (const auto& [cut, y] : dual.y) {
    if (y <= 0) continue;
    std::vector<char> mask(m, 0);
    for (TerminalId v : cut) mask[v] = 1;
    // (b) the cut must split some top-level cluster.
    const bool separates = std::any_of(top.clusters().begin(), top.clusters().end(), [&](const Cluster& c) {
      bool in = false, out = false;
      for (TerminalId v : c.members) (mask[v] ? in : out) = true;
      return in && out;
    });
    if (!separates && res.status == Status::pass) {
      res.status = Status::fail;
      res.detail = "cut {" + join_ids(cut) + "} separates no top-level cluster";
    }
    inside.push_back(std::move(mask));
    value.push_back(y);
  }
  // (a) load on every original edge <= cost (both sides scaled by den).
  std::size_t tight = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      Dist load = 0;
      for (std::size_t k = 0; k < inside.size(); ++k) {
        if (inside[k][a] != inside[k][b]) load += value[k];
      }
      const Dist cap = view.dist(static_cast<TerminalId>(a), static_cast<TerminalId>(b)) * dual.radius.den;
      if (load == cap) ++tight;
      if (load > cap && res.status == Status::pass) {
        res.status = Status::fail;
        res.detail = "edge (" + std::to_string(a) + "," + std::to_string(b) + ") load " +
                     std::to_string(load) + "/" + std::to_string(dual.radius.den) + " exceeds cost";
      }
    }
  }
  res.value = std::to_string(tight);
  return res;
}

CheckResult witness_value_identity(const WitnessState& witness, const RunTrace& trace, int level) {
  CheckResult res{"value_identity", level, 0, Status::pass, {}, {}};
  const std::size_t n = trace.arrivals.size();
  ensure(n > 0, "empty trace");
  const InstanceView view(*trace.instance, trace.arrivals.back().t);
  const auto& x = witness.final_x();
  const Radius r = witness_radius(level);
  const DualSolution dual = grow_balls(view, x, r);

  Dist non_inherited = 0;
  for (const auto& rec : trace.arrivals) {
    if (level <= rec.hierarchy.max_level) {
      non_inherited += static_cast<Dist>(rec.forest.levels[static_cast<std::size_t>(level)].non_inherited_count());
    }
  }
  // All three in units of 1 / r.den.
  const Dist sum_y = dual.total_scaled();
  const Dist x_r = static_cast<Dist>(x.size()) * r.num;
  const Dist forest_side = non_inherited * r.num;
  const bool ok = sum_y == x_r && x_r == forest_side;
  res.status = ok ? Status::pass : Status::fail;
  res.value = r.den == 1 ? std::to_string(sum_y) : std::to_string(sum_y) + "/" + std::to_string(r.den);
  if (!ok) {
    res.detail = "sum y=" + std::to_string(sum_y) + " |X|r=" + std::to_string(x_r) +
                 " forest=" + std::to_string(forest_side) + " (units 1/" + std::to_string(r.den) + ")";
  }
  return res;
}

CertReport check_run(const RunTrace& trace, const std::vector<std::optional<Dist>>& opt,
                     const CertifyOptions& options) {
  ensure(trace.instance != nullptr, "trace without instance");
  const Instance& inst = *trace.instance;
  CertReport report;
  report.instance_hash = instance_hash(inst);
  Recorder rec_out(report);
  const std::size_t lambda = trace.lambda;
  auto opt_at = [&opt](std::size_t t) -> std::optional<Dist> {
    return t >= 1 && t <= opt.size() ? opt[t - 1] : std::nullopt;
  };

  std::size_t cum_ins = 0, cum_del = 0;
  for (std::size_t k = 0; k < trace.arrivals.size(); ++k) {
    const ArrivalRecord& rec = trace.arrivals[k];
    const ArrivalRecord* prev = k > 0 ? &trace.arrivals[k - 1] : nullptr;
    const std::size_t t = rec.t;
    const InstanceView view(inst, t);
    const Hierarchy& h = rec.hierarchy;
    const int L = h.max_level;
    const std::string at = " (t=" + std::to_string(t) + ")";

    if (options.structural) {
      // Recorded hierarchy against an independent rebuild.
      const Hierarchy fresh = build_hierarchy(view, Exec::serial);
      bool same = fresh.max_level == L && fresh.levels.size() == h.levels.size();
      for (std::size_t j = 0; same && j < h.levels.size(); ++j) same = fresh.levels[j] == h.levels[j];
      rec_out.check(same, "hierarchy_replay", -1, t, {}, "recorded hierarchy differs from a rebuild");

      bool trivial = h.levels.front().size() == view.terminal_count();
      rec_out.check(trivial, "c0_trivial", 0, t, {}, "C_0 is not the trivial clustering");

      std::vector<Dist> apsp;
      const Clustering* apsp_of = nullptr;
      for (int i = 0; i <= L + 1; ++i) {
        const Clustering& ci = h.at(i);
        if (i <= L) {
          rec_out.check(check_refinement(ci, h.at(i + 1)), "refinement", i, t, {},
                        "C_i does not refine C_{i+1}");
          const auto ref = virtual_graph(view, ci);
          const auto recorded = h.virtual_graph(i);
          rec_out.check(std::equal(ref.begin(), ref.end(), recorded.begin(), recorded.end()),
                        "virtual_graph", i, t, {}, "recorded H_i differs from the reference");
        }
        // Distinct i-active clusters are >= 2^i apart in M / C_i.
        if (apsp_of == nullptr || !apsp_of->same_partition(ci)) {
          apsp = group_apsp_reference(view, group_of(ci), ci.size());
          apsp_of = &ci;
        }
        std::string bad;
        Dist closest = std::numeric_limits<Dist>::max();
        const auto& cl = ci.clusters();
        for (std::size_t p = 0; p < cl.size(); ++p) {
          if (cl[p].level < i) continue;
          for (std::size_t q = p + 1; q < cl.size(); ++q) {
            if (cl[q].level < i) continue;
            const Dist d = apsp[p * cl.size() + q];
            closest = std::min(closest, d);
            if (below_pow2(d, i) && bad.empty()) {
              bad = "clusters " + std::to_string(cl[p].id) + "," + std::to_string(cl[q].id) +
                    " at distance " + std::to_string(d);
            }
          }
        }
        rec_out.check(bad.empty(), "active_gap", i, t, {}, bad);
      }

      bool top_ok = true;
      for (std::size_t s = 1; s <= t; ++s) {
        const Demand& d = view.demand(s);
        top_ok = top_ok && h.top().cluster_of(d.u) == h.top().cluster_of(d.v);
      }
      rec_out.check(top_ok, "top_pairs", -1, t, {}, "a pair is split by the top clustering");

      if (prev != nullptr) {
        for (int i = 0; i <= L + 1; ++i) {
          rec_out.check(check_refinement(prev->hierarchy.at(i), h.at(i)), "same_level_refinement",
                        i, t, {}, "C_i^(t-1) does not refine C_i^(t)");
        }
      }

      // Virtual forests.
      bool all_levels_present = rec.forest.levels.size() == static_cast<std::size_t>(L) + 1;
      rec_out.check(all_levels_present, "forest_levels", -1, t, {}, "forest level count != L+1");
      for (int i = 0; all_levels_present && i <= L; ++i) {
        const LevelForest& lf = rec.forest.levels[static_cast<std::size_t>(i)];
        const Clustering& ci = h.at(i);
        const auto hi = h.virtual_graph(i);
        std::set<std::pair<ClusterId, ClusterId>> in_h;
        for (const auto& e : hi) in_h.emplace(e.a, e.b);

        std::vector<Edge> links, inh_links;
        bool in_graph = true, acyclic = true;
        DisjointSet sets(view.terminal_count());
        for (const auto& ve : lf.edges) {
          in_graph = in_graph && in_h.count({ve.a, ve.b}) != 0 && ve.level == i;
          acyclic = sets.unite(ve.a, ve.b) && acyclic;
          links.push_back({ve.a, ve.b});
          if (ve.inherited) inh_links.push_back({ve.a, ve.b});
        }
        const Clustering spanned = contract_over(ci, links, i + 1, h.levels_of_terminals);
        rec_out.check(in_graph && acyclic && spanned.same_partition(h.at(i + 1)), "forest_spanning", i, t, {},
                      !in_graph ? "forest edge outside H_i" : !acyclic ? "forest has a cycle"
                                                                        : "forest does not span H_i");
        const Clustering inh = contract_over(ci, inh_links, i, h.levels_of_terminals);
        rec_out.check(inh.same_partition(lf.inh_clustering), "inh_clustering", i, t, {},
                      "C_inh,i is not the contraction of the inherited forest");

        const bool counts = lf.edges.size() == ci.size() - h.at(i + 1).size() &&
                            lf.inherited_count == ci.size() - lf.inh_clustering.size();
        rec_out.check(counts, "forest_counting", i, t,
                      std::to_string(lf.edges.size()) + "/" + std::to_string(lf.inherited_count),
                      "|F_i| or |F_inh,i| does not match the clustering sizes");

        // Inheritance replay: inherited edges are exactly a spanning forest of the images.
        const bool has_prev = prev != nullptr && i <= prev->hierarchy.max_level;
        const LevelForest* prev_lf = has_prev ? &prev->forest.levels[static_cast<std::size_t>(i)] : nullptr;
        const auto images = classify_inheritance(prev_lf, prev ? &prev->hierarchy.at(i) : nullptr, hi, ci);
        std::vector<Edge> image_links;
        std::set<std::tuple<ClusterId, ClusterId, std::size_t>> image_set;
        for (const auto& e : images) {
          image_links.push_back({e.a, e.b});
          image_set.emplace(e.a, e.b, e.parent);
        }
        bool tags_ok = inh.same_partition(contract_over(ci, image_links, i, h.levels_of_terminals));
        bool eorig_ok = true;
        for (std::size_t j = 0; j < lf.edges.size(); ++j) {
          const auto& ve = lf.edges[j];
          if (ve.inherited != (j < lf.inherited_count)) tags_ok = false;
          if (!ve.inherited) {
            if (ve.origin != t) eorig_ok = false;
            continue;
          }
          if (image_set.count({ve.a, ve.b, ve.parent}) == 0 || prev_lf == nullptr) {
            tags_ok = false;
            continue;
          }
          const auto& parent = prev_lf->edges[ve.parent];
          if (parent.e_orig != ve.e_orig || parent.origin != ve.origin) eorig_ok = false;
        }
        rec_out.check(tags_ok, "inheritance", i, t, {}, "inherited edges are not a spanning forest of the images");
        rec_out.check(eorig_ok, "inherited_eorig", i, t, {}, "inherited E_orig differs from its parent");

        // Per-edge cost bound and realization.
        Dist worst = 0;
        bool realized = true;
        for (const auto& ve : lf.edges) {
          worst = std::max(worst, edge_cost(view, ve.e_orig));
          DisjointSet conn(view.terminal_count());
          for (std::size_t v = 0; v < view.terminal_count(); ++v) conn.unite(v, ci.cluster_of(static_cast<TerminalId>(v)));
          for (const Edge& e : rec.pinned) conn.unite(e.a, e.b);
          for (const Edge& e : ve.e_orig) conn.unite(e.a, e.b);
          realized = realized && conn.same(ve.a, ve.b);
        }
        rec_out.check(worst <= (Dist{1} << (i + 1)), "eorig_cost_bound", i, t,
                      std::to_string(worst), "cost(E_orig) = " + std::to_string(worst) + " > 2^{i+1}");
        rec_out.check(realized, "edge_realized", i, t, {}, "a virtual edge's endpoints are not joined by A and E_orig");

        if (prev != nullptr) {
          rec_out.check(check_refinement(prev->hierarchy.at(i + 1), lf.inh_clustering), "inherited_refinement",
                        i, t, {}, "C_{i+1}^(t-1) does not refine C_inh,i^(t)");
        }
      }
    }

    // Snapshot, pinned set and ledger.
    std::vector<Edge> assembled = rec.pinned;
    for (const auto& lf : rec.forest.levels) {
      for (const auto& ve : lf.edges) assembled.insert(assembled.end(), ve.e_orig.begin(), ve.e_orig.end());
    }
    std::sort(assembled.begin(), assembled.end());
    assembled.erase(std::unique(assembled.begin(), assembled.end()), assembled.end());
    rec_out.check(assembled == rec.snapshot.edges, "snapshot_union", -1, t, {}, "F != A u E_orig" + at);
    rec_out.check(rec.snapshot.cost == edge_cost(view, rec.snapshot.edges), "snapshot_cost", -1, t,
                  std::to_string(rec.snapshot.cost), "recorded cost mismatch");

    const std::vector<Demand> demands(inst.demands.begin(), inst.demands.begin() + static_cast<long>(t));
    rec_out.check(check_feasible(rec.snapshot.edges, demands, view.terminal_count()), "feasible", -1, t,
                  std::to_string(rec.snapshot.cost), "a pair is disconnected in F");
    rec_out.check(check_pinned_forest(rec.pinned, view.terminal_count()), "pinned_forest", -1, t,
                  std::to_string(rec.pinned.size()), "A is not a forest of at most 2t-1 edges");
    if (prev != nullptr) {
      rec_out.check(std::includes(rec.pinned.begin(), rec.pinned.end(), prev->pinned.begin(), prev->pinned.end()),
                    "pinned_monotone", -1, t, {}, "A^(t-1) is not contained in A^(t)");
    }

    const auto [ins, del] = recourse_diff(prev ? std::span<const Edge>(prev->snapshot.edges) : std::span<const Edge>(),
                                          rec.snapshot.edges);
    cum_ins += ins;
    cum_del += del;
    const LedgerEntry& led = rec.ledger;
    rec_out.check(led.insertions == ins && led.deletions == del && led.cum_insertions == cum_ins &&
                      led.cum_deletions == cum_del && led.pinned_count == rec.pinned.size(),
                  "ledger", -1, t, std::to_string(ins) + "/" + std::to_string(del),
                  "ledger does not match the snapshot difference");
    rec_out.check(led.buffer_end < lambda && led.buffer_peak <= 2 * lambda, "buffer_bound", -1, t,
                  std::to_string(led.buffer_end), "buffer exceeded its bound");

    if (const auto o = opt_at(t)) {
      rec_out.check(*o <= rec.snapshot.cost, "opt_lower_bound", -1, t, std::to_string(*o),
                    "exact optimum above the online cost");
      rec_out.info("ratio_cost_F", -1, t, ratio(rec.snapshot.cost, *o));
    }
  }

  if (trace.arrivals.empty()) return report;
  const ArrivalRecord& last = trace.arrivals.back();
  const std::size_t n = last.t;
  rec_out.check(check_pinned_forest(last.pinned, 2 * n), "pinned_final", -1, 0, std::to_string(last.pinned.size()),
                "|A^(n)| > 2n-1 or A has a cycle");
  const std::size_t bound = 2 * n + 21 * n * lambda;
  rec_out.check(cum_ins <= bound && cum_del <= cum_ins, "recourse_bound", -1, 0,
                std::to_string(cum_ins) + "<=" + std::to_string(bound), "insertions exceed 2n + 21 n lambda");
  rec_out.info("insertions_per_n_lambda", -1, 0, ratio(static_cast<Dist>(cum_ins), static_cast<Dist>(n * lambda)));

  const auto final_opt = opt_at(n);
  if (final_opt) {
    rec_out.info("forest_forming_over_opt", -1, 0, ratio(last.cost_forest_forming, *final_opt));
    rec_out.info("pinning_over_opt", -1, 0, ratio(last.cost_pinned, *final_opt));
    rec_out.info("cost_over_opt", -1, 0, ratio(last.snapshot.cost, *final_opt));
    Dist budget = 0;
    for (int i = 0; i <= last.hierarchy.max_level; ++i) {
      budget += static_cast<Dist>(last.hierarchy.at(i).size() - last.hierarchy.at(i + 1).size()) * (Dist{2} << i);
    }
    rec_out.info("merge_budget_over_opt", -1, 0, ratio(budget, *final_opt));
  }

  if (options.witness) {
    const int top_level = last.hierarchy.max_level;
    const InstanceView view(inst, n);
    for (int i = 0; i <= top_level; ++i) {
      if (options.only_level && *options.only_level != i) continue;
      const WitnessState w = build_dual_witness(trace, i);
      for (const auto& v : w.violations) report.add(v);
      rec_out.check(w.ok(), "witness_invariants", i, 0, std::to_string(w.final_x().size()),
                    w.ok() ? std::string() : w.violations.front().detail);
      if (!w.ok()) continue;

      const Radius r = witness_radius(i);
      const DualSolution dual = grow_balls(view, w.final_x(), r);
      CheckResult feas = check_dual_feasibility(dual, view, last.hierarchy.top());
      feas.level = i;
      report.add(feas);
      report.add(witness_value_identity(w, trace, i));

      // sum_t |F_i \ F_inh,i| 2^{i+1} = 4 D, with D in units of 1/den.
      const Dist merge_cost = static_cast<Dist>(w.non_inherited_total) * (Dist{2} << i);
      const Dist d_scaled = dual.total_scaled();
      rec_out.check(merge_cost * r.den == 4 * d_scaled, "merge_linkage", i, 0, std::to_string(merge_cost),
                    "sum |F_i \\ F_inh,i| 2^{i+1} != 4D");
      if (final_opt) {
        rec_out.check(d_scaled <= options.ratio_bound * *final_opt * r.den, "dual_vs_opt", i, 0,
                      ratio(d_scaled, *final_opt * r.den), "D exceeds the property bound times OPT");
        rec_out.info("merge_cost_over_opt", i, 0, ratio(merge_cost, *final_opt));
      }
    }
  }
  return report;
}

}  // namespace sfo
