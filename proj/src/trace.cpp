#include "sfo/trace.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sfo/error.hpp"

namespace sfo {

namespace fs = std::filesystem;

namespace {

std::string arrival_name(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "arrival_%04zu.txt", t);
  return buf;
}

const char* kind_name(PinKind k) { return k == PinKind::batch ? "batch" : "single"; }

void write_arrival(std::ostream& out, const ArrivalRecord& rec) {
  const Hierarchy& h = rec.hierarchy;
  out << "arrival " << rec.t << '\n';
  out << "max_level " << h.max_level << '\n';
  out << "terminal_levels";
  for (int l : h.levels_of_terminals) out << ' ' << l;
  out << '\n';
  for (const Clustering& c : h.levels) out << "cluster " << dump_clustering_line(c) << '\n';
  for (std::size_t i = 0; i < h.virtual_graphs.size(); ++i) {
    for (const auto& e : h.virtual_graphs[i]) out << "h " << i << ' ' << e.a << ' ' << e.b << ' ' << e.distance << '\n';
  }
  for (const LevelForest& lf : rec.forest.levels) {
    for (const VirtualEdge& ve : lf.edges) {
      out << "forest " << ve.level << ' ' << (ve.inherited ? "inh" : "new") << ' ' << ve.a << ' ' << ve.b << ' ';
      if (ve.parent == kNoParent) {
        out << '-';
      } else {
        out << ve.parent;
      }
      out << ' ' << ve.origin << ' ' << ve.e_orig.size();
      for (const Edge& e : ve.e_orig) out << ' ' << e.a << ' ' << e.b;
      out << '\n';
    }
  }
  for (const Edge& e : rec.pinned) out << "pinned " << e.a << ' ' << e.b << '\n';
  out << "snapshot " << rec.snapshot.cost << ' ' << rec.snapshot.edges.size();
  for (const Edge& e : rec.snapshot.edges) out << ' ' << e.a << ' ' << e.b;
  out << '\n';
  out << "costs " << rec.cost_pinned << ' ' << rec.cost_forest_forming << '\n';
  const LedgerEntry& l = rec.ledger;
  out << "ledger " << l.t << ' ' << l.insertions << ' ' << l.deletions << ' ' << l.cum_insertions << ' '
      << l.cum_deletions << ' ' << l.pinned_count << ' ' << l.buffer_end << ' ' << l.buffer_peak << '\n';
  for (const PinEvent& p : rec.pin_events) {
    out << "pin " << p.arrival << ' ' << p.level << ' ' << kind_name(p.kind) << ' ' << p.source_size << ' ' << p.count
        << ' ' << p.cost << '\n';
  }
}

[[noreturn]] void bad(const std::string& file, std::size_t line, const std::string& why) {
  throw Error(ErrorCode::format_header, file + ":" + std::to_string(line) + ": " + why);
}

template <class T>
T take(std::istringstream& is, const std::string& file, std::size_t line) {
  T value{};
  if (!(is >> value)) bad(file, line, "expected a number");
  return value;
}

ArrivalRecord read_arrival(const std::string& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::format_header, "cannot open " + path);
  ArrivalRecord rec;
  Hierarchy& h = rec.hierarchy;
  std::vector<std::string> cluster_lines;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty()) continue;
    std::istringstream is(raw);
    std::string key;
    is >> key;
    auto num = [&]<class T>(T) { return take<T>(is, path, line_no); };
    if (key == "arrival") {
      rec.t = num(std::size_t{});
    } else if (key == "max_level") {
      h.max_level = num(int{});
      if (h.max_level < 0 || h.max_level > kMaxLevel) bad(path, line_no, "max_level out of range");
    } else if (key == "terminal_levels") {
      int l = 0;
      while (is >> l) h.levels_of_terminals.push_back(l);
    } else if (key == "cluster") {
      cluster_lines.push_back(raw.substr(8));
    } else if (key == "h") {
      const auto i = num(std::size_t{});
      if (i > static_cast<std::size_t>(h.max_level)) bad(path, line_no, "H level above L");
      h.virtual_graphs.resize(static_cast<std::size_t>(h.max_level) + 1);
      VirtualGraphEdge e;
      e.a = num(TerminalId{});
      e.b = num(TerminalId{});
      e.distance = num(Dist{});
      h.virtual_graphs[i].push_back(e);
    } else if (key == "forest") {
      VirtualEdge ve;
      ve.level = num(int{});
      std::string tag, parent;
      is >> tag;
      if (tag != "inh" && tag != "new") bad(path, line_no, "forest tag must be inh or new");
      ve.inherited = tag == "inh";
      ve.a = num(TerminalId{});
      ve.b = num(TerminalId{});
      is >> parent;
      if (parent != "-") {
        try {
          ve.parent = std::stoul(parent);
        } catch (const std::exception&) {
          bad(path, line_no, "bad parent index");
        }
      }
      ve.origin = num(std::size_t{});
      const auto k = num(std::size_t{});
      for (std::size_t j = 0; j < k; ++j) {
        const auto a = num(TerminalId{});
        const auto b = num(TerminalId{});
        ve.e_orig.push_back(make_edge(a, b));
      }
      if (ve.level < 0 || ve.level > h.max_level) bad(path, line_no, "forest level above L");
      rec.forest.levels.resize(static_cast<std::size_t>(h.max_level) + 1);
      auto& lf = rec.forest.levels[static_cast<std::size_t>(ve.level)];
      if (ve.inherited) ++lf.inherited_count;
      lf.edges.push_back(std::move(ve));
    } else if (key == "pinned") {
      const auto a = num(TerminalId{});
      const auto b = num(TerminalId{});
      rec.pinned.push_back(make_edge(a, b));
    } else if (key == "snapshot") {
      rec.snapshot.cost = num(Dist{});
      const auto k = num(std::size_t{});
      for (std::size_t j = 0; j < k; ++j) {
        const auto a = num(TerminalId{});
        const auto b = num(TerminalId{});
        rec.snapshot.edges.push_back(make_edge(a, b));
      }
    } else if (key == "costs") {
      rec.cost_pinned = num(Dist{});
      rec.cost_forest_forming = num(Dist{});
    } else if (key == "ledger") {
      LedgerEntry& l = rec.ledger;
      l.t = num(std::size_t{});
      l.insertions = num(std::size_t{});
      l.deletions = num(std::size_t{});
      l.cum_insertions = num(std::size_t{});
      l.cum_deletions = num(std::size_t{});
      l.pinned_count = num(std::size_t{});
      l.buffer_end = num(std::size_t{});
      l.buffer_peak = num(std::size_t{});
    } else if (key == "pin") {
      PinEvent p;
      p.arrival = num(std::size_t{});
      p.level = num(int{});
      std::string kind;
      is >> kind;
      if (kind != "batch" && kind != "single") bad(path, line_no, "pin kind must be batch or single");
      p.kind = kind == "batch" ? PinKind::batch : PinKind::single;
      p.source_size = num(std::size_t{});
      p.count = num(std::size_t{});
      p.cost = num(Dist{});
      rec.pin_events.push_back(p);
    } else {
      bad(path, line_no, "unknown record '" + key + "'");
    }
  }
  if (rec.t == 0 || rec.t > inst.n) bad(path, line_no, "arrival index out of range");
  if (h.levels_of_terminals.size() != 2 * rec.t) bad(path, line_no, "terminal level count mismatch");
  if (cluster_lines.size() != static_cast<std::size_t>(h.max_level) + 2) bad(path, line_no, "expected L+2 clusterings");
  h.t = rec.t;
  for (const auto& line : cluster_lines) {
    h.levels.push_back(parse_clustering_line(line, h.levels_of_terminals));
  }
  h.virtual_graphs.resize(static_cast<std::size_t>(h.max_level) + 1);
  rec.forest.levels.resize(static_cast<std::size_t>(h.max_level) + 1);
  for (std::size_t i = 0; i < rec.forest.levels.size(); ++i) {
    LevelForest& lf = rec.forest.levels[i];
    std::vector<Edge> links;
    for (const auto& ve : lf.inherited()) links.push_back({ve.a, ve.b});
    lf.inh_clustering = contract_over(h.levels[i], links, static_cast<int>(i), h.levels_of_terminals);
  }
  rec.snapshot.t = rec.t;
  return rec;
}

}  // namespace

void write_trace(const std::string& dir, const RunTrace& trace) {
  ensure(trace.instance != nullptr, "trace without instance");
  fs::create_directories(dir);
  save_instance_file(*trace.instance, (fs::path(dir) / "instance.sfo").string());
  {
    std::ofstream run((fs::path(dir) / "run.txt").string());
    run << "lambda " << trace.lambda << "\narrivals " << trace.arrivals.size() << '\n';
  }
  for (const ArrivalRecord& rec : trace.arrivals) {
    std::ofstream out((fs::path(dir) / arrival_name(rec.t)).string());
    write_arrival(out, rec);
    if (!out) throw Error(ErrorCode::config, "cannot write trace file in " + dir);
  }
}

LoadedTrace read_trace(const std::string& dir) {
  LoadedTrace loaded;
  loaded.instance = std::make_unique<Instance>(load_instance_file((fs::path(dir) / "instance.sfo").string()));
  const std::string run_path = (fs::path(dir) / "run.txt").string();
  std::ifstream run(run_path);
  if (!run) throw Error(ErrorCode::format_header, "cannot open " + run_path);
  std::string key;
  std::size_t lambda = 0, arrivals = 0;
  if (!(run >> key >> lambda) || key != "lambda" || lambda == 0) bad(run_path, 1, "expected 'lambda <k>'");
  if (!(run >> key >> arrivals) || key != "arrivals" || arrivals > loaded.instance->n) {
    bad(run_path, 2, "expected 'arrivals <count>'");
  }
  loaded.trace.instance = loaded.instance.get();
  loaded.trace.lambda = lambda;
  for (std::size_t t = 1; t <= arrivals; ++t) {
    ArrivalRecord rec = read_arrival((fs::path(dir) / arrival_name(t)).string(), *loaded.instance);
    if (rec.t != t) bad(arrival_name(t), 1, "arrival index mismatch");
    loaded.trace.arrivals.push_back(std::move(rec));
  }
  return loaded;
}

}  // namespace sfo
