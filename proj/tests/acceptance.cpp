// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sfo/certify.hpp"
#include "sfo/clustering.hpp"
#include "sfo/harness.hpp"
#include "sfo/metric.hpp"
#include "sfo/online_forest.hpp"
#include "sfo/oracles.hpp"

using namespace sfo;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and sizes.
constexpr std::size_t kLargeInstances = 210;   // criterion 1 asks for >= 200
constexpr std::size_t kLargeMaxPairs = 40;
constexpr std::size_t kSmallInstances = 60;    // criterion 7 asks for >= 50
constexpr std::size_t kSmallMaxPairs = 8;
constexpr double kTimeBudgetSeconds = 60.0;
constexpr double kRatioBound = 64.0;           // criteria 6, 7, 8
constexpr double kGluttonousFactor = 8.0;      // criterion 9: 8 * ceil(log2 2n)
constexpr std::size_t kInsertionSlack = 21;    // criterion 3: 2n + 21 n lambda

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) { return format_fixed(x); }

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s  %s\n", id, ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::vector<Instance> instance_set(std::size_t count, std::size_t max_pairs, std::uint64_t seed0) {
  const GeneratorKind kinds[] = {GeneratorKind::euclidean, GeneratorKind::random_metric, GeneratorKind::line_chain};
  std::vector<Instance> out;
  for (std::size_t k = 0; k < count; ++k) {
    GeneratorSpec spec;
    spec.kind = kinds[k % 3];
    spec.n = 1 + (k / 3) % max_pairs;
    spec.seed = seed0 + k;
    spec.scale = (k / 3) % 2 == 0 ? 1000 : 64;
    out.push_back(generate_instance(spec));
  }
  return out;
}

std::vector<Demand> prefix(const Instance& inst, std::size_t t) {
  return {inst.demands.begin(), inst.demands.begin() + static_cast<long>(t)};
}

std::size_t count_fail(const CertReport& r, const std::set<std::string>& names, std::string* first) {
  std::size_t k = 0;
  for (const auto& e : r.entries) {
    if (e.status != CheckResult::Status::fail || names.count(e.check) == 0) continue;
    if (k++ == 0 && first != nullptr && first->empty()) {
      *first = e.check + " t=" + std::to_string(e.arrival) + " i=" + std::to_string(e.level) + " instance=" +
               r.instance_hash + ": " + e.detail;
    }
  }
  return k;
}

std::string slurp_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    all += fs::relative(f, dir).string() + "\n";
    all.append(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return all;
}

}  // namespace

int main() {
  const auto large = instance_set(kLargeInstances, kLargeMaxPairs, 10'000);
  const auto small = instance_set(kSmallInstances, kSmallMaxPairs, 20'000);

  // Criteria 1-3 on the large set.
  std::vector<RunTrace> large_runs;
  std::size_t snapshots = 0, infeasible = 0, bad_pinned = 0, bad_final = 0, bad_recourse = 0;
  double max_ins_per = 0.0;
  std::string first_bad;
  const auto t1 = Clock::now();
  for (const auto& inst : large) {
    std::set<std::size_t> lambdas{1, 2, auto_lambda(inst.n)};
    for (std::size_t lambda : lambdas) {
      RunTrace trace = run_online(inst, lambda);
      for (const auto& rec : trace.arrivals) {
        ++snapshots;
        if (!check_feasible(rec.snapshot.edges, prefix(inst, rec.t), 2 * rec.t)) {
          ++infeasible;
          if (first_bad.empty()) first_bad = inst.label + " lambda=" + std::to_string(lambda);
        }
        if (!check_pinned_forest(rec.pinned, 2 * rec.t)) ++bad_pinned;
      }
      const auto& last = trace.arrivals.back();
      const std::size_t n = inst.n;
      if (last.pinned.size() > 2 * n - 1) ++bad_final;
      if (last.ledger.cum_insertions > 2 * n + kInsertionSlack * n * lambda ||
          last.ledger.cum_deletions > last.ledger.cum_insertions) {
        ++bad_recourse;
      }
      max_ins_per = std::max(max_ins_per, static_cast<double>(last.ledger.cum_insertions) / static_cast<double>(n * lambda));
      large_runs.push_back(std::move(trace));
    }
  }
  const double run_seconds = seconds_since(t1);
  report(1, "feasibility", infeasible == 0 && run_seconds < kTimeBudgetSeconds,
         std::to_string(large.size()) + " instances, " + std::to_string(large_runs.size()) + " runs, " +
             std::to_string(snapshots) + " snapshots, " + std::to_string(infeasible) + " infeasible, " +
             fmt(run_seconds) + " s" + (first_bad.empty() ? "" : " first: " + first_bad));
  report(2, "pinned forest", bad_pinned == 0 && bad_final == 0,
         std::to_string(bad_pinned) + " cyclic or oversized A^(t), " + std::to_string(bad_final) +
             " runs with |A^(n)| > 2n-1");
  report(3, "recourse", bad_recourse == 0,
         std::to_string(bad_recourse) + " runs above 2n + 21 n lambda; max insertions/(n lambda) = " +
             fmt(max_ins_per));

  // Criteria 4-5: structural certification of every large run.
  const std::set<std::string> hierarchy_checks{"active_gap", "top_pairs", "same_level_refinement",
                                               "inherited_refinement", "refinement", "c0_trivial"};
  const std::set<std::string> eq1_checks{"eorig_cost_bound"};
  std::set<std::string> other_checks;
  std::size_t h_fail = 0, e_fail = 0, other_fail = 0, h_total = 0, e_total = 0;
  std::string h_first, e_first;
  const auto t4 = Clock::now();
  CertifyOptions structural;
  structural.witness = false;
  for (const auto& trace : large_runs) {
    const auto r = check_run(trace, {}, structural);
    h_fail += count_fail(r, hierarchy_checks, &h_first);
    e_fail += count_fail(r, eq1_checks, &e_first);
    for (const auto& e : r.entries) {
      if (hierarchy_checks.count(e.check)) ++h_total;
      if (eq1_checks.count(e.check)) ++e_total;
      if (e.status == CheckResult::Status::fail && !hierarchy_checks.count(e.check) && !eq1_checks.count(e.check)) {
        ++other_fail;
        other_checks.insert(e.check);
      }
    }
  }
  std::string others;
  for (const auto& c : other_checks) others += " " + c;
  report(4, "hierarchy structure", h_fail == 0,
         std::to_string(h_total) + " checks, " + std::to_string(h_fail) + " failed; other structural failures: " +
             std::to_string(other_fail) + others + " (" + fmt(seconds_since(t4)) + " s)" +
             (h_first.empty() ? "" : " first: " + h_first));
  report(5, "realized edge cost bound", e_fail == 0,
         std::to_string(e_total) + " level forests, " + std::to_string(e_fail) + " failed" +
             (e_first.empty() ? "" : " first: " + e_first));

  // Small set: exact optima of every prefix.
  std::vector<std::vector<std::optional<Dist>>> small_opt;
  for (const auto& inst : small) small_opt.push_back(prefix_optima(inst, kSmallMaxPairs));

  // Criterion 6.
  {
    const auto t6 = Clock::now();
    double worst = 0.0;
    std::size_t checked = 0, above = 0;
    for (std::size_t k = 0; k < small.size(); ++k) {
      const auto trace = run_online(small[k], auto_lambda(small[k].n));
      for (const auto& rec : trace.arrivals) {
        const double r = static_cast<double>(rec.snapshot.cost) / static_cast<double>(*small_opt[k][rec.t - 1]);
        worst = std::max(worst, r);
        ++checked;
        if (r > kRatioBound) ++above;
      }
    }
    const double secs = seconds_since(t6);
    report(6, "competitive ratio vs exact optimum", above == 0 && secs < kTimeBudgetSeconds,
           std::to_string(checked) + " prefixes, max cost/OPT = " + fmt(worst) + " (bound " + fmt(kRatioBound) +
               "), " + fmt(secs) + " s");
  }

  // Criterion 7.
  {
    const std::set<std::string> witness_checks{"witness_invariants", "witness_construction", "witness_in_active",
                                               "witness_separation",  "witness_spare",   "witness_count",
                                               "dual_feasible",      "value_identity",       "merge_linkage",
                                               "dual_vs_opt"};
    std::size_t runs = 0, levels = 0, fails = 0;
    double worst = 0.0;
    std::string first;
    for (std::size_t k = 0; k < small.size(); ++k) {
      for (std::size_t lambda : std::set<std::size_t>{1, auto_lambda(small[k].n)}) {
        const auto trace = run_online(small[k], lambda);
        CertifyOptions options;
        options.structural = false;
        options.ratio_bound = static_cast<Dist>(kRatioBound);
        const auto r = check_run(trace, small_opt[k], options);
        ++runs;
        fails += count_fail(r, witness_checks, &first);
        for (const auto& e : r.entries) {
          if (e.check == "witness_invariants") ++levels;
          if (e.check == "dual_vs_opt") worst = std::max(worst, std::stod(e.value));
        }
      }
    }
    report(7, "dual fitting witness", fails == 0 && runs >= 50,
           std::to_string(runs) + " runs, " + std::to_string(levels) + " levels, " + std::to_string(fails) +
               " failures, max D/OPT = " + fmt(worst) + (first.empty() ? "" : " first: " + first));
  }

  // Criterion 8.
  {
    double worst = 0.0;
    std::size_t checked = 0, above = 0;
    for (std::size_t k = 0; k < small.size(); ++k) {
      for (std::size_t t = 1; t <= small[k].n; ++t) {
        const auto h = build_hierarchy(InstanceView(small[k], t));
        Dist budget = 0;
        for (int i = 0; i <= h.max_level; ++i) {
          budget += static_cast<Dist>(h.at(i).size() - h.at(i + 1).size()) * (Dist{2} << i);
        }
        const double r = static_cast<double>(budget) / static_cast<double>(*small_opt[k][t - 1]);
        worst = std::max(worst, r);
        ++checked;
        if (r > kRatioBound) ++above;
      }
    }
    report(8, "clustering merge budget vs optimum", above == 0,
           std::to_string(checked) + " prefixes, max budget/OPT = " + fmt(worst) + " (bound " + fmt(kRatioBound) + ")");
  }

  // Criterion 9.
  {
    std::size_t infeasible9 = 0, deletions = 0, above = 0;
    double worst = 0.0, worst_scaled = 0.0;
    for (std::size_t k = 0; k < small.size(); ++k) {
      const auto& inst = small[k];
      OnlineGluttonous base(inst);
      Dist cost = 0;
      for (std::size_t t = 1; t <= inst.n; ++t) {
        const auto step = base.step(inst.demands[t - 1]);
        cost = step.cost;
        deletions += step.deletions;
        if (!check_feasible(base.edges(), prefix(inst, t), 2 * t)) ++infeasible9;
      }
      const double r = static_cast<double>(cost) / static_cast<double>(*small_opt[k].back());
      const double bound = kGluttonousFactor * ceil_log2(static_cast<Dist>(2 * inst.n));
      worst = std::max(worst, r);
      worst_scaled = std::max(worst_scaled, r / bound);
      if (r > bound) ++above;
    }
    report(9, "online gluttonous baseline", infeasible9 == 0 && deletions == 0 && above == 0,
           std::to_string(infeasible9) + " infeasible prefixes, " + std::to_string(deletions) +
               " deletions, max final cost/OPT = " + fmt(worst) + " (max fraction of bound " + fmt(worst_scaled) + ")");
  }

  // Criterion 10: identical inputs give identical bytes.
  {
    const auto tmp = fs::temp_directory_path() / "sfo_acceptance_determinism";
    std::size_t mismatches = 0, compared = 0;
    for (std::size_t k = 0; k < 12; ++k) {
      const Instance& inst = k % 2 == 0 ? small[k * 5] : large[k * 17];
      std::string outputs[2];
      for (int rep = 0; rep < 2; ++rep) {
        const auto dir = tmp / std::to_string(rep);
        fs::remove_all(dir);
        RunConfig config;
        config.checks = k % 4 == 0 ? CheckMode::full : CheckMode::structural;
        save_run(execute_run(inst, config), (dir / "run").string());
        std::vector<std::string> warnings;
        const auto rows = execute_sweep(inst, config, {1, 2, auto_lambda(inst.n)}, warnings, (dir / "sweep").string());
        std::ofstream(dir / "sweep.csv") << [&] {
          std::ostringstream os;
          write_sweep_csv(rows, os);
          return os.str();
        }();
        const auto cmp = execute_compare(inst, config);
        {
          std::ofstream csv(dir / "compare.csv");
          write_compare_csv(cmp, csv);
          std::ofstream summary(dir / "compare_summary.txt");
          write_compare_summary(cmp, summary);
        }
        outputs[rep] = slurp_dir(dir);
      }
      ++compared;
      if (outputs[0] != outputs[1] || outputs[0].empty()) ++mismatches;
    }
    fs::remove_all(tmp);
    report(10, "determinism", mismatches == 0,
           std::to_string(compared) + " instances x (run, sweep, compare) twice, " + std::to_string(mismatches) +
               " byte mismatches");
  }

  // Criterion 11.
  {
    std::size_t checked = 0, violations = 0;
    std::string first;
    for (std::size_t k = 0; k < small.size(); ++k) {
      const auto& inst = small[k];
      std::vector<OnlineState> online;
      for (std::size_t lambda : std::set<std::size_t>{1, 2, auto_lambda(inst.n)}) online.emplace_back(inst, lambda);
      OnlineGluttonous glut(inst);
      GreedyOnline greedy(inst);
      for (std::size_t t = 1; t <= inst.n; ++t) {
        const InstanceView view(inst, t);
        const auto demands = prefix(inst, t);
        const Dist opt = *small_opt[k][t - 1];
        std::vector<std::pair<std::string, std::vector<Edge>>> solutions;
        for (auto& s : online) solutions.emplace_back("online", s.advance(inst.demands[t - 1]).snapshot.edges);
        glut.step(inst.demands[t - 1]);
        greedy.step(inst.demands[t - 1]);
        solutions.emplace_back("online_gluttonous", glut.edges());
        solutions.emplace_back("greedy", greedy.edges());
        solutions.emplace_back("offline_gluttonous", offline_gluttonous_forest(view).edges);
        solutions.emplace_back("exact", exact_optimum(view).forest);
        for (const auto& [name, edges] : solutions) {
          if (!check_feasible(edges, demands, view.terminal_count())) continue;
          ++checked;
          if (opt > edge_cost(view, edges)) {
            ++violations;
            if (first.empty()) first = name + " on " + inst.label + " t=" + std::to_string(t);
          }
        }
      }
    }
    report(11, "cross-oracle consistency", violations == 0,
           std::to_string(checked) + " feasible solutions, " + std::to_string(violations) + " below OPT" +
               (first.empty() ? "" : " first: " + first));
  }

  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return failures == 0 ? 0 : 1;
}
