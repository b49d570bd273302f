#include "sfo/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "sfo/clustering.hpp"
#include "sfo/error.hpp"
#include "sfo/trace.hpp"

namespace sfo {

namespace fs = std::filesystem;

const char* check_mode_name(CheckMode m) {
  switch (m) {
    case CheckMode::none: return "none";
    case CheckMode::structural: return "structural";
    case CheckMode::full: return "full-witness";
  }
  return "?";
}

CheckMode parse_check_mode(const std::string& s) {
  if (s == "none") return CheckMode::none;
  if (s == "structural") return CheckMode::structural;
  if (s == "full" || s == "full-witness") return CheckMode::full;
  throw Error(ErrorCode::config, "unknown check mode '" + s + "'");
}

std::string format_fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::size_t auto_lambda(std::size_t n) {
  return n <= 1 ? 1 : static_cast<std::size_t>(ceil_log2(static_cast<Dist>(n)));
}

std::size_t resolve_lambda(const RunConfig& config, std::size_t n) {
  return config.lambda == 0 ? auto_lambda(n) : config.lambda;
}

std::vector<std::optional<Dist>> prefix_optima(const Instance& inst, std::size_t limit) {
  std::vector<std::optional<Dist>> opt(inst.n);
  for (std::size_t t = 1; t <= std::min(inst.n, limit); ++t) {
    opt[t - 1] = exact_optimum(InstanceView(inst, t), limit).cost;
  }
  return opt;
}

std::optional<double> RunOutcome::max_ratio() const {
  std::optional<double> best;
  for (const auto& rec : trace.arrivals) {
    const auto& o = opt[rec.t - 1];
    if (!o || *o == 0) continue;
    const double r = static_cast<double>(rec.snapshot.cost) / static_cast<double>(*o);
    best = best ? std::max(*best, r) : r;
  }
  return best;
}

namespace {

CertifyOptions options_for(CheckMode mode) {
  CertifyOptions options;
  options.witness = mode == CheckMode::full;
  return options;
}

// Published snapshots of the doubling mode, plus the trace of the last phase
// (a complete run with the final lambda) for certification.
RunOutcome run_doubling(const Instance& inst, const RunConfig& config) {
  RunOutcome run;
  run.trace.instance = &inst;
  std::size_t n_hat = 1;
  std::size_t lambda = config.lambda == 0 ? auto_lambda(n_hat) : config.lambda;
  std::optional<OnlineState> state(std::in_place, inst, lambda, config.exec);
  std::vector<Edge> published;
  std::size_t cum_ins = 0, cum_del = 0;
  for (std::size_t t = 1; t <= inst.n; ++t) {
    if (t > n_hat) {
      while (t > n_hat) n_hat *= 2;
      lambda = config.lambda == 0 ? auto_lambda(n_hat) : config.lambda;
      state.emplace(inst, lambda, config.exec);
      for (std::size_t s = 1; s < t; ++s) state->advance(inst.demands[s - 1]);
      ++run.restarts;
    }
    ArrivalRecord rec = state->advance(inst.demands[t - 1]);
    const auto [ins, del] = recourse_diff(published, rec.snapshot.edges);
    cum_ins += ins;
    cum_del += del;
    rec.ledger.insertions = ins;
    rec.ledger.deletions = del;
    rec.ledger.cum_insertions = cum_ins;
    rec.ledger.cum_deletions = cum_del;
    published = rec.snapshot.edges;
    run.trace.arrivals.push_back(std::move(rec));
  }
  run.trace.lambda = lambda;
  run.opt = prefix_optima(inst, config.oracle_limit);
  if (config.checks != CheckMode::none) {
    CertReport report = check_run(run_online(inst, lambda, config.exec), run.opt, options_for(config.checks));
    for (const auto& rec : run.trace.arrivals) {
      const std::vector<Demand> demands(inst.demands.begin(), inst.demands.begin() + static_cast<long>(rec.t));
      const bool ok = check_feasible(rec.snapshot.edges, demands, 2 * rec.t);
      report.add({"published_feasible", -1, rec.t, ok ? CheckResult::Status::pass : CheckResult::Status::fail,
                  std::to_string(rec.snapshot.cost), ok ? "" : "published snapshot leaves a pair disconnected"});
    }
    run.report = std::move(report);
  }
  return run;
}

}  // namespace

RunOutcome execute_run(const Instance& inst, const RunConfig& config) {
  if (config.doubling) return run_doubling(inst, config);
  RunOutcome run;
  run.trace = run_online(inst, resolve_lambda(config, inst.n), config.exec);
  run.opt = prefix_optima(inst, config.oracle_limit);
  if (config.checks != CheckMode::none) run.report = check_run(run.trace, run.opt, options_for(config.checks));
  return run;
}

void write_run_csv(const RunOutcome& run, std::ostream& out) {
  out << "t,cost_F,cost_A,cost_forestforming,OPT_t_or_blank,insertions,deletions,cum_insertions,"
         "cum_deletions,pinned_count,max_level\n";
  for (const auto& rec : run.trace.arrivals) {
    const auto& l = rec.ledger;
    out << rec.t << ',' << rec.snapshot.cost << ',' << rec.cost_pinned << ',' << rec.cost_forest_forming << ',';
    if (const auto& o = run.opt[rec.t - 1]) out << *o;
    out << ',' << l.insertions << ',' << l.deletions << ',' << l.cum_insertions << ',' << l.cum_deletions << ','
        << l.pinned_count << ',' << rec.hierarchy.max_level << '\n';
  }
}

void write_run_summary(const RunOutcome& run, std::ostream& out) {
  const Instance& inst = *run.trace.instance;
  const std::size_t n = run.trace.arrivals.size();
  const std::size_t lambda = run.trace.lambda;
  out << "instance " << instance_hash(inst);
  if (!inst.label.empty()) out << " (" << inst.label << ")";
  out << '\n';
  out << "pairs " << n << "\nlambda " << lambda << '\n';
  if (run.restarts > 0) out << "doubling_restarts " << run.restarts << '\n';
  if (n == 0) return;
  const auto& last = run.trace.arrivals.back();
  out << "final_cost " << last.snapshot.cost << '\n';
  out << "pinned_cost " << last.cost_pinned << "\nforest_forming_cost " << last.cost_forest_forming << '\n';
  out << "insertions_total " << last.ledger.cum_insertions << '\n';
  out << "deletions_total " << last.ledger.cum_deletions << '\n';
  out << "insertion_bound " << 2 * n + 21 * n * lambda << '\n';
  out << "insertions_per_n_lambda "
      << format_fixed(static_cast<double>(last.ledger.cum_insertions) / static_cast<double>(n * lambda)) << '\n';
  const std::size_t certified = static_cast<std::size_t>(
      std::count_if(run.opt.begin(), run.opt.begin() + static_cast<long>(n), [](const auto& o) { return o.has_value(); }));
  out << "max_ratio_cost_over_opt ";
  if (const auto r = run.max_ratio()) {
    out << format_fixed(*r) << " over " << certified << " prefix(es)\n";
  } else {
    out << "n/a\n";
  }
  if (run.report) {
    out << "certification:\n";
    run.report->write_summary(out);
  } else {
    out << "certification: skipped\n";
  }
}

void save_run(const RunOutcome& run, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path root(dir);
  {
    std::ofstream csv(root / "run.csv");
    write_run_csv(run, csv);
  }
  {
    std::ofstream summary(root / "summary.txt");
    write_run_summary(run, summary);
  }
  if (run.report) {
    std::ofstream csv(root / "certify.csv");
    run.report->write_csv(csv);
  }
  write_trace((root / "trace").string(), run.trace);
}

std::optional<double> SweepRow::ratio() const {
  if (!opt || *opt == 0) return std::nullopt;
  return static_cast<double>(final_cost) / static_cast<double>(*opt);
}

double SweepRow::insertions_per_n_lambda() const {
  return pairs == 0 ? 0.0 : static_cast<double>(insertions) / static_cast<double>(pairs * lambda);
}

std::vector<SweepRow> execute_sweep(const Instance& inst, const RunConfig& base, std::vector<std::size_t> lambdas,
                                    std::vector<std::string>& warnings, const std::string& out_dir) {
  if (lambdas.empty()) throw Error(ErrorCode::config, "empty lambda list");
  std::sort(lambdas.begin(), lambdas.end());
  for (std::size_t k = 1; k < lambdas.size(); ++k) {
    if (lambdas[k] == lambdas[k - 1]) warnings.push_back("duplicate lambda " + std::to_string(lambdas[k]) + " ignored");
  }
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  if (lambdas.front() == 0) throw Error(ErrorCode::config, "lambda must be at least 1");

  const auto opt = prefix_optima(inst, base.oracle_limit);
  std::vector<SweepRow> rows(lambdas.size());
  std::vector<std::string> errors(lambdas.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    try {
      RunOutcome run;
      run.trace = run_online(inst, lambdas[k], Exec::serial);
      run.opt = opt;
      if (base.checks != CheckMode::none) {
        CertifyOptions options;
        options.witness = base.checks == CheckMode::full;
        run.report = check_run(run.trace, run.opt, options);
      }
      SweepRow& row = rows[k];
      row.lambda = lambdas[k];
      row.pairs = inst.n;
      row.opt = inst.n > 0 ? opt.back() : std::optional<Dist>(0);
      if (!run.trace.arrivals.empty()) {
        const auto& last = run.trace.arrivals.back();
        row.final_cost = last.snapshot.cost;
        row.insertions = last.ledger.cum_insertions;
        row.deletions = last.ledger.cum_deletions;
      }
      row.certified = !run.report || run.report->ok();
      if (!out_dir.empty()) save_run(run, (fs::path(out_dir) / ("lambda_" + std::to_string(lambdas[k]))).string());
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!errors[k].empty()) throw Error(ErrorCode::invariant, "lambda " + std::to_string(lambdas[k]) + ": " + errors[k]);
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "lambda,final_cost,opt,ratio,insertions,insertions_per_n_lambda\n";
  for (const auto& r : rows) {
    out << r.lambda << ',' << r.final_cost << ',';
    if (r.opt) out << *r.opt;
    out << ',';
    if (const auto q = r.ratio()) out << format_fixed(*q);
    out << ',' << r.insertions << ',' << format_fixed(r.insertions_per_n_lambda()) << '\n';
  }
}

CompareResult execute_compare(const Instance& inst, const RunConfig& config) {
  CompareResult result;
  result.lambda = resolve_lambda(config, inst.n);
  const auto opt = prefix_optima(inst, config.oracle_limit);
  result.steps.resize(inst.n);

  OnlineState online(inst, result.lambda, config.exec);
  OnlineGluttonous gluttonous(inst);
  GreedyOnline greedy(inst);
  std::vector<Edge> offline_prev;
  for (std::size_t t = 1; t <= inst.n; ++t) {
    const InstanceView view(inst, t);
    const std::vector<Demand> demands(inst.demands.begin(), inst.demands.begin() + static_cast<long>(t));
    CompareStep& step = result.steps[t - 1];
    step.t = t;
    step.opt = opt[t - 1];

    const ArrivalRecord rec = online.advance(inst.demands[t - 1]);
    step.cost[0] = rec.snapshot.cost;
    step.insertions[0] = rec.ledger.insertions;
    step.deletions[0] = rec.ledger.deletions;
    step.feasible[0] = check_feasible(rec.snapshot.edges, demands, view.terminal_count());

    const BaselineStep g = gluttonous.step(inst.demands[t - 1]);
    step.cost[1] = g.cost;
    step.insertions[1] = g.insertions;
    step.deletions[1] = g.deletions;
    step.feasible[1] = check_feasible(gluttonous.edges(), demands, view.terminal_count());

    const BaselineStep s = greedy.step(inst.demands[t - 1]);
    step.cost[2] = s.cost;
    step.insertions[2] = s.insertions;
    step.deletions[2] = s.deletions;
    step.feasible[2] = check_feasible(greedy.edges(), demands, view.terminal_count());

    // The offline procedure is recomputed per prefix; its "recourse" is the
    // difference between consecutive offline solutions.
    const OfflineForest off = offline_gluttonous_forest(view, config.exec);
    step.cost[3] = off.cost;
    const auto [ins, del] = recourse_diff(offline_prev, off.edges);
    step.insertions[3] = ins;
    step.deletions[3] = del;
    step.feasible[3] = check_feasible(off.edges, demands, view.terminal_count());
    offline_prev = off.edges;
  }
  return result;
}

void write_compare_csv(const CompareResult& result, std::ostream& out) {
  out << "t,OPT_t_or_blank";
  for (const char* name : kMethodNames) out << ",cost_" << name;
  for (const char* name : kMethodNames) out << ",insertions_" << name << ",deletions_" << name;
  out << '\n';
  for (const auto& s : result.steps) {
    out << s.t << ',';
    if (s.opt) out << *s.opt;
    for (std::size_t m = 0; m < kMethodCount; ++m) out << ',' << s.cost[m];
    for (std::size_t m = 0; m < kMethodCount; ++m) out << ',' << s.insertions[m] << ',' << s.deletions[m];
    out << '\n';
  }
}

void write_compare_summary(const CompareResult& result, std::ostream& out) {
  out << "lambda " << result.lambda << '\n';
  out << "method,final_cost,final_ratio,max_ratio,insertions,deletions,feasible_every_arrival\n";
  for (std::size_t m = 0; m < kMethodCount; ++m) {
    std::size_t ins = 0, del = 0;
    bool feasible = true;
    std::optional<double> max_ratio;
    for (const auto& s : result.steps) {
      ins += s.insertions[m];
      del += s.deletions[m];
      feasible = feasible && s.feasible[m];
      if (s.opt && *s.opt > 0) {
        const double r = static_cast<double>(s.cost[m]) / static_cast<double>(*s.opt);
        max_ratio = max_ratio ? std::max(*max_ratio, r) : r;
      }
    }
    out << kMethodNames[m] << ',';
    if (!result.steps.empty()) {
      const auto& last = result.steps.back();
      out << last.cost[m] << ',';
      if (last.opt && *last.opt > 0) out << format_fixed(static_cast<double>(last.cost[m]) / static_cast<double>(*last.opt));
    } else {
      out << "0,";
    }
    out << ',';
    if (max_ratio) out << format_fixed(*max_ratio);
    out << ',' << ins << ',' << del << ',' << (feasible ? "yes" : "no") << '\n';
  }
}

}  // namespace sfo
