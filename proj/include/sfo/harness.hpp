#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sfo/certify.hpp"
#include "sfo/kernels.hpp"
#include "sfo/metric.hpp"
#include "sfo/online_forest.hpp"
#include "sfo/oracles.hpp"

namespace sfo {

enum class CheckMode { none, structural, full };

const char* check_mode_name(CheckMode m);
CheckMode parse_check_mode(const std::string& s);  // throws Error(config)

struct RunConfig {
  std::size_t lambda = 0;  // 0 picks ceil(log2 n), at least 1
  CheckMode checks = CheckMode::structural;
  std::size_t oracle_limit = kDefaultOracleLimit;
  Exec exec = Exec::parallel;
  // Run without knowing n: keep an estimate n_hat (1, 2, 4, ...), and when an
  // arrival exceeds it double n_hat, discard the state and replay the prefix.
  // With lambda = 0 the pinning parameter follows ceil(log2 n_hat).
  bool doubling = false;
};

std::size_t auto_lambda(std::size_t n);
std::size_t resolve_lambda(const RunConfig& config, std::size_t n);

// Exact optimum of every prefix up to the limit; blank afterwards.
std::vector<std::optional<Dist>> prefix_optima(const Instance& inst, std::size_t limit);

struct RunOutcome {
  RunTrace trace;  // published snapshots; ledger counts recourse between them
  std::vector<std::optional<Dist>> opt;
  std::optional<CertReport> report;  // empty when checks are off
  std::size_t restarts = 0;          // doubling mode only

  std::optional<double> max_ratio() const;  // max cost(F)/OPT over certified prefixes
};

RunOutcome execute_run(const Instance& inst, const RunConfig& config);

// t,cost_F,cost_A,cost_forestforming,OPT_t_or_blank,insertions,deletions,cum_insertions,cum_deletions,pinned_count,max_level
void write_run_csv(const RunOutcome& run, std::ostream& out);
void write_run_summary(const RunOutcome& run, std::ostream& out);
// run.csv, summary.txt, trace/ and, when certified, certify.csv.
void save_run(const RunOutcome& run, const std::string& dir);

struct SweepRow {
  std::size_t lambda = 0;
  Dist final_cost = 0;
  std::optional<Dist> opt;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t pairs = 0;
  bool certified = true;

  std::optional<double> ratio() const;
  double insertions_per_n_lambda() const;
};

// Sorted, deduplicated lambdas; duplicates are reported through `warnings`.
// When `out_dir` is set every member run is saved under lambda_<k>/.
std::vector<SweepRow> execute_sweep(const Instance& inst, const RunConfig& base, std::vector<std::size_t> lambdas,
                                    std::vector<std::string>& warnings, const std::string& out_dir = {});
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

inline constexpr std::size_t kMethodCount = 4;
inline constexpr const char* kMethodNames[kMethodCount] = {"online", "online_gluttonous", "greedy",
                                                           "offline_gluttonous"};

struct CompareStep {
  std::size_t t = 0;
  std::optional<Dist> opt;
  Dist cost[kMethodCount] = {};
  std::size_t insertions[kMethodCount] = {};
  std::size_t deletions[kMethodCount] = {};
  bool feasible[kMethodCount] = {};
};

struct CompareResult {
  std::size_t lambda = 0;
  std::vector<CompareStep> steps;
};

CompareResult execute_compare(const Instance& inst, const RunConfig& config);
void write_compare_csv(const CompareResult& result, std::ostream& out);
void write_compare_summary(const CompareResult& result, std::ostream& out);

std::string format_fixed(double x);  // "%.6f", locale independent

}  // namespace sfo
