#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfo/clustering.hpp"
#include "sfo/metric.hpp"
#include "sfo/online_forest.hpp"

namespace sfo {

// A single certification outcome. level / arrival are -1 / 0 when the check
// is not tied to one. Informational measurements have status "info".
struct CheckResult {
  enum class Status { pass, fail, info };
  std::string check;
  int level = -1;
  std::size_t arrival = 0;
  Status status = Status::pass;
  std::string value;
  std::string detail;  // first counterexample for failures
};

struct CertReport {
  std::string instance_hash;
  std::vector<CheckResult> entries;

  bool ok() const;
  std::size_t failures() const;
  void add(CheckResult r) { entries.push_back(std::move(r)); }
  // Machine CSV: check,level,arrival,status,value
  void write_csv(std::ostream& out) const;
  // Per-check pass/fail counts, failure reproducers and measured ratios.
  void write_summary(std::ostream& out) const;
};

// FNV-1a of the SFONLINE serialization, as 16 hex digits.
std::string instance_hash(const Instance& inst);

bool check_feasible(std::span<const Edge> edges, std::span<const Demand> demands,
                    std::size_t terminal_count);

// A acyclic and |A| <= terminal_count - 1.
bool check_pinned_forest(std::span<const Edge> pinned, std::size_t terminal_count);

// Ball radius r = num / den; den is 2 only at level 0 (r = 1/2).
struct Radius {
  Dist num = 0;
  Dist den = 1;

  bool operator==(const Radius&) const = default;
};

Radius witness_radius(int level);

struct WitnessStep {
  std::size_t t = 0;
  std::vector<TerminalId> x_hat;  // sorted
  std::vector<TerminalId> x;      // sorted
};

struct WitnessState {
  int level = 0;
  Radius radius;
  std::vector<WitnessStep> steps;        // one per arrival
  std::vector<CheckResult> violations;   // invariant failures, with (t, i) and a dump
  std::size_t non_inherited_total = 0;   // sum_t |F_i \ F_inh,i|

  bool ok() const { return violations.empty(); }
  const std::vector<TerminalId>& final_x() const { return steps.back().x; }
};

// Replays the X-hat / X construction for one level over the whole trace and
// checks the four witness invariants after every arrival.
WitnessState build_dual_witness(const RunTrace& trace, int level);

// Dual values are stored as integers in units of 1 / radius.den.
struct DualSolution {
  Radius radius;
  std::vector<TerminalId> sources;
  std::map<std::vector<TerminalId>, Dist> y;  // cut (sorted ids) -> scaled value

  Dist total_scaled() const;
};

// Grows a ball of the given radius around every source. Throws Error(config)
// if two sources are closer than 2r.
DualSolution grow_balls(const InstanceView& view, std::span<const TerminalId> sources, Radius r);

// Dual constraints on every arrived edge plus the cut-domain condition
// against the top clustering.
CheckResult check_dual_feasibility(const DualSolution& dual, const InstanceView& view,
                                   const Clustering& top);

// D = sum y = |X| r = sum_t |F_i \ F_inh,i| 2^{i-1}, exactly.
CheckResult witness_value_identity(const WitnessState& witness, const RunTrace& trace, int level);

struct CertifyOptions {
  bool structural = true;
  bool witness = true;
  std::optional<int> only_level;  // witness levels: all when empty
  Dist ratio_bound = 64;          // D <= bound * OPT
};

// All per-arrival structural checks, the witness suite and the measured
// ratios. opt[t-1] holds the exact optimum of prefix t when known.
CertReport check_run(const RunTrace& trace, const std::vector<std::optional<Dist>>& opt,
                     const CertifyOptions& options = {});

}  // namespace sfo
