#pragma once

#include <memory>
#include <string>

#include "sfo/metric.hpp"
#include "sfo/online_forest.hpp"

namespace sfo {

// A run trace on disk: instance.sfo, run.txt and one arrival_NNNN.txt per
// arrival holding the hierarchy dump, H_i, the forests, A, F and the ledger.
void write_trace(const std::string& dir, const RunTrace& trace);

struct LoadedTrace {
  std::unique_ptr<Instance> instance;  // owned; trace.instance points here
  RunTrace trace;
};

// Parse errors surface as Error(format_header).
LoadedTrace read_trace(const std::string& dir);

}  // namespace sfo
