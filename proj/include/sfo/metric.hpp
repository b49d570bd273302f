#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sfo {

using TerminalId = std::uint32_t;
using Dist = std::int64_t;

// Largest admissible distance. Keeping entries at or below 2^61 lets every sum
// of two distances fit in a Dist and keeps all levels <= 61.
inline constexpr Dist kMaxDist = Dist{1} << 61;

// Terminals of pair t (1-based) are 2t-2 and 2t-1.
constexpr TerminalId mate(TerminalId k) noexcept { return k ^ 1u; }

// Unordered original edge between two terminals, stored with a < b.
struct Edge {
  TerminalId a = 0;
  TerminalId b = 0;

  auto operator<=>(const Edge&) const = default;
};

constexpr Edge make_edge(TerminalId x, TerminalId y) noexcept {
  return x < y ? Edge{x, y} : Edge{y, x};
}

// Dense symmetric matrix of distances, row-major storage.
class DistMatrix {
 public:
  DistMatrix() = default;
  explicit DistMatrix(std::size_t size, Dist fill = 0)
      : size_(size), data_(size * size, fill) {}

  std::size_t size() const noexcept { return size_; }
  Dist operator()(std::size_t i, std::size_t j) const { return data_[i * size_ + j]; }
  Dist& operator()(std::size_t i, std::size_t j) { return data_[i * size_ + j]; }
  // Writes both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, Dist d) {
    data_[i * size_ + j] = d;
    data_[j * size_ + i] = d;
  }
  const std::vector<Dist>& data() const noexcept { return data_; }
  std::vector<Dist>& data() noexcept { return data_; }

  bool operator==(const DistMatrix&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<Dist> data_;
};

struct Demand {
  TerminalId u = 0;
  TerminalId v = 0;

  bool operator==(const Demand&) const = default;
};

struct Instance {
  std::size_t n = 0;  // number of demand pairs
  DistMatrix dist;    // 2n x 2n
  std::vector<Demand> demands;
  std::string label;

  std::size_t terminal_count() const noexcept { return 2 * n; }
  bool operator==(const Instance&) const = default;
};

// Prefix of an instance after t arrivals: terminals 0..2t-1 and demands 1..t.
class InstanceView {
 public:
  InstanceView(const Instance& base, std::size_t t);

  const Instance& base() const noexcept { return *base_; }
  std::size_t arrivals() const noexcept { return t_; }
  std::size_t terminal_count() const noexcept { return 2 * t_; }
  Dist dist(TerminalId a, TerminalId b) const { return base_->dist(a, b); }
  Dist cost(const Edge& e) const { return base_->dist(e.a, e.b); }
  // 1-based arrival index.
  const Demand& demand(std::size_t arrival) const { return base_->demands[arrival - 1]; }
  bool contains(TerminalId v) const noexcept { return v < terminal_count(); }

 private:
  const Instance* base_;
  std::size_t t_;
};

struct MetricViolation {
  enum class Kind { diagonal, negative, asymmetry, zero_distance, too_large, triangle };
  Kind kind;
  std::size_t a = 0, b = 0, c = 0;  // c only meaningful for triangle

  bool operator==(const MetricViolation&) const = default;
};

const char* violation_name(MetricViolation::Kind kind);

struct ValidationReport {
  bool ok = true;
  std::size_t total = 0;                    // all violations found
  std::vector<MetricViolation> violations;  // first 10

  std::string describe() const;
};

ValidationReport validate_metric(const DistMatrix& dist);

// All-pairs shortest-path closure. Throws Error(metric) on a zero off-diagonal entry.
DistMatrix metric_closure(const DistMatrix& dist);

enum class GeneratorKind { euclidean, random_metric, line_chain };

const char* generator_kind_name(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& text);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::euclidean;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  Dist scale = 1000;
};

Instance generate_instance(const GeneratorSpec& spec);

// SFONLINE text format.
Instance load_instance(std::istream& in);
void save_instance(const Instance& inst, std::ostream& out);
Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

// Sum of edge costs.
Dist edge_cost(const InstanceView& view, const std::vector<Edge>& edges);

}  // namespace sfo
