#include "sfo/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "sfo/error.hpp"

namespace sfo {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::format_header: return "E_FORMAT_HEADER";
    case ErrorCode::format_number: return "E_FORMAT_NUMBER";
    case ErrorCode::format_demand: return "E_FORMAT_DEMAND";
    case ErrorCode::metric: return "E_METRIC";
    case ErrorCode::config: return "E_CONFIG";
    case ErrorCode::oracle_limit: return "E_ORACLE_LIMIT";
    case ErrorCode::invariant: return "E_INVARIANT";
  }
  return "E_UNKNOWN";
}

InstanceView::InstanceView(const Instance& base, std::size_t t) : base_(&base), t_(t) {
  if (t > base.n) {
    throw Error(ErrorCode::config, "view beyond instance length: t=" + std::to_string(t) +
                                       " n=" + std::to_string(base.n));
  }
}

const char* violation_name(MetricViolation::Kind kind) {
  using K = MetricViolation::Kind;
  switch (kind) {
    case K::diagonal: return "nonzero diagonal";
    case K::negative: return "negative distance";
    case K::asymmetry: return "asymmetry";
    case K::zero_distance: return "zero off-diagonal distance";
    case K::too_large: return "distance above 2^61";
    case K::triangle: return "triangle inequality";
  }
  return "?";
}

std::string ValidationReport::describe() const {
  if (ok) return "ok";
  std::ostringstream os;
  os << total << " violation(s)";
  for (const auto& v : violations) {
    os << "; " << violation_name(v.kind) << " at (" << v.a << "," << v.b;
    if (v.kind == MetricViolation::Kind::triangle) os << "," << v.c;
    os << ")";
  }
  return os.str();
}

ValidationReport validate_metric(const DistMatrix& dist) {
  using K = MetricViolation::Kind;
  ValidationReport report;
  auto record = [&report](MetricViolation v) {
    report.ok = false;
    ++report.total;
    if (report.violations.size() < 10) report.violations.push_back(v);
  };

  const std::size_t size = dist.size();
  for (std::size_t a = 0; a < size; ++a) {
    if (dist(a, a) != 0) record({K::diagonal, a, a, 0});
    for (std::size_t b = a + 1; b < size; ++b) {
      const Dist d = dist(a, b);
      if (d < 0 || dist(b, a) < 0) {
        record({K::negative, a, b, 0});
      } else if (d != dist(b, a)) {
        record({K::asymmetry, a, b, 0});
      } else if (d == 0) {
        record({K::zero_distance, a, b, 0});
      } else if (d > kMaxDist) {
        record({K::too_large, a, b, 0});
      }
    }
  }
  if (!report.ok) return report;

  // dist(a,c) <= dist(a,b) + dist(b,c), reported as (a, b, c) with b in the middle.
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t c = a + 1; c < size; ++c) {
      for (std::size_t b = 0; b < size; ++b) {
        if (b == a || b == c) continue;
        if (dist(a, c) > dist(a, b) + dist(b, c)) record({K::triangle, a, b, c});
      }
    }
  }
  return report;
}

DistMatrix metric_closure(const DistMatrix& dist) {
  const std::size_t size = dist.size();
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      if (a == b) continue;
      if (dist(a, b) == 0) throw Error(ErrorCode::metric, "zero off-diagonal distance");
      if (dist(a, b) < 0) throw Error(ErrorCode::metric, "negative distance");
    }
  }
  DistMatrix out = dist;
  for (std::size_t a = 0; a < size; ++a) out(a, a) = 0;
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t a = 0; a < size; ++a) {
      const Dist ak = out(a, k);
      for (std::size_t b = 0; b < size; ++b) {
        const Dist kb = out(k, b);
        if (ak > std::numeric_limits<Dist>::max() - kb) continue;
        if (ak + kb < out(a, b)) out(a, b) = ak + kb;
      }
    }
  }
  return out;
}

const char* generator_kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::euclidean: return "euclidean";
    case GeneratorKind::random_metric: return "random-metric";
    case GeneratorKind::line_chain: return "line-chain";
  }
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& text) {
  if (text == "euclidean" || text == "euclid") return GeneratorKind::euclidean;
  if (text == "random-metric" || text == "random") return GeneratorKind::random_metric;
  if (text == "line-chain" || text == "line") return GeneratorKind::line_chain;
  throw Error(ErrorCode::config, "unknown generator kind '" + text + "'");
}

namespace {

// mt19937_64 output is fully specified by the standard; the std distributions
// are not, so reductions are done by hand to keep instances portable.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Dist uniform_in(std::mt19937_64& rng, Dist lo, Dist hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<Dist>(rng() % span);
}

Instance with_sequential_demands(std::size_t n, DistMatrix dist, std::string label) {
  Instance inst;
  inst.n = n;
  inst.dist = std::move(dist);
  inst.label = std::move(label);
  inst.demands.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    inst.demands.push_back({static_cast<TerminalId>(2 * t), static_cast<TerminalId>(2 * t + 1)});
  }
  return inst;
}

DistMatrix euclidean_matrix(std::size_t size, Dist scale, std::mt19937_64& rng) {
  std::vector<double> xs(size), ys(size);
  for (std::size_t k = 0; k < size; ++k) {
    xs[k] = unit_double(rng);
    ys[k] = unit_double(rng);
  }
  DistMatrix dist(size);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = a + 1; b < size; ++b) {
      const double dx = xs[a] - xs[b];
      const double dy = ys[a] - ys[b];
      const auto rounded = static_cast<Dist>(std::llround(static_cast<double>(scale) *
                                                          std::sqrt(dx * dx + dy * dy)));
      // Coincident (after rounding) points are split apart by one unit.
      dist.set(a, b, std::max<Dist>(rounded, 1));
    }
  }
  return dist;
}

DistMatrix random_matrix(std::size_t size, Dist scale, std::mt19937_64& rng) {
  DistMatrix dist(size);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = a + 1; b < size; ++b) dist.set(a, b, uniform_in(rng, 1, scale));
  }
  return dist;
}

// Pair k spans 4^(k mod 16) units; pairs are laid out left to right with a
// randomized gap of at least twice the span, and a random orientation.
DistMatrix line_chain_matrix(std::size_t n, std::mt19937_64& rng) {
  const std::size_t size = 2 * n;
  std::vector<Dist> pos(size);
  Dist cursor = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const Dist span = Dist{1} << (2 * (k % 16));
    const bool flip = (rng() & 1u) != 0;
    pos[2 * k + (flip ? 1 : 0)] = cursor;
    pos[2 * k + (flip ? 0 : 1)] = cursor + span;
    cursor += span + 2 * span + uniform_in(rng, 1, span);
  }
  DistMatrix dist(size);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = a + 1; b < size; ++b) dist.set(a, b, std::abs(pos[a] - pos[b]));
  }
  return dist;
}

}  // namespace

Instance generate_instance(const GeneratorSpec& spec) {
  if (spec.n == 0) throw Error(ErrorCode::config, "generator needs n >= 1");
  if (spec.scale < 1) throw Error(ErrorCode::config, "generator scale must be >= 1");
  std::mt19937_64 rng(spec.seed);
  const std::size_t size = 2 * spec.n;

  DistMatrix dist;
  switch (spec.kind) {
    case GeneratorKind::euclidean:
      dist = metric_closure(euclidean_matrix(size, spec.scale, rng));
      break;
    case GeneratorKind::random_metric:
      dist = metric_closure(random_matrix(size, spec.scale, rng));
      break;
    case GeneratorKind::line_chain:
      dist = line_chain_matrix(spec.n, rng);
      break;
  }
  std::ostringstream label;
  label << generator_kind_name(spec.kind) << " n=" << spec.n << " seed=" << spec.seed
        << " scale=" << spec.scale;
  return with_sequential_demands(spec.n, std::move(dist), label.str());
}

namespace {

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& msg) {
  throw Error(code, "line " + std::to_string(line) + ": " + msg);
}

// Reads the next non-comment, non-blank line; captures "# label ..." comments.
bool next_record(std::istream& in, std::string& line, std::size_t& lineno, std::string* label) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      constexpr std::string_view kTag = "# label ";
      if (label != nullptr && line.compare(first, kTag.size(), kTag) == 0) {
        *label = line.substr(first + kTag.size());
      }
      continue;
    }
    return true;
  }
  return false;
}

Dist parse_dist(const std::string& token, std::size_t lineno) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
    fail(ErrorCode::format_number, lineno, "non-integer distance '" + token + "'");
  }
  if (token.size() > 19) fail(ErrorCode::format_number, lineno, "distance out of range");
  const auto value = std::stoull(token);
  if (value > static_cast<unsigned long long>(kMaxDist)) {
    fail(ErrorCode::format_number, lineno, "distance out of range");
  }
  return static_cast<Dist>(value);
}

}  // namespace

Instance load_instance(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::string label;

  if (!next_record(in, line, lineno, &label)) fail(ErrorCode::format_header, lineno, "empty input");
  std::istringstream header(line);
  std::string magic, extra;
  long long version = -1, terminals = -1, pairs = -1;
  if (!(header >> magic >> version >> terminals >> pairs) || (header >> extra) ||
      magic != "SFONLINE" || version != 1 || pairs < 1 || terminals != 2 * pairs) {
    fail(ErrorCode::format_header, lineno, "expected 'SFONLINE 1 <2n> <n>'");
  }
  const auto n = static_cast<std::size_t>(pairs);
  const std::size_t size = 2 * n;

  if (!next_record(in, line, lineno, &label) || line.find("MATRIX") == std::string::npos ||
      line.find_first_not_of(" \t", line.find("MATRIX") + 6) != std::string::npos) {
    fail(ErrorCode::format_header, lineno, "expected MATRIX");
  }
  DistMatrix dist(size);
  for (std::size_t k = 1; k < size; ++k) {
    if (!next_record(in, line, lineno, &label)) fail(ErrorCode::format_header, lineno, "truncated matrix");
    std::istringstream row(line);
    std::string token;
    std::size_t col = 0;
    while (row >> token) {
      if (col >= k) fail(ErrorCode::format_number, lineno, "too many entries in matrix row");
      dist.set(k, col, parse_dist(token, lineno));
      ++col;
    }
    if (col != k) fail(ErrorCode::format_number, lineno, "too few entries in matrix row");
  }

  if (!next_record(in, line, lineno, &label) || line.find("DEMANDS") == std::string::npos) {
    fail(ErrorCode::format_header, lineno, "expected DEMANDS");
  }
  std::vector<Demand> demands;
  std::vector<bool> seen(size, false);
  for (std::size_t t = 0; t < n; ++t) {
    if (!next_record(in, line, lineno, &label)) fail(ErrorCode::format_demand, lineno, "truncated demands");
    std::istringstream row(line);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || (row >> extra)) fail(ErrorCode::format_demand, lineno, "expected 'u v'");
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= size || static_cast<std::size_t>(v) >= size) {
      fail(ErrorCode::format_demand, lineno, "terminal id out of range");
    }
    if (seen[u] || seen[v] || u == v) fail(ErrorCode::format_demand, lineno, "terminal in two pairs");
    seen[u] = seen[v] = true;
    if (static_cast<std::size_t>(u) != 2 * t || static_cast<std::size_t>(v) != 2 * t + 1) {
      fail(ErrorCode::format_demand, lineno,
           "demand " + std::to_string(t + 1) + " must be '" + std::to_string(2 * t) + " " +
               std::to_string(2 * t + 1) + "'");
    }
    demands.push_back({static_cast<TerminalId>(u), static_cast<TerminalId>(v)});
  }
  if (next_record(in, line, lineno, &label)) fail(ErrorCode::format_header, lineno, "trailing content");

  const auto report = validate_metric(dist);
  if (!report.ok) throw Error(ErrorCode::metric, "metric violation: " + report.describe());

  Instance inst;
  inst.n = n;
  inst.dist = std::move(dist);
  inst.demands = std::move(demands);
  inst.label = std::move(label);
  return inst;
}

void save_instance(const Instance& inst, std::ostream& out) {
  const std::size_t size = inst.terminal_count();
  out << "SFONLINE 1 " << size << ' ' << inst.n << '\n';
  if (!inst.label.empty()) out << "# label " << inst.label << '\n';
  out << "MATRIX\n";
  for (std::size_t k = 1; k < size; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j != 0) out << ' ';
      out << inst.dist(k, j);
    }
    out << '\n';
  }
  out << "DEMANDS\n";
  for (const auto& d : inst.demands) out << d.u << ' ' << d.v << '\n';
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config, "cannot open '" + path + "'");
  return load_instance(in);
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::config, "cannot write '" + path + "'");
  save_instance(inst, out);
}

Dist edge_cost(const InstanceView& view, const std::vector<Edge>& edges) {
  Dist total = 0;
  for (const auto& e : edges) total += view.cost(e);
  return total;
}

}  // namespace sfo
