#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "sfo/clustering.hpp"
#include "sfo/error.hpp"
#include "sfo/metric.hpp"

using namespace sfo;

namespace {

DistMatrix matrix(std::initializer_list<std::initializer_list<Dist>> rows) {
  DistMatrix m(rows.size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (Dist d : row) m(i, j++) = d;
    ++i;
  }
  return m;
}

ErrorCode load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    load_instance(in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a load error");
  return ErrorCode::invariant;
}

}  // namespace

TEST_CASE("validate_metric accepts the smallest metric") {
  CHECK(validate_metric(matrix({{0, 1}, {1, 0}})).ok);
}

TEST_CASE("validate_metric reports asymmetry") {
  const auto r = validate_metric(matrix({{0, 1}, {2, 0}}));
  REQUIRE_FALSE(r.ok);
  REQUIRE_FALSE(r.violations.empty());
  CHECK(r.violations.front().kind == MetricViolation::Kind::asymmetry);
  CHECK(r.violations.front().a == 0);
  CHECK(r.violations.front().b == 1);
}

TEST_CASE("validate_metric reports the broken triangle") {
  const auto r = validate_metric(matrix({{0, 1, 10}, {1, 0, 1}, {10, 1, 0}}));
  REQUIRE_FALSE(r.ok);
  bool found = false;
  for (const auto& v : r.violations) {
    found = found || (v.kind == MetricViolation::Kind::triangle && v.a == 0 && v.b == 1 && v.c == 2);
  }
  CHECK(found);
}

TEST_CASE("validate_metric flags zero distances and the diagonal") {
  CHECK_FALSE(validate_metric(matrix({{0, 0}, {0, 0}})).ok);
  CHECK_FALSE(validate_metric(matrix({{1, 1}, {1, 0}})).ok);
  CHECK_FALSE(validate_metric(matrix({{0, kMaxDist + 1}, {kMaxDist + 1, 0}})).ok);
}

TEST_CASE("metric_closure") {
  const auto fixed = matrix({{0, 1}, {1, 0}});
  CHECK(metric_closure(fixed) == fixed);

  const auto closed = metric_closure(matrix({{0, 1, 10}, {1, 0, 1}, {10, 1, 0}}));
  CHECK(closed(0, 2) == 2);
  CHECK(closed(2, 0) == 2);
  CHECK(validate_metric(closed).ok);
  CHECK(metric_closure(closed) == closed);

  CHECK_THROWS_AS(metric_closure(matrix({{0, 0}, {0, 0}})), Error);
}

TEST_CASE("generated instances are metrics and deterministic") {
  for (auto kind : {GeneratorKind::euclidean, GeneratorKind::random_metric, GeneratorKind::line_chain}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const GeneratorSpec spec{kind, 7, seed, 500};
      const auto inst = generate_instance(spec);
      CHECK(inst.n == 7);
      CHECK(inst.dist.size() == 14);
      CHECK(validate_metric(inst.dist).ok);
      CHECK(generate_instance(spec) == inst);
    }
  }
  std::ostringstream a, b;
  save_instance(generate_instance({GeneratorKind::euclidean, 5, 7}), a);
  save_instance(generate_instance({GeneratorKind::euclidean, 5, 7}), b);
  CHECK(a.str() == b.str());
  CHECK_THROWS_AS(generate_instance({GeneratorKind::euclidean, 0, 1}), Error);
}

TEST_CASE("line-chain spans give levels 0 and 2") {
  const auto inst = generate_instance({GeneratorKind::line_chain, 2, 3});
  const InstanceView view(inst, 2);
  CHECK(inst.dist(0, 1) == 1);
  CHECK(inst.dist(2, 3) == 4);
  CHECK(terminal_level(view, 0) == 0);
  CHECK(terminal_level(view, 3) == 2);
}

TEST_CASE("load minimal instance and round trip") {
  std::istringstream in("SFONLINE 1 2 1\nMATRIX\n1\nDEMANDS\n0 1\n");
  const auto inst = load_instance(in);
  CHECK(inst.n == 1);
  CHECK(inst.dist(0, 1) == 1);

  for (auto kind : {GeneratorKind::euclidean, GeneratorKind::random_metric, GeneratorKind::line_chain}) {
    const auto g = generate_instance({kind, 6, 11});
    std::stringstream io;
    save_instance(g, io);
    CHECK(load_instance(io) == g);
  }
}

TEST_CASE("load errors carry distinct codes") {
  CHECK(load_error("") == ErrorCode::format_header);
  CHECK(load_error("SFONLINE 2 2 1\nMATRIX\n1\nDEMANDS\n0 1\n") == ErrorCode::format_header);
  CHECK(load_error("SFONLINE 1 3 1\nMATRIX\n1\nDEMANDS\n0 1\n") == ErrorCode::format_header);
  CHECK(load_error("SFONLINE 1 2 1\nMATRIX\nx\nDEMANDS\n0 1\n") == ErrorCode::format_number);
  CHECK(load_error("SFONLINE 1 2 1\nMATRIX\n1.5\nDEMANDS\n0 1\n") == ErrorCode::format_number);
  CHECK(load_error("SFONLINE 1 4 2\nMATRIX\n1\n2 1\n3 2 1\nDEMANDS\n0 1\n1 2\n") == ErrorCode::format_demand);
  CHECK(load_error("SFONLINE 1 4 2\nMATRIX\n1\n2 1\n3 2 1\nDEMANDS\n2 3\n0 1\n") == ErrorCode::format_demand);
  CHECK(load_error("SFONLINE 1 4 2\nMATRIX\n1\n10 1\n1 1 1\nDEMANDS\n0 1\n2 3\n") == ErrorCode::metric);
}

TEST_CASE("label comment survives a round trip") {
  auto inst = test::w1();
  inst.label = "w1 line";
  std::stringstream io;
  save_instance(inst, io);
  CHECK(load_instance(io).label == "w1 line");
}

TEST_CASE("instance view") {
  const auto inst = test::w1();
  const InstanceView v1(inst, 1);
  CHECK(v1.terminal_count() == 2);
  CHECK(v1.contains(1));
  CHECK_FALSE(v1.contains(2));
  CHECK(v1.demand(1) == Demand{0, 1});
  CHECK(mate(2) == 3);
  CHECK(mate(3) == 2);
  CHECK_THROWS_AS(InstanceView(inst, 3), Error);
}
