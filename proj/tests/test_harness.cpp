#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "sfo/error.hpp"
#include "sfo/harness.hpp"

using namespace sfo;

namespace {

template <class Fn>
std::string capture(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

}  // namespace

TEST_CASE("auto lambda") {
  CHECK(auto_lambda(1) == 1);
  CHECK(auto_lambda(2) == 1);
  CHECK(auto_lambda(5) == 3);
  CHECK(auto_lambda(8) == 3);
  CHECK(resolve_lambda(RunConfig{4}, 100) == 4);
  CHECK(parse_check_mode("full-witness") == CheckMode::full);
  CHECK_THROWS_AS(parse_check_mode("everything"), Error);
}

TEST_CASE("run report on W1") {
  const auto inst = test::w1();
  RunConfig config;
  config.lambda = 1;
  const auto run = execute_run(inst, config);
  REQUIRE(run.report);
  CHECK(run.report->ok());
  const auto csv = capture([&](std::ostream& o) { write_run_csv(run, o); });
  CHECK(csv ==
        "t,cost_F,cost_A,cost_forestforming,OPT_t_or_blank,insertions,deletions,cum_insertions,cum_deletions,"
        "pinned_count,max_level\n"
        "1,1,1,1,1,1,0,1,0,1,0\n"
        "2,5,5,5,5,1,0,2,0,2,2\n");
  CHECK(run.max_ratio() == doctest::Approx(1.0));
}

TEST_CASE("OPT column is blank past the oracle limit") {
  const auto inst = generate_instance({GeneratorKind::euclidean, 5, 2});
  RunConfig config;
  config.oracle_limit = 3;
  config.checks = CheckMode::none;
  const auto run = execute_run(inst, config);
  CHECK_FALSE(run.report);
  const auto csv = capture([&](std::ostream& o) { write_run_csv(run, o); });
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  for (std::size_t t = 1; t <= 5; ++t) {
    std::getline(is, line);
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    CHECK(cells.at(4).empty() == (t > 3));
  }
}

TEST_CASE("recourse bound on a larger run") {
  const auto inst = generate_instance({GeneratorKind::euclidean, 30, 1});
  RunConfig config;
  config.lambda = 5;
  config.oracle_limit = 0;
  const auto run = execute_run(inst, config);
  CHECK(run.report->ok());
  CHECK(run.trace.arrivals.back().ledger.cum_insertions <= 2 * 30 + 21 * 30 * 5);
}

TEST_CASE("sweep") {
  const auto inst = generate_instance({GeneratorKind::random_metric, 6, 3});
  std::vector<std::string> warnings;
  const auto rows = execute_sweep(inst, RunConfig{}, {3, 1, 3}, warnings);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].lambda == 1);
  CHECK(rows[1].lambda == 3);
  CHECK(warnings.size() == 1);
  for (const auto& r : rows) {
    CHECK(r.certified);
    CHECK(r.insertions_per_n_lambda() <= 2.0 / static_cast<double>(r.lambda) + 21.0);
    REQUIRE(r.opt);
    CHECK(*r.opt <= r.final_cost);
  }
  const auto a = capture([&](std::ostream& o) { write_sweep_csv(rows, o); });
  std::vector<std::string> w2;
  const auto b = capture([&](std::ostream& o) { write_sweep_csv(execute_sweep(inst, RunConfig{}, {1, 3}, w2), o); });
  CHECK(a == b);
  CHECK(a.rfind("lambda,final_cost,opt,ratio,insertions,insertions_per_n_lambda\n", 0) == 0);

  CHECK_THROWS_AS(execute_sweep(inst, RunConfig{}, {}, warnings), Error);
}

TEST_CASE("compare on W1") {
  const auto inst = test::w1();
  const auto result = execute_compare(inst, RunConfig{});
  REQUIRE(result.steps.size() == 2);
  for (std::size_t m = 0; m < kMethodCount; ++m) {
    CHECK(result.steps[1].cost[m] == 5);
    CHECK(result.steps[1].feasible[m]);
  }
}

TEST_CASE("compare on random instances") {
  for (const auto& inst : test::random_instances(12, 8, 7000)) {
    const auto result = execute_compare(inst, RunConfig{});
    for (const auto& s : result.steps) {
      REQUIRE(s.opt);
      for (std::size_t m = 0; m < kMethodCount; ++m) {
        CHECK(s.cost[m] >= *s.opt);
        CHECK(s.feasible[m]);
      }
      CHECK(s.deletions[1] == 0);
      CHECK(s.deletions[2] == 0);
    }
    const auto a = capture([&](std::ostream& o) { write_compare_csv(result, o); });
    const auto b = capture([&](std::ostream& o) { write_compare_csv(execute_compare(inst, RunConfig{}), o); });
    CHECK(a == b);
  }
}

TEST_CASE("doubling mode") {
  for (const auto& inst : test::random_instances(9, 8, 8000)) {
    RunConfig fixed;
    fixed.lambda = 2;
    RunConfig doubled = fixed;
    doubled.doubling = true;
    const auto a = execute_run(inst, fixed);
    const auto b = execute_run(inst, doubled);
    // A fixed lambda replays identically, so restarts cost no recourse.
    REQUIRE(a.trace.arrivals.size() == b.trace.arrivals.size());
    for (std::size_t k = 0; k < a.trace.arrivals.size(); ++k) {
      CHECK(a.trace.arrivals[k].snapshot.edges == b.trace.arrivals[k].snapshot.edges);
      CHECK(a.trace.arrivals[k].ledger == b.trace.arrivals[k].ledger);
    }
    CHECK(b.restarts == static_cast<std::size_t>(inst.n > 1 ? ceil_log2(static_cast<Dist>(inst.n)) : 0));

    RunConfig adaptive;
    adaptive.doubling = true;
    const auto c = execute_run(inst, adaptive);
    REQUIRE(c.report);
    CHECK(c.report->ok());
    CHECK(c.trace.lambda == auto_lambda(std::size_t{1} << c.restarts));
    std::size_t sum = 0;
    for (const auto& rec : c.trace.arrivals) {
      sum += rec.ledger.insertions;
      CHECK(rec.ledger.cum_insertions == sum);
    }
  }
}
