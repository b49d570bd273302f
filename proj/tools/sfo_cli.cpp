// sfo: command-line driver for the online Steiner forest library.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sfo/certify.hpp"
#include "sfo/clustering.hpp"
#include "sfo/error.hpp"
#include "sfo/harness.hpp"
#include "sfo/metric.hpp"
#include "sfo/oracles.hpp"
#include "sfo/trace.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitGeneric = 1;
constexpr int kExitFormat = 2;
constexpr int kExitMetric = 3;
constexpr int kExitConfig = 4;
constexpr int kExitOracle = 5;
constexpr int kExitCertify = 7;

int exit_code_for(sfo::ErrorCode code) {
  switch (code) {
    case sfo::ErrorCode::format_header:
    case sfo::ErrorCode::format_number:
    case sfo::ErrorCode::format_demand: return kExitFormat;
    case sfo::ErrorCode::metric: return kExitMetric;
    case sfo::ErrorCode::config: return kExitConfig;
    case sfo::ErrorCode::oracle_limit: return kExitOracle;
    case sfo::ErrorCode::invariant: return kExitGeneric;
  }
  return kExitGeneric;
}

struct Global {
  std::string out;
  std::uint64_t seed = 1;
  bool quiet = false;
};

struct Source {
  std::string input;
  std::string kind = "euclid";
  std::size_t n = 0;
  sfo::Dist scale = 1000;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--input,-i", input, "SFONLINE instance file");
    cmd->add_option("--kind", kind, "generator: euclid | random | line");
    cmd->add_option("--n", n, "pairs to generate when no input is given");
    cmd->add_option("--scale", scale, "generator distance scale");
  }

  sfo::Instance load(const Global& g) const {
    if (!input.empty()) return sfo::load_instance_file(input);
    if (n == 0) throw sfo::Error(sfo::ErrorCode::config, "give --input or a generator with --n >= 1");
    return sfo::generate_instance({sfo::parse_generator_kind(kind), n, g.seed, scale});
  }
};

std::size_t parse_lambda(const std::string& text) {
  if (text == "auto") return 0;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size() && v >= 1) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw sfo::Error(sfo::ErrorCode::config, "lambda must be a positive integer or 'auto', got '" + text + "'");
}

std::vector<std::size_t> parse_lambda_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_lambda(item));
  }
  return out;
}

// Writes to <out>/<name> when an output directory is set, else to stdout.
template <class Fn>
void emit(const Global& g, const std::string& name, Fn&& fn) {
  if (g.out.empty()) {
    fn(std::cout);
    return;
  }
  fs::create_directories(g.out);
  std::ofstream file(fs::path(g.out) / name);
  if (!file) throw sfo::Error(sfo::ErrorCode::config, "cannot write to " + g.out);
  fn(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online low-recourse Steiner forest"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "generator seed");
  app.add_flag("--quiet,-q", g.quiet, "suppress progress on stderr");

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string gen_kind = "euclid";
  long long gen_n = -1;
  sfo::Dist gen_scale = 1000;
  gen->add_option("--kind", gen_kind, "euclid | random | line");
  gen->add_option("--n", gen_n, "number of pairs")->required();
  gen->add_option("--scale", gen_scale, "distance scale");

  // run
  auto* run = app.add_subcommand("run", "run the online algorithm");
  Source run_src;
  run_src.add_to(run);
  std::string run_lambda = "auto", run_checks = "structural";
  std::size_t run_limit = sfo::kDefaultOracleLimit;
  bool dump = false, doubling = false;
  run->add_option("--lambda", run_lambda, "pinning parameter or 'auto' (ceil log2 n)");
  run->add_option("--checks", run_checks, "none | structural | full-witness");
  run->add_option("--oracle-limit", run_limit, "largest prefix solved exactly");
  run->add_flag("--dump-hierarchy", dump, "write the clustering hierarchy of every arrival");
  run->add_flag("--doubling", doubling, "do not assume n: double an estimate and replay on overflow");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run several lambdas on one instance");
  Source sweep_src;
  sweep_src.add_to(sweep);
  std::string sweep_lambdas, sweep_checks = "structural";
  std::size_t sweep_limit = sfo::kDefaultOracleLimit;
  sweep->add_option("--lambdas", sweep_lambdas, "comma separated list, e.g. 1,2,auto")->required();
  sweep->add_option("--checks", sweep_checks, "none | structural | full-witness");
  sweep->add_option("--oracle-limit", sweep_limit, "largest prefix solved exactly");

  // compare
  auto* compare = app.add_subcommand("compare", "compare against the baselines");
  Source cmp_src;
  cmp_src.add_to(compare);
  std::string cmp_lambda = "auto";
  std::size_t cmp_limit = sfo::kDefaultOracleLimit;
  compare->add_option("--lambda", cmp_lambda, "pinning parameter or 'auto'");
  compare->add_option("--oracle-limit", cmp_limit, "largest prefix solved exactly");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact optimum of a prefix");
  Source oracle_src;
  oracle_src.add_to(oracle);
  std::size_t oracle_t = 0, oracle_limit = sfo::kDefaultOracleLimit;
  oracle->add_option("--t", oracle_t, "prefix length (default: all pairs)");
  oracle->add_option("--oracle-limit", oracle_limit, "refuse prefixes longer than this");

  // certify
  auto* certify = app.add_subcommand("certify", "certify a recorded trace");
  std::string trace_dir, levels = "all";
  std::size_t cert_limit = sfo::kDefaultOracleLimit;
  certify->add_option("--trace", trace_dir, "trace directory written by run")->required();
  certify->add_option("--levels", levels, "all | i");
  certify->add_option("--oracle-limit", cert_limit, "largest prefix solved exactly");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gen) {
      if (gen_n < 1) throw sfo::Error(sfo::ErrorCode::config, "--n must be at least 1");
      const auto inst =
          sfo::generate_instance({sfo::parse_generator_kind(gen_kind), static_cast<std::size_t>(gen_n), g.seed, gen_scale});
      emit(g, "instance.sfo", [&](std::ostream& out) { sfo::save_instance(inst, out); });
      return 0;
    }

    if (*run) {
      const auto inst = run_src.load(g);
      sfo::RunConfig config;
      config.lambda = parse_lambda(run_lambda);
      config.checks = sfo::parse_check_mode(run_checks);
      config.oracle_limit = run_limit;
      config.doubling = doubling;
      const auto outcome = sfo::execute_run(inst, config);
      if (g.out.empty()) {
        sfo::write_run_csv(outcome, std::cout);
        if (!g.quiet) sfo::write_run_summary(outcome, std::cerr);
      } else {
        sfo::save_run(outcome, g.out);
        if (!g.quiet) sfo::write_run_summary(outcome, std::cout);
      }
      if (dump) {
        emit(g, "hierarchy.txt", [&](std::ostream& out) {
          for (const auto& rec : outcome.trace.arrivals) {
            out << "# arrival " << rec.t << '\n';
            sfo::dump_hierarchy(rec.hierarchy, out);
          }
        });
      }
      return outcome.report && !outcome.report->ok() ? kExitCertify : 0;
    }

    if (*sweep) {
      const auto inst = sweep_src.load(g);
      std::vector<std::size_t> lambdas;
      for (std::size_t l : parse_lambda_list(sweep_lambdas)) lambdas.push_back(l == 0 ? sfo::auto_lambda(inst.n) : l);
      if (lambdas.empty()) throw sfo::Error(sfo::ErrorCode::config, "empty lambda list");
      sfo::RunConfig config;
      config.checks = sfo::parse_check_mode(sweep_checks);
      config.oracle_limit = sweep_limit;
      std::vector<std::string> warnings;
      const auto rows = sfo::execute_sweep(inst, config, lambdas, warnings, g.out);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      emit(g, "sweep.csv", [&](std::ostream& out) { sfo::write_sweep_csv(rows, out); });
      bool all_ok = true;
      for (const auto& r : rows) all_ok = all_ok && r.certified;
      return all_ok ? 0 : kExitCertify;
    }

    if (*compare) {
      const auto inst = cmp_src.load(g);
      sfo::RunConfig config;
      config.lambda = parse_lambda(cmp_lambda);
      config.oracle_limit = cmp_limit;
      const auto result = sfo::execute_compare(inst, config);
      emit(g, "compare.csv", [&](std::ostream& out) { sfo::write_compare_csv(result, out); });
      if (g.out.empty()) {
        if (!g.quiet) sfo::write_compare_summary(result, std::cerr);
      } else {
        emit(g, "compare_summary.txt", [&](std::ostream& out) { sfo::write_compare_summary(result, out); });
      }
      return 0;
    }

    if (*oracle) {
      const auto inst = oracle_src.load(g);
      const std::size_t t = oracle_t == 0 ? inst.n : oracle_t;
      const auto opt = sfo::exact_optimum(sfo::InstanceView(inst, t), oracle_limit);
      emit(g, "oracle.txt", [&](std::ostream& out) {
        out << "OPT " << opt.cost << '\n';
        for (const auto& group : opt.partition) {
          for (std::size_t k = 0; k < group.size(); ++k) out << (k ? " " : "") << group[k];
          out << '\n';
        }
      });
      return 0;
    }

    if (*certify) {
      const auto loaded = sfo::read_trace(trace_dir);
      sfo::CertifyOptions options;
      if (levels != "all") {
        try {
          options.only_level = std::stoi(levels);
        } catch (const std::exception&) {
          throw sfo::Error(sfo::ErrorCode::config, "--levels must be 'all' or a level index");
        }
        if (*options.only_level < 0 || *options.only_level > sfo::kMaxLevel) {
          throw sfo::Error(sfo::ErrorCode::config, "--levels out of range");
        }
      }
      auto opt = sfo::prefix_optima(*loaded.instance, cert_limit);
      opt.resize(loaded.trace.arrivals.size());
      const auto report = sfo::check_run(loaded.trace, opt, options);
      if (g.out.empty()) {
        report.write_summary(std::cout);
        report.write_csv(std::cout);
      } else {
        emit(g, "certify.txt", [&](std::ostream& out) { report.write_summary(out); });
        emit(g, "certify.csv", [&](std::ostream& out) { report.write_csv(out); });
        if (!g.quiet) report.write_summary(std::cout);
      }
      return report.ok() ? 0 : kExitCertify;
    }
  } catch (const sfo::Error& e) {
    std::cerr << "sfo: " << sfo::error_code_name(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "sfo: " << e.what() << '\n';
    return kExitGeneric;
  }
  return 0;
}
