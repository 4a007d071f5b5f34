// pathgain: command-line front end over the library.
//
// Exit status: 0 success or solvable, 1 unsolvable or failed verification,
// 2 bad input, 3 search budget exceeded.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathgain/equations.hpp"
#include "pathgain/error.hpp"
#include "pathgain/forest.hpp"
#include "pathgain/harness.hpp"
#include "pathgain/io.hpp"
#include "pathgain/network.hpp"
#include "pathgain/poly.hpp"
#include "pathgain/recover.hpp"
#include "pathgain/simplify.hpp"
#include "pathgain/solve.hpp"

namespace fs = std::filesystem;
using namespace pathgain;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kBudget = 3;

struct Options {
  std::string input, second, out;
  std::string field = "2";
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 42;
  int trials = 200;
  int depth = BranchOptions{}.depth;
  int width = BranchOptions{}.width;
  std::string formulation = "path";
  std::string convention = "reduced";
  bool text = false;
  int nodes = 87, edges = 161, sources = 5, sinks = 10;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BudgetExceeded:
      return kBudget;
    case ErrorKind::UnsatisfiableDemand:
    case ErrorKind::InadmissibleCharacteristic:
    case ErrorKind::NotASolution:
    case ErrorKind::RankViolation:
    case ErrorKind::LiftInconsistency:
      return kNegative;
    default:
      return kInputError;
  }
}

template <class Json>
void emit(const Options& opt, const Json& doc) {
  if (opt.out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_json_atomic(fs::path(opt.out), doc);
  }
}

BranchOptions branch_options(const Options& opt) { return BranchOptions{opt.depth, opt.width}; }

/// Problem files carry "nodes", system files carry "equations".
bool is_problem_file(const std::string& path) {
  const auto doc = read_json(path);
  if (doc.is_object() && doc.contains("nodes")) return true;
  if (doc.is_object() && doc.contains("equations")) return false;
  raise(ErrorKind::ParseError, path + ": neither a problem nor an equation system");
}

PolySystem load_any_system(const std::string& path) {
  return is_problem_file(path) ? build_path_system(problem_load(path)) : system_load(path);
}

int cmd_transform(const Options& opt) {
  const Problem problem = problem_load(opt.input);
  const Forest forest = transform(problem, topo_sort(problem));
  emit(opt, forest_to_json(forest, problem));
  return kOk;
}

int cmd_equations(const Options& opt) {
  const Problem problem = problem_load(opt.input);
  PolySystem system;
  if (opt.formulation == "path") {
    system = build_path_system(problem);
  } else {
    system = build_km_system(problem, opt.convention == "full" ? GainConvention::Full : GainConvention::Reduced);
  }
  if (opt.text) {
    std::cout << system.to_text();
    if (!opt.out.empty()) system_save(system, opt.out);
  } else {
    emit(opt, system_to_json(system));
  }
  return kOk;
}

int cmd_simplify(const Options& opt) {
  const auto result = simplify(load_any_system(opt.input), branch_options(opt));
  if (opt.text) {
    std::cout << result.reduced.to_text() << "verdict: " << result.verdict.to_string() << "\n";
    if (!opt.out.empty()) simplify_result_save(result, opt.out);
  } else {
    emit(opt, simplify_result_to_json(result));
  }
  return kOk;
}

int cmd_analyze(const Options& opt) {
  const auto result = simplify(load_any_system(opt.input), branch_options(opt));
  nlohmann::ordered_json doc;
  doc["verdict"] = result.verdict.to_string();
  doc["constants"] = result.constants;
  doc["branch_log"] = result.branch_log;
  doc["branch_budget_exceeded"] = result.branch_budget_exceeded;
  doc["variables"] = result.original.num_variables();
  doc["equations"] = result.original.size();
  doc["reduced_variables"] = result.reduced.active_variables().size();
  doc["reduced_equations"] = result.reduced.size();
  emit(opt, doc);
  return result.verdict.kind == CharVerdict::Kind::Unsolvable ? kNegative : kOk;
}

int cmd_solve(const Options& opt) {
  const FieldSpec field = FieldSpec::parse(opt.field);
  SystemOutcome outcome;
  if (is_problem_file(opt.input)) {
    const Problem problem = problem_load(opt.input);
    PolySystem system;
    try {
      system = build_path_system(problem);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnsatisfiableDemand) throw;
      nlohmann::ordered_json doc;
      doc["field"] = field.name();
      doc["solvable"] = false;
      doc["verdict"] = "unsolvable";
      doc["reason"] = e.what();
      emit(opt, doc);
      return kNegative;
    }
    outcome = solve_system(system, field, opt.budget, branch_options(opt));
  } else {
    outcome = solve_system(system_load(opt.input), field, opt.budget, branch_options(opt));
  }
  if (outcome.solvable) {
    emit(opt, solution_to_json(*outcome.witness));
    return kOk;
  }
  nlohmann::ordered_json doc;
  doc["field"] = field.name();
  doc["solvable"] = false;
  doc["verdict"] = outcome.simplified.verdict.to_string();
  doc["reason"] = outcome.reason;
  emit(opt, doc);
  return kNegative;
}

int cmd_recover(const Options& opt) {
  const Problem problem = problem_load(opt.input);
  const Forest forest = transform(problem, topo_sort(problem));
  const NetworkCode code = derive_code(problem, forest, solution_load(opt.second));
  emit(opt, code_to_json(code));
  return kOk;
}

int cmd_verify(const Options& opt) {
  const Problem problem = problem_load(opt.input);
  const NetworkCode code = code_load(opt.second);
  const VerifyReport report = verify_code(problem, code);
  emit(opt, verify_report_to_json(report, code.field));
  return report.pass ? kOk : kNegative;
}

int cmd_compare_oracle(const Options& opt) {
  OracleConfig config;
  config.trials = opt.trials;
  config.seed = opt.seed;
  config.field = FieldSpec::parse(opt.field);
  config.budget = opt.budget;
  const OracleReport report = compare_oracle(config);
  emit(opt, oracle_report_to_json(report));
  return report.ok() ? kOk : kNegative;
}

int cmd_bench(const Options& opt) {
  emit(opt, bench_report_to_json(bench(opt.seed, opt.nodes, opt.edges, opt.sources, opt.sinks)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-gain formulation tools for scalar linear network coding"};
  app.require_subcommand(1);
  Options opt;

  auto add_out = [&opt](CLI::App* c) { c->add_option("--out", opt.out, "Output file (default: standard output)"); };
  auto add_input = [&opt](CLI::App* c, const std::string& what) {
    c->add_option("input", opt.input, what)->required()->check(CLI::ExistingFile);
  };
  auto add_branch = [&opt](CLI::App* c) {
    c->add_option("--depth", opt.depth, "Branch analysis depth")->check(CLI::NonNegativeNumber);
    c->add_option("--width", opt.width, "Branch analysis call limit")->check(CLI::PositiveNumber);
  };

  auto* transform_cmd = app.add_subcommand("transform", "Write the transformed forest of a problem");
  add_input(transform_cmd, "Problem file");
  add_out(transform_cmd);

  auto* equations_cmd = app.add_subcommand("equations", "Write the equation system of a problem");
  add_input(equations_cmd, "Problem file");
  equations_cmd->add_option("--formulation", opt.formulation, "path or edge")
      ->check(CLI::IsMember({"path", "edge"}));
  equations_cmd->add_option("--convention", opt.convention, "Edge-gain variables: reduced or full")
      ->check(CLI::IsMember({"reduced", "full"}));
  equations_cmd->add_flag("--text", opt.text, "Print equations as text");
  add_out(equations_cmd);

  auto* simplify_cmd = app.add_subcommand("simplify", "Simplify a system (or a problem's path-gain system)");
  add_input(simplify_cmd, "System or problem file");
  simplify_cmd->add_flag("--text", opt.text, "Print the reduced system as text");
  add_branch(simplify_cmd);
  add_out(simplify_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Report the characteristic verdict of a system");
  add_input(analyze_cmd, "System or problem file");
  add_branch(analyze_cmd);
  add_out(analyze_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "Search for a solution over a finite field");
  add_input(solve_cmd, "System or problem file");
  solve_cmd->add_option("--field", opt.field, "Field as p^m");
  solve_cmd->add_option("--budget", opt.budget, "Brute-force budget");
  add_branch(solve_cmd);
  add_out(solve_cmd);

  auto* recover_cmd = app.add_subcommand("recover", "Derive a network code from a path-gain solution");
  add_input(recover_cmd, "Problem file");
  recover_cmd->add_option("solution", opt.second, "Solution file")->required()->check(CLI::ExistingFile);
  add_out(recover_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Check a network code by forward propagation");
  add_input(verify_cmd, "Problem file");
  verify_cmd->add_option("code", opt.second, "Network code file")->required()->check(CLI::ExistingFile);
  add_out(verify_cmd);

  auto* oracle_cmd = app.add_subcommand("compare-oracle", "Compare both formulations on random DAGs");
  oracle_cmd->add_option("--trials", opt.trials, "Number of random instances")->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--seed", opt.seed, "Generator seed");
  oracle_cmd->add_option("--field", opt.field, "Field as p^m");
  oracle_cmd->add_option("--budget", opt.budget, "Brute-force budget per system");
  add_out(oracle_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "Time the pipeline on a random DAG");
  bench_cmd->add_option("--seed", opt.seed, "Generator seed");
  bench_cmd->add_option("--nodes", opt.nodes, "Node count")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--edges", opt.edges, "Edge count")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--sources", opt.sources, "Source count")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--sinks", opt.sinks, "Sink count")->check(CLI::NonNegativeNumber);
  add_out(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (transform_cmd->parsed()) return cmd_transform(opt);
    if (equations_cmd->parsed()) return cmd_equations(opt);
    if (simplify_cmd->parsed()) return cmd_simplify(opt);
    if (analyze_cmd->parsed()) return cmd_analyze(opt);
    if (solve_cmd->parsed()) return cmd_solve(opt);
    if (recover_cmd->parsed()) return cmd_recover(opt);
    if (verify_cmd->parsed()) return cmd_verify(opt);
    if (oracle_cmd->parsed()) return cmd_compare_oracle(opt);
    if (bench_cmd->parsed()) return cmd_bench(opt);
  } catch (const Error& e) {
    std::cerr << "pathgain: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "pathgain: malformed input: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "pathgain: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
