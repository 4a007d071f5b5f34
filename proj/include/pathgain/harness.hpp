#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathgain/galois.hpp"
#include "pathgain/network.hpp"
#include "pathgain/solve.hpp"

namespace pathgain {

/// Nodes 1..n_nodes, edges drawn with replacement as (low, high) pairs,
/// sources from nodes without inputs, sinks from nodes without outputs.
/// Sinks reached by some source are preferred, and each sink demands a
/// source that reaches it when one does. Retries with
/// the same generator a bounded number of times, then raises InfeasibleParams.
Problem random_dag(std::uint64_t seed, int n_nodes, int n_edges, int n_sources, int n_sinks);

struct OracleConfig {
  int trials = 200;
  std::uint64_t seed = 42;
  FieldSpec field = FieldSpec::make(2, 1);
  std::uint64_t budget = kDefaultBudget;
  int min_nodes = 5;
  int max_nodes = 8;
  int max_edges = 12;
  int sources = 2;
  int min_sinks = 2;
  int max_sinks = 3;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  int nodes = 0, edges = 0, sinks = 0;
  bool skipped = false;  // a brute force ran over budget
  bool path_solvable = false;
  bool km_solvable = false;
  bool witness_verified = false;
  std::string note;
};

struct OracleReport {
  int trials = 0;
  int agree = 0;
  int disagree = 0;
  int skipped = 0;
  int solvable = 0;
  int witnesses = 0;
  int witnesses_verified = 0;
  /// Invariant breaches: degree above 2, rank violations, failed lifts.
  int degree_violations = 0;
  int rank_violations = 0;
  int lift_failures = 0;
  std::vector<TrialRecord> records;

  bool ok() const {
    return disagree == 0 && witnesses == witnesses_verified && degree_violations == 0 && rank_violations == 0 &&
           lift_failures == 0;
  }
};

/// Path-gain solvability against brute force on the edge-gain system for
/// `trials` random DAGs; witnesses go through derive_code and verify_code.
OracleReport compare_oracle(const OracleConfig& config);
nlohmann::ordered_json oracle_report_to_json(const OracleReport& report);

struct PreservationCheck {
  bool skipped = false;
  bool original_solvable = false;
  bool admissible = false;
  bool reduced_solvable = false;
  bool agree() const { return skipped || original_solvable == (admissible && reduced_solvable); }
};

/// Brute force on the system and on its simplification.
PreservationCheck check_preservation(const PolySystem& system, const FieldSpec& field,
                                     std::uint64_t budget = kDefaultBudget);

struct BenchReport {
  std::uint64_t seed = 0;  // seed of the instance actually measured
  int nodes = 0, edges = 0, sources = 0, sinks = 0;
  double transform_ms = 0, equations_ms = 0, simplify_ms = 0;
  std::size_t leaf_vars = 0, tree_nodes = 0;
  std::size_t variables = 0, linear = 0, quadratic = 0;
  std::size_t reduced_variables = 0, reduced_equations = 0, reduced_linear = 0, reduced_quadratic = 0;
  std::string verdict;
  std::string note;
};

/// Times transform, equation build and simplification on one random DAG.
/// Seeds seed, seed+1, ... are tried until every sink is reached by its
/// demanded source (bounded; the last candidate is used otherwise).
BenchReport bench(std::uint64_t seed, int n_nodes, int n_edges, int n_sources, int n_sinks);
nlohmann::ordered_json bench_report_to_json(const BenchReport& report);

}  // namespace pathgain
