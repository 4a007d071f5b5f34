#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathgain/galois.hpp"
#include "pathgain/network.hpp"
#include "pathgain/poly.hpp"
#include "pathgain/simplify.hpp"

namespace pathgain {

inline constexpr std::uint64_t kDefaultBudget = 1ull << 24;

/// Values for every variable of a system, in variable order.
struct Solution {
  FieldSpec field = FieldSpec::make(2, 1);
  std::vector<std::string> names;
  std::vector<FieldElem> values;

  std::optional<FieldElem> value_of(const std::string& name) const;
  std::vector<std::uint32_t> raw() const;
  static Solution from_raw(const FieldSpec& field, std::vector<std::string> names,
                           const std::vector<std::uint32_t>& raw);

  friend bool operator==(const Solution& a, const Solution& b) {
    return a.field == b.field && a.names == b.names && a.values == b.values;
  }
};

enum class SolveMode { First, All, Count };

struct BruteForceResult {
  std::uint64_t count = 0;
  /// Packed field indices per variable; variables in no equation are 0.
  std::vector<std::vector<std::uint32_t>> solutions;
  std::uint64_t evaluations = 0;
};

/// Depth-first search over the variables that occur in some equation, first
/// variable most significant, each equation checked as soon as all of its
/// variables are set. Solutions therefore come out in lexicographic order.
/// Raises BudgetExceeded when q^(active variables) or the number of equation
/// evaluations exceeds `budget`.
BruteForceResult brute_force(const PolySystem& system, const FieldSpec& field, SolveMode mode,
                             std::uint64_t budget = kDefaultBudget);

struct SystemOutcome {
  bool solvable = false;
  SimplifyResult simplified;
  std::optional<Solution> witness;  // over the input system's variables
  std::string reason;
};

/// simplify, characteristic check, brute force on the reduced system, lift.
SystemOutcome solve_system(const PolySystem& system, const FieldSpec& field,
                           std::uint64_t budget = kDefaultBudget, const BranchOptions& options = {});

struct ProblemOutcome {
  bool solvable = false;
  PolySystem system;                // empty when a demand is unreachable
  std::optional<Solution> witness;  // full path-gain assignment
  std::string reason;
};

/// Path-gain pipeline: build_path_system, then solve_system.
ProblemOutcome solvable_over(const Problem& problem, const FieldSpec& field,
                             std::uint64_t budget = kDefaultBudget, const BranchOptions& options = {});

nlohmann::ordered_json solution_to_json(const Solution& solution);
Solution solution_from_json(const nlohmann::ordered_json& doc);
Solution solution_load(const std::filesystem::path& path);
void solution_save(const Solution& solution, const std::filesystem::path& path);

}  // namespace pathgain
