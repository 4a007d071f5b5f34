#include "pathgain/solve.hpp"

#include <algorithm>

#include "pathgain/equations.hpp"
#include "pathgain/error.hpp"
#include "pathgain/io.hpp"

namespace pathgain {

namespace {

struct CompiledTerm {
  std::uint32_t coeff;
  std::vector<int> vars;
};

struct CompiledEquation {
  std::vector<CompiledTerm> terms;
};

class Search {
 public:
  Search(const PolySystem& system, const FieldSpec& field, SolveMode mode, std::uint64_t budget)
      : field_(field), mode_(mode), budget_(budget), values_(system.num_variables(), 0) {
    const auto active = system.active_variables();
    order_.assign(active.begin(), active.end());
    std::vector<int> position(system.num_variables(), -1);
    for (std::size_t k = 0; k < order_.size(); ++k) position[static_cast<std::size_t>(order_[k])] = static_cast<int>(k);

    std::uint64_t space = 1;
    for (std::size_t k = 0; k < order_.size(); ++k) {
      if (space > budget_ / field.q()) {
        raise(ErrorKind::BudgetExceeded, std::to_string(field.q()) + "^" + std::to_string(order_.size()) +
                                             " assignments exceed the budget of " + std::to_string(budget_));
      }
      space *= field.q();
    }

    by_level_.resize(order_.size());
    for (const auto& e : system.equations()) {
      CompiledEquation ce;
      int level = -1;
      for (const auto& t : e.poly.terms()) {
        const std::uint32_t c = field.from_int_raw(t.coeff);
        if (c == 0) continue;
        ce.terms.push_back(CompiledTerm{c, t.mono});
        for (int v : t.mono) level = std::max(level, position[static_cast<std::size_t>(v)]);
      }
      if (ce.terms.empty()) continue;
      if (level < 0) {
        contradiction_ = true;
      } else {
        by_level_[static_cast<std::size_t>(level)].push_back(std::move(ce));
      }
    }
  }

  BruteForceResult run() {
    if (!contradiction_) descend(0);
    result_.evaluations = evaluations_;
    return std::move(result_);
  }

 private:
  bool holds(const CompiledEquation& e) {
    if (++evaluations_ > budget_) {
      raise(ErrorKind::BudgetExceeded, "more than " + std::to_string(budget_) + " equation evaluations");
    }
    std::uint32_t sum = 0;
    for (const auto& t : e.terms) {
      std::uint32_t x = t.coeff;
      for (int v : t.vars) x = field_.mul_raw(x, values_[static_cast<std::size_t>(v)]);
      sum = field_.add_raw(sum, x);
    }
    return sum == 0;
  }

  /// Returns true when the search should stop.
  bool descend(std::size_t level) {
    if (level == order_.size()) {
      ++result_.count;
      if (mode_ != SolveMode::Count) result_.solutions.push_back(values_);
      return mode_ == SolveMode::First;
    }
    const auto var = static_cast<std::size_t>(order_[level]);
    for (std::uint32_t x = 0; x < field_.q(); ++x) {
      values_[var] = x;
      bool ok = true;
      for (const auto& e : by_level_[level]) {
        if (!holds(e)) {
          ok = false;
          break;
        }
      }
      if (ok && descend(level + 1)) return true;
    }
    values_[var] = 0;
    return false;
  }

  FieldSpec field_;
  SolveMode mode_;
  std::uint64_t budget_;
  std::vector<std::uint32_t> values_;
  std::vector<int> order_;
  std::vector<std::vector<CompiledEquation>> by_level_;
  bool contradiction_ = false;
  std::uint64_t evaluations_ = 0;
  BruteForceResult result_;
};

}  // namespace

std::optional<FieldElem> Solution::value_of(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return values[k];
  }
  return std::nullopt;
}

std::vector<std::uint32_t> Solution::raw() const {
  std::vector<std::uint32_t> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.index());
  return out;
}

Solution Solution::from_raw(const FieldSpec& field, std::vector<std::string> names,
                            const std::vector<std::uint32_t>& raw) {
  Solution s{field, std::move(names), {}};
  for (auto x : raw) s.values.push_back(field.element(x));
  return s;
}

BruteForceResult brute_force(const PolySystem& system, const FieldSpec& field, SolveMode mode,
                             std::uint64_t budget) {
  return Search(system, field, mode, budget).run();
}

SystemOutcome solve_system(const PolySystem& system, const FieldSpec& field, std::uint64_t budget,
                           const BranchOptions& options) {
  SystemOutcome out;
  out.simplified = simplify(system, options);
  if (!out.simplified.verdict.admits(field.characteristic())) {
    out.reason = out.simplified.verdict.to_string();
    return out;
  }
  const auto found = brute_force(out.simplified.reduced, field, SolveMode::First, budget);
  if (found.solutions.empty()) {
    out.reason = "no solution of the reduced system";
    return out;
  }
  const auto full = lift_solution(out.simplified, field, found.solutions.front());
  out.solvable = true;
  out.witness = Solution::from_raw(field, system.names(), full);
  return out;
}

ProblemOutcome solvable_over(const Problem& problem, const FieldSpec& field, std::uint64_t budget,
                             const BranchOptions& options) {
  ProblemOutcome out;
  try {
    out.system = build_path_system(problem);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsatisfiableDemand) throw;
    out.reason = e.what();
    return out;
  }
  auto r = solve_system(out.system, field, budget, options);
  out.solvable = r.solvable;
  out.witness = std::move(r.witness);
  out.reason = std::move(r.reason);
  return out;
}

nlohmann::ordered_json solution_to_json(const Solution& solution) {
  nlohmann::ordered_json doc;
  doc["field"] = solution.field.name();
  nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < solution.names.size(); ++k) {
    assignment[solution.names[k]] = solution.field.format(solution.values[k]);
  }
  doc["assignment"] = std::move(assignment);
  return doc;
}

Solution solution_from_json(const nlohmann::ordered_json& doc) {
  try {
    const FieldSpec field = FieldSpec::parse(doc.at("field").get<std::string>());
    Solution s{field, {}, {}};
    for (const auto& [name, value] : doc.at("assignment").items()) {
      s.names.push_back(name);
      s.values.push_back(field.parse_element(value.get<std::string>()));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ParseError, std::string("solution: ") + e.what());
  }
}

Solution solution_load(const std::filesystem::path& path) { return solution_from_json(read_ordered_json(path)); }

void solution_save(const Solution& solution, const std::filesystem::path& path) {
  write_json_atomic(path, solution_to_json(solution));
}

}  // namespace pathgain
