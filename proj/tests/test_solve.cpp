#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "pathgain/equations.hpp"
#include "pathgain/error.hpp"
#include "pathgain/solve.hpp"
#include "support.hpp"

using namespace pathgain;
using namespace pathgain::testing;

namespace {

// Plain enumeration of every assignment, for comparison.
std::uint64_t count_by_enumeration(const PolySystem& s, const FieldSpec& f) {
  const std::size_t n = s.num_variables();
  std::vector<std::uint32_t> values(n, 0);
  std::uint64_t count = 0;
  while (true) {
    count += s.satisfied_by(f, values);
    std::size_t k = 0;
    while (k < n && ++values[k] == f.q()) values[k++] = 0;
    if (k == n) break;
  }
  return count;
}


std::uint64_t full_space(const FieldSpec& f, std::size_t n) {
  std::uint64_t b = 1;
  for (std::size_t k = 0; k < n; ++k) b *= f.q();
  return b;
}

}  // namespace

TEST_CASE("brute force counts match plain enumeration") {
  for (const auto& field : {FieldSpec::make(2, 1), FieldSpec::make(3, 1), FieldSpec::make(2, 2)}) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const PolySystem s = random_system(seed, 2 + static_cast<int>(seed % 4), 1 + static_cast<int>(seed % 4));
      const PolySystem active = s.pruned();
      CHECK(brute_force(s, field, SolveMode::Count).count == count_by_enumeration(active, field));
    }
  }
}

TEST_CASE("brute force modes") {
  const PolySystem s = build_path_system(problem_load(fixture("butterfly.json")));
  const FieldSpec f4 = FieldSpec::make(2, 2);
  const auto first = brute_force(s, f4, SolveMode::First);
  REQUIRE(first.solutions.size() == 1);
  CHECK(s.satisfied_by(f4, first.solutions[0]));
  const auto all = brute_force(s, f4, SolveMode::All);
  CHECK(all.solutions.size() == all.count);
  CHECK(all.solutions.front() == first.solutions.front());
  CHECK(std::is_sorted(all.solutions.begin(), all.solutions.end()));
  CHECK(brute_force(s, f4, SolveMode::Count).count == all.count);
  CHECK(brute_force(s, FieldSpec::make(2, 1), SolveMode::Count).count > 0);
}

TEST_CASE("characteristic-2 system over small fields") {
  const PolySystem s = system_load(fixture("char2_system.json"));
  const FieldSpec f3 = FieldSpec::make(3, 1), f5 = FieldSpec::make(5, 1), f2 = FieldSpec::make(2, 1);
  CHECK(brute_force(s, f3, SolveMode::Count, full_space(f3, 17)).count == 0);
  CHECK(brute_force(s, f5, SolveMode::Count, full_space(f5, 17)).count == 0);
  const auto over2 = brute_force(s, f2, SolveMode::All, full_space(f2, 17));
  CHECK(over2.count >= 1);
  CHECK(std::find(over2.solutions.begin(), over2.solutions.end(), std::vector<std::uint32_t>(17, 1)) !=
        over2.solutions.end());
  const SimplifyResult r = simplify(s);
  CHECK(r.reduced.satisfied_by(f2, std::vector<std::uint32_t>(r.reduced.num_variables(), 1)));
}

TEST_CASE("budget is enforced") {
  const PolySystem s = system_load(fixture("char2_system.json"));
  require_error(ErrorKind::BudgetExceeded, [&] { brute_force(s, FieldSpec::make(2, 1), SolveMode::Count, 1000); });
  const SimplifyResult r = simplify(s);
  require_error(ErrorKind::BudgetExceeded,
                [&] { brute_force(r.reduced, FieldSpec::make(2, 1), SolveMode::Count, 10); });
}

TEST_CASE("solve_system uses the characteristic verdict") {
  const PolySystem s = system_load(fixture("char2_system.json"));
  const SystemOutcome odd = solve_system(s, FieldSpec::make(3, 1));
  CHECK_FALSE(odd.solvable);
  CHECK(odd.simplified.verdict == CharVerdict::dividing(2));
  const SystemOutcome even = solve_system(s, FieldSpec::make(2, 2));
  REQUIRE(even.solvable);
  REQUIRE(even.witness);
  CHECK(s.satisfied_by(even.witness->field, even.witness->raw()));
}

TEST_CASE("butterfly is solvable over every small field") {
  const Problem p = problem_load(fixture("butterfly.json"));
  for (const auto& field : {FieldSpec::make(2, 1), FieldSpec::make(3, 1), FieldSpec::make(2, 2)}) {
    const ProblemOutcome o = solvable_over(p, field);
    REQUIRE(o.solvable);
    REQUIRE(o.witness);
    CHECK(o.system.satisfied_by(field, o.witness->raw()));
    CHECK(o.witness->names == o.system.names());
  }
}

TEST_CASE("unreachable demand is unsolvable") {
  const ProblemOutcome o = solvable_over(make_problem({1, 2}, {}, {1}, {{2, 1}}), FieldSpec::make(2, 1));
  CHECK_FALSE(o.solvable);
  CHECK(o.system.size() == 0);
}

TEST_CASE("solution files round-trip and keep variable order") {
  const Problem p = problem_load(fixture("butterfly.json"));
  const auto o = solvable_over(p, FieldSpec::make(2, 2));
  REQUIRE(o.witness);
  const auto path = std::filesystem::temp_directory_path() / "pathgain_roundtrip_solution.json";
  solution_save(*o.witness, path);
  CHECK(solution_load(path) == *o.witness);
  std::filesystem::remove(path);
  const auto doc = solution_to_json(*o.witness);
  CHECK(doc["field"] == "2^2");
  CHECK(doc["assignment"].begin().key() == "g1_1_1");
  require_error(ErrorKind::ParseError, [] {
    solution_from_json(nlohmann::ordered_json::parse(R"({"field":"2^2","assignment":{"x":"2"}})"));
  });
}
