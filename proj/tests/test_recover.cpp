#include <doctest.h>

#include <filesystem>

#include "pathgain/equations.hpp"
#include "pathgain/error.hpp"
#include "pathgain/recover.hpp"
#include "support.hpp"

using namespace pathgain;
using namespace pathgain::testing;

namespace {

struct Butterfly {
  Problem problem = problem_load(fixture("butterfly.json"));
  Forest forest = transform(problem, topo_sort(problem));
  FieldSpec f = FieldSpec::make(2, 2);
  FieldElem zero = f.zero(), one = f.one(), alpha = f.element(2), alpha2 = f.mul(alpha, alpha);
};

// Coding vectors by forward evaluation over the original graph, from the
// coefficients alone.
std::map<std::string, std::vector<FieldElem>> propagate(const Problem& p, const NetworkCode& code) {
  const FieldSpec& f = code.field;
  const std::size_t n = p.num_sources();
  std::map<std::string, std::vector<FieldElem>> fe;
  auto coeff = [&code, &f](const std::string& a, const std::string& b) {
    const auto c = code.coeff(a, b);
    return c ? *c : f.zero();
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<FieldElem> unit(n, f.zero());
    unit[i] = f.one();
    fe[p.virtual_source_edge(static_cast<int>(i + 1)).id] = unit;
  }
  const TopoOrder order = topo_sort(p);
  for (auto it = order.order.rbegin(); it != order.order.rend(); ++it) {
    const NodeId v = *it;
    std::vector<std::string> inputs;
    for (std::size_t k : p.in_edges(v)) inputs.push_back(p.edge(k).id);
    if (const auto i = p.source_index_of(v)) inputs.push_back(p.virtual_source_edge(*i).id);
    for (std::size_t k : p.out_edges(v)) {
      std::vector<FieldElem> out(n, f.zero());
      for (const auto& in : inputs) {
        for (std::size_t c = 0; c < n; ++c) out[c] = f.add(out[c], f.mul(coeff(in, p.edge(k).id), fe[in][c]));
      }
      fe[p.edge(k).id] = out;
    }
  }
  return fe;
}

std::vector<FieldElem> received(const Problem& p, const NetworkCode& code, int sink) {
  const auto fe = propagate(p, code);
  const FieldSpec& f = code.field;
  std::vector<FieldElem> out(p.num_sources(), f.zero());
  const NodeId t = p.sinks()[static_cast<std::size_t>(sink - 1)].node;
  for (const auto& d : code.decode) {
    if (d.sink != t) continue;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = f.add(out[c], f.mul(d.value, fe.at(d.edge)[c]));
  }
  return out;
}

// Flow on each copy of each edge, from the leaf values below it, must be the
// scaled edge function.
void check_scaling_rows(const Problem& p, const Forest& forest, const Solution& s, const NetworkCode& code) {
  const FieldSpec& f = code.field;
  for (std::size_t k = 0; k < p.edges().size(); ++k) {
    const auto& copies = forest.edge_replicas(k);
    if (copies.empty()) continue;
    const auto& fe = code.edge_functions.at(p.edge(k).id);
    const auto& ce = code.scaling.at(p.edge(k).id);
    REQUIRE(ce.size() == copies.size());
    for (std::size_t j = 0; j < copies.size(); ++j) {
      const int tail = forest.edges()[static_cast<std::size_t>(copies[j])].tail;
      for (int i = 1; i <= forest.num_sources(); ++i) {
        FieldElem flow = f.zero();
        const LeafRange r = forest.h(i, tail);
        for (int leaf = r.begin; leaf < r.end; ++leaf) flow = f.add(flow, s.values[static_cast<std::size_t>(leaf)]);
        CHECK(flow == f.mul(ce[j], fe[static_cast<std::size_t>(i - 1)]));
      }
    }
  }
}

}  // namespace

TEST_CASE("GF(4) butterfly code matches the worked example") {
  Butterfly b;
  const NetworkCode code = derive_code(b.problem, b.forest, butterfly_gf4_solution(b.forest));
  CHECK(code.edge_functions.at("e3") == std::vector<FieldElem>{b.alpha, b.one});
  CHECK(code.scaling.at("e3") == std::vector<FieldElem>{b.zero, b.one, b.alpha2, b.zero});
  CHECK(code.edge_functions.at("e6") == std::vector<FieldElem>{b.alpha, b.one});
  CHECK(code.edge_functions.at("e7") == std::vector<FieldElem>{b.one, b.alpha2});
  CHECK(code.coeff("e1", "e3") == b.alpha);
  CHECK(code.coeff("e2", "e3") == b.one);
  CHECK(code.coeff("e3", "e6") == b.one);
  CHECK(code.coeff("e3", "e7") == b.alpha2);
  CHECK(code.coeff("e4", "e8") == b.one);
  CHECK(code.coeff("e6", "e8") == b.zero);
  CHECK(code.coeff("e4", "e9") == b.alpha);
  CHECK(code.coeff("e6", "e9") == b.one);
  CHECK(code.edge_functions.at("e8") == std::vector<FieldElem>{b.one, b.zero});
  CHECK(code.edge_functions.at("e9") == std::vector<FieldElem>{b.zero, b.one});
  CHECK_FALSE(code.coeff("e1", "e8"));
}

TEST_CASE("GF(4) butterfly code passes verification") {
  Butterfly b;
  const Solution s = butterfly_gf4_solution(b.forest);
  const NetworkCode code = derive_code(b.problem, b.forest, s);
  const VerifyReport report = verify_code(b.problem, code);
  CHECK(report.pass);
  REQUIRE(report.sinks.size() == 4);
  for (int j = 1; j <= 4; ++j) {
    std::vector<FieldElem> unit(2, b.zero);
    unit[static_cast<std::size_t>(b.problem.sinks()[static_cast<std::size_t>(j - 1)].demand - 1)] = b.one;
    CHECK(received(b.problem, code, j) == unit);
    CHECK(report.sinks[static_cast<std::size_t>(j - 1)].received == unit);
  }
  check_scaling_rows(b.problem, b.forest, s, code);
}

TEST_CASE("a perturbed coefficient breaks the affected sinks") {
  Butterfly b;
  NetworkCode code = derive_code(b.problem, b.forest, butterfly_gf4_solution(b.forest));
  for (auto& c : code.coeffs) {
    if (c.from == "e2" && c.to == "e3") c.value = b.zero;
  }
  const VerifyReport report = verify_code(b.problem, code);
  CHECK_FALSE(report.pass);
  bool seven_or_eight = false;
  for (int j = 1; j <= 4; ++j) {
    const auto& sr = report.sinks[static_cast<std::size_t>(j - 1)];
    CHECK(sr.received == received(b.problem, code, j));
    std::vector<FieldElem> unit(2, b.zero);
    unit[static_cast<std::size_t>(sr.demand - 1)] = b.one;
    CHECK(sr.pass == (sr.received == unit));
    if (!sr.pass && (sr.sink == 7 || sr.sink == 8)) seven_or_eight = true;
  }
  CHECK(seven_or_eight);
}

TEST_CASE("identity relay") {
  const Problem p = path_graph();
  const Forest forest = transform(p, topo_sort(p));
  const FieldSpec f = FieldSpec::make(3, 1);
  const NetworkCode code = derive_code(p, forest, Solution{f, {"g1_1_1"}, {f.one()}});
  for (const auto& c : code.coeffs) CHECK(c.value == f.one());
  CHECK(verify_code(p, code).pass);
}

TEST_CASE("non-solutions are rejected") {
  Butterfly b;
  Solution s = butterfly_gf4_solution(b.forest);
  s.values[0] = b.alpha;
  require_error(ErrorKind::NotASolution, [&] { derive_code(b.problem, b.forest, s); });
  Solution missing = butterfly_gf4_solution(b.forest);
  missing.names.pop_back();
  missing.values.pop_back();
  require_error(ErrorKind::NotASolution, [&] { derive_code(b.problem, b.forest, missing); });
}

TEST_CASE("every witness yields a verified code") {
  int witnesses = 0;
  for (const auto& field : {FieldSpec::make(2, 1), FieldSpec::make(3, 1), FieldSpec::make(2, 2)}) {
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
      const Problem p = random_problem(seed, 5 + static_cast<int>(seed % 4), 11, 2, 2 + static_cast<int>(seed % 2));
      ProblemOutcome o;
      try {
        o = solvable_over(p, field);
      } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::BudgetExceeded);
        continue;
      }
      if (!o.witness) continue;
      ++witnesses;
      const Forest forest = transform(p, topo_sort(p));
      const NetworkCode code = derive_code(p, forest, *o.witness);
      CHECK(verify_code(p, code).pass);
      check_scaling_rows(p, forest, *o.witness, code);
    }
  }
  CHECK(witnesses > 100);
}

TEST_CASE("network code files round-trip") {
  Butterfly b;
  const NetworkCode code = derive_code(b.problem, b.forest, butterfly_gf4_solution(b.forest));
  const auto path = std::filesystem::temp_directory_path() / "pathgain_roundtrip_code.json";
  code_save(code, path);
  CHECK(code_load(path) == code);
  std::filesystem::remove(path);
  const auto doc = code_to_json(code);
  CHECK(doc["field"] == "2^2");
  CHECK(doc["coeffs"].size() == code.coeffs.size());
  CHECK(doc["decode"].size() == code.decode.size());
}
