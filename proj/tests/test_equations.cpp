#include <doctest.h>

#include <map>
#include <random>

#include "pathgain/equations.hpp"
#include "pathgain/error.hpp"
#include "pathgain/harness.hpp"
#include "support.hpp"

using namespace pathgain;
using namespace pathgain::testing;

namespace {

// The same equations over the textbook a/b names.
PolySystem textbook_names(const PathSystem& ps) {
  PolySystem out;
  for (int id = 0; id < static_cast<int>(ps.forest.leaf_vars().size()); ++id) {
    out.add_variable(Variable::named(textbook_alias(ps.forest.alias(id))));
  }
  for (const auto& e : ps.system.equations()) out.add_equation(e.poly, e.tag);
  return out;
}

std::set<Poly> parse_all(const std::vector<std::string>& texts, const PolySystem& s) {
  std::set<Poly> out;
  for (const auto& t : texts) out.insert(parse_poly(t, s).canonical());
  return out;
}

std::set<Poly> of_degree(const PolySystem& s, int degree) {
  std::set<Poly> out;
  for (const auto& e : s.equations()) {
    if (e.poly.degree() == degree) out.insert(e.poly.canonical());
  }
  return out;
}

std::vector<Problem> corpus(int n) {
  std::vector<Problem> out;
  for (std::uint64_t seed = 1; out.size() < static_cast<std::size_t>(n); ++seed) {
    out.push_back(random_problem(seed * 7, 5 + static_cast<int>(seed % 4), 7 + static_cast<int>(seed % 6), 2,
                                 2 + static_cast<int>(seed % 2)));
  }
  return out;
}

bool demands_reachable(const Problem& p) {
  const Forest f = transform(p, topo_sort(p));
  for (int j = 1; j <= f.num_trees(); ++j) {
    if (f.path_count(p.sinks()[static_cast<std::size_t>(j - 1)].demand, j) == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("butterfly path-gain system matches the textbook equations") {
  const Problem p = problem_load(fixture("butterfly.json"));
  const PathSystem ps = build_path_formulation(p);
  CHECK(ps.system.num_variables() == 12);
  CHECK(ps.system.count_degree(1) == 8);
  CHECK(ps.system.count_degree(2) == 6);
  CHECK(ps.system.size() == 14);
  const PolySystem pub = textbook_names(ps);
  CHECK(of_degree(pub, 1) == parse_all({"a1 + a2 = 1", "b1 = 0", "a3 + a4 = 0", "b2 = 1", "a5 = 1", "b3 + b4 = 0",
                                        "a6 = 0", "b5 + b6 = 1"},
                                       pub));
  CHECK(of_degree(pub, 2) == parse_all({"a2*b2 = a4*b1", "a2*b3 = a5*b1", "a2*b5 = a6*b1", "a4*b3 = a5*b2",
                                        "a4*b5 = a6*b2", "a5*b5 = a6*b3"},
                                       pub));
}

TEST_CASE("aliases rename path-gain variables") {
  const PathSystem ps = build_path_formulation(problem_load(fixture("butterfly.json")));
  const PolySystem aliased = with_aliases(ps.system, ps.forest);
  CHECK(aliased.names() ==
        std::vector<std::string>{"a1", "a2", "a3", "a4", "a5", "a6", "b1", "b2", "b3", "b4", "b5", "b6"});
  CHECK(aliased.size() == ps.system.size());
}

TEST_CASE("butterfly edge-gain system matches the textbook equations") {
  const Problem p = problem_load(fixture("butterfly.json"));
  const PolySystem km = build_km_system(p);
  CHECK(km.size() == 8);
  CHECK(km.num_variables() == 10);
  // alpha_1 .. alpha_10 in the usual numbering.
  const std::vector<std::string> alpha{"",           "al(e1,e3)", "al(e2,e3)", "al(e4,e8)",  "al(e6,e8)", "al(e4,e9)",
                                       "al(e6,e9)", "al(e7,e10)", "al(e5,e10)", "al(e7,e11)", "al(e5,e11)"};
  auto a = [&alpha](int i) { return alpha[static_cast<std::size_t>(i)]; };
  CHECK(equation_set(km) == parse_all({a(3) + " + " + a(4) + "*" + a(1) + " = 1", a(4) + "*" + a(2) + " = 0",
                                       a(5) + " + " + a(6) + "*" + a(1) + " = 0", a(6) + "*" + a(2) + " = 1",
                                       a(7) + "*" + a(2) + " + " + a(8) + " = 0", a(7) + "*" + a(1) + " = 1",
                                       a(9) + "*" + a(2) + " + " + a(10) + " = 1", a(9) + "*" + a(1) + " = 0"},
                                      km));
}

TEST_CASE("butterfly path gains in edge gains") {
  const Problem p = problem_load(fixture("butterfly.json"));
  const PathSystem ps = build_path_formulation(p);
  using Pairs = std::vector<std::pair<std::string, std::string>>;
  // a2 and b1 (leaves 1 and 6).
  CHECK(expand_path_in_gains(ps.forest, p, 1) == Pairs{{"e1", "e3"}, {"e6", "e8"}});
  CHECK(expand_path_in_gains(ps.forest, p, 6) == Pairs{{"e2", "e3"}, {"e6", "e8"}});
  CHECK(expand_path_in_gains(ps.forest, p, 0) == Pairs{{"e4", "e8"}});
  CHECK(expand_path_in_gains(ps.forest, p, 1, GainConvention::Full) ==
        Pairs{{"v_src_1", "e1"}, {"e1", "e3"}, {"e3", "e6"}, {"e6", "e8"}, {"e8", "v_snk_1"}});
}

TEST_CASE("path graph systems") {
  const Problem p = path_graph();
  const PolySystem s = build_path_system(p);
  CHECK(s.num_variables() == 1);
  REQUIRE(s.size() == 1);
  CHECK(s.to_text() == "g1_1_1 - 1 = 0\n");
  const PolySystem full = build_km_system(p, GainConvention::Full);
  REQUIRE(full.size() == 1);
  CHECK(full.num_variables() == 3);
  CHECK(full.max_degree() == 3);
  CHECK(build_km_system(p).size() == 0);
}

TEST_CASE("unreachable demand is reported") {
  const Problem p = make_problem({1, 2}, {}, {1}, {{2, 1}});
  require_error(ErrorKind::UnsatisfiableDemand, [&] { build_path_system(p); });
}

TEST_CASE("no edge compatibility without shared sources") {
  // One source fanning out to two sinks over a diamond.
  const Problem single = make_problem({1, 2, 3, 4, 5},
                                      {{"e1", 1, 2}, {"e2", 1, 3}, {"e3", 2, 4}, {"e4", 3, 4}, {"e5", 4, 5},
                                       {"e6", 2, 5}},
                                      {1}, {{5, 1}});
  const Forest f1 = transform(single, topo_sort(single));
  CHECK(build_edge_compat(f1, single).empty());
  // Two sources on disjoint paths.
  const Problem disjoint = make_problem({1, 2, 3, 4}, {{"e1", 1, 3}, {"e2", 2, 4}}, {1, 2}, {{3, 1}, {4, 2}});
  const Forest f2 = transform(disjoint, topo_sort(disjoint));
  CHECK(build_edge_compat(f2, disjoint).empty());
}

TEST_CASE("screening does not change the edge-compatibility equations") {
  for (const Problem& p : corpus(200)) {
    const Forest f = transform(p, topo_sort(p));
    std::set<Poly> screened, full;
    for (const auto& t : build_edge_compat(f, p, true)) screened.insert(t.poly.canonical());
    for (const auto& t : build_edge_compat(f, p, false)) full.insert(t.poly.canonical());
    CHECK(screened == full);
  }
}

TEST_CASE("path-gain equations have degree at most two") {
  for (const Problem& p : corpus(300)) {
    if (!demands_reachable(p)) continue;
    const PolySystem s = build_path_system(p);
    CHECK(s.max_degree() <= 2);
    CHECK(s.count_degree(1) + s.count_degree(2) == s.size());
  }
}

TEST_CASE("no-interference in edge gains is the edge-gain system") {
  for (const Problem& p : corpus(200)) {
    if (!demands_reachable(p)) continue;
    const Forest f = transform(p, topo_sort(p));
    for (const auto convention : {GainConvention::Reduced, GainConvention::Full}) {
      const PolySystem km = build_km_system(p, convention);
      std::set<Poly> substituted;
      for (int j = 1; j <= f.num_trees(); ++j) {
        for (int i = 1; i <= f.num_sources(); ++i) {
          Poly sum;
          for (int k = 1; k <= f.path_count(i, j); ++k) {
            sum = sum + path_gain_poly(f, p, f.leaf_var_id(i, j, k), km, convention);
          }
          if (p.sinks()[static_cast<std::size_t>(j - 1)].demand == i) sum = sum - Poly::constant(1);
          if (!sum.is_zero()) substituted.insert(sum.canonical());
        }
      }
      CHECK(substituted == equation_set(km));
    }
  }
}

TEST_CASE("edge compatibility holds for path gains of any edge gains") {
  std::mt19937_64 rng(3);
  for (const auto& field : {FieldSpec::make(5, 1), FieldSpec::make(2, 2), FieldSpec::make(7, 1)}) {
    for (const Problem& p : corpus(100)) {
      const Forest f = transform(p, topo_sort(p));
      const auto ec = build_edge_compat(f, p);
      for (int trial = 0; trial < 5; ++trial) {
        std::map<std::pair<std::string, std::string>, std::uint32_t> gain;
        auto g = [&](const std::string& from, const std::string& to) {
          auto [it, fresh] = gain.try_emplace({from, to}, 0);
          if (fresh) it->second = static_cast<std::uint32_t>(rng() % field.q());
          return it->second;
        };
        std::vector<std::uint32_t> values;
        for (int leaf = 0; leaf < static_cast<int>(f.leaf_vars().size()); ++leaf) {
          const auto& lv = f.leaf_vars()[static_cast<std::size_t>(leaf)];
          const auto path = f.leaf_path(leaf);
          std::uint32_t v = g(p.virtual_source_edge(lv.source).id, p.edge(path.front()).id);
          for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            v = field.mul_raw(v, g(p.edge(path[k]).id, p.edge(path[k + 1]).id));
          }
          v = field.mul_raw(v, g(p.edge(path.back()).id, p.virtual_sink_edge(lv.tree).id));
          values.push_back(v);
        }
        for (const auto& t : ec) CHECK(t.poly.evaluate(field, values) == 0);
      }
    }
  }
}

TEST_CASE("equation building is deterministic") {
  const Problem p = random_problem(1234, 8, 12, 2, 3);
  CHECK(system_to_json(build_km_system(p)).dump() == system_to_json(build_km_system(p)).dump());
  if (demands_reachable(p)) CHECK(build_path_system(p) == build_path_system(p));
}
