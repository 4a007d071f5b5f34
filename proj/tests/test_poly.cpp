#include <doctest.h>

#include <filesystem>
#include <limits>
#include <random>

#include "pathgain/error.hpp"
#include "pathgain/poly.hpp"
#include "support.hpp"

using namespace pathgain;
using namespace pathgain::testing;

namespace {

PolySystem named_system(const std::vector<std::string>& names) {
  PolySystem s;
  for (const auto& n : names) s.add_variable(Variable::named(n));
  return s;
}

Poly random_poly(std::mt19937_64& rng, int n_vars) {
  std::vector<Term> terms;
  const int n = static_cast<int>(rng() % 4);
  for (int t = 0; t < n; ++t) {
    Monomial m;
    const int deg = static_cast<int>(rng() % 3);
    for (int d = 0; d < deg; ++d) m.push_back(static_cast<int>(rng() % static_cast<unsigned>(n_vars)));
    std::sort(m.begin(), m.end());
    terms.push_back(Term{static_cast<std::int64_t>(rng() % 7) - 3, m});
  }
  return Poly::from_terms(terms);
}

}  // namespace

TEST_CASE("rendering follows the graded order") {
  const PolySystem s = named_system({"a2", "a4", "b1", "b2"});
  const Poly p = parse_poly("a2*b2 - a4*b1", s);
  CHECK(p.to_string(s.names()) == "a2*b2 - a4*b1 = 0");
  CHECK(parse_poly("a2 + a2*a2 - 1", s).to_string(s.names()) == "a2^2 + a2 - 1 = 0");
  CHECK(parse_poly("0", s).to_string(s.names()) == "0 = 0");
  CHECK(parse_poly("2*b1 = 3", s).to_string(s.names()) == "2*b1 - 3 = 0");
}

TEST_CASE("terms merge and cancel") {
  const PolySystem s = named_system({"x", "y"});
  CHECK(parse_poly("x*y - y*x", s).is_zero());
  CHECK(parse_poly("x + x", s) == parse_poly("2*x", s));
  CHECK(parse_poly("x*y + 1", s).degree() == 2);
  CHECK(parse_poly("x + 1", s).is_linear());
  CHECK(parse_poly("-5", s).constant_value() == -5);
  CHECK(parse_poly("3*x - y", s).linear_coeff(0) == 3);
  CHECK(parse_poly("-x*y + 2", s).canonical() == parse_poly("x*y - 2", s));
}

TEST_CASE("ring identities on random polynomials") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const Poly a = random_poly(rng, 4), b = random_poly(rng, 4), c = random_poly(rng, 4);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
    CHECK(a.scaled(-1) == -a);
  }
}

TEST_CASE("substitution agrees with evaluation") {
  std::mt19937_64 rng(11);
  const FieldSpec f = FieldSpec::make(5, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const Poly p = random_poly(rng, 4);
    const Poly expr = random_poly(rng, 4);
    if (expr.contains(0)) continue;
    std::vector<std::uint32_t> values(4);
    for (auto& v : values) v = static_cast<std::uint32_t>(rng() % 5);
    std::vector<std::uint32_t> with_expr = values;
    with_expr[0] = expr.evaluate(f, values);
    CHECK(p.substitute(0, expr).evaluate(f, values) == p.evaluate(f, with_expr));
  }
}

TEST_CASE("reduction modulo a prime uses symmetric residues") {
  const PolySystem s = named_system({"x"});
  CHECK(parse_poly("4*x + 5", s).reduced_mod(3) == parse_poly("x - 1", s));
  CHECK(parse_poly("2*x", s).reduced_mod(2).is_zero());
}

TEST_CASE("coefficient overflow is reported") {
  const Poly big = Poly::constant(std::numeric_limits<std::int64_t>::max());
  require_error(ErrorKind::InvalidArgument, [&] { (void)(big + Poly::constant(1)); });
  require_error(ErrorKind::InvalidArgument, [&] { (void)(big * Poly::constant(2)); });
}

TEST_CASE("systems deduplicate up to sign") {
  PolySystem s = named_system({"x", "y"});
  CHECK(s.add_equation(parse_poly("x*y - 1", s), "first"));
  CHECK_FALSE(s.add_equation(parse_poly("1 - x*y", s), "again"));
  CHECK_FALSE(s.add_equation(Poly(), "zero"));
  CHECK(s.size() == 1);
  CHECK(s.equations()[0].tag == "first");
  CHECK(s.max_degree() == 2);
  CHECK(s.count_degree(2) == 1);
  CHECK(s.active_variables() == std::set<int>{0, 1});
}

TEST_CASE("pruning drops unused variables") {
  PolySystem s = named_system({"x", "y", "z"});
  s.add_equation(parse_poly("x*z - 1", s), "t");
  const PolySystem p = s.pruned();
  CHECK(p.names() == std::vector<std::string>{"x", "z"});
  CHECK(p.to_text() == "x*z - 1 = 0\n");
}

TEST_CASE("variable names and kinds") {
  CHECK(variable_from_name("g1_2_3").kind == VarKind::PathGain);
  CHECK(variable_from_name("g1_2_3").tree == 2);
  CHECK(variable_from_name("al(e1,e3)").kind == VarKind::EdgeGain);
  CHECK(variable_from_name("al(e1,e3)").to == "e3");
  CHECK(variable_from_name("a4").kind == VarKind::Named);
  PolySystem s;
  s.add_variable(Variable::named("x"));
  require_error(ErrorKind::ParseError, [&] { s.add_variable(Variable::named("x")); });
  require_error(ErrorKind::ParseError, [&] { s.add_variable(Variable::named("bad name")); });
}

TEST_CASE("system files round-trip") {
  const PolySystem s = system_load(fixture("char2_system.json"));
  CHECK(s.num_variables() == 17);
  CHECK(s.size() == 23);
  const auto path = std::filesystem::temp_directory_path() / "pathgain_roundtrip_system.json";
  system_save(s, path);
  CHECK(system_load(path) == s);
  std::filesystem::remove(path);
  CHECK(system_from_json(nlohmann::json::parse(system_to_json(s).dump())) == s);
}

TEST_CASE("malformed system files") {
  require_error(ErrorKind::ParseError, [] {
    system_from_json(nlohmann::json::parse(
        R"({"variables":["x"],"equations":[{"terms":[{"coeff":1,"vars":["y"]}],"tag":""}]})"));
  });
  require_error(ErrorKind::ParseError, [] { system_from_json(nlohmann::json::parse(R"({"variables":3})")); });
}
