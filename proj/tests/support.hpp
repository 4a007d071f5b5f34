#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <doctest.h>

#include "pathgain/error.hpp"
#include "pathgain/forest.hpp"
#include "pathgain/network.hpp"
#include "pathgain/galois.hpp"
#include "pathgain/harness.hpp"
#include "pathgain/poly.hpp"
#include "pathgain/solve.hpp"

namespace pathgain::testing {

struct EdgeSpec {
  std::string id;
  NodeId tail, head;
};

inline Problem make_problem(std::vector<NodeId> nodes, const std::vector<EdgeSpec>& edges,
                            const std::vector<NodeId>& sources, const std::vector<std::pair<NodeId, int>>& sinks) {
  std::vector<Edge> es;
  for (const auto& e : edges) es.push_back(Edge{e.id, e.tail, e.head, false});
  std::vector<SourceSpec> ss;
  for (NodeId v : sources) ss.push_back(SourceSpec{v});
  std::vector<SinkSpec> ts;
  for (const auto& [v, d] : sinks) ts.push_back(SinkSpec{v, d});
  return Problem::build(std::move(nodes), std::move(es), std::move(ss), std::move(ts));
}

/// 1 -> 2 -> 3, node 1 a source and node 3 a sink demanding it.
inline Problem path_graph() { return make_problem({1, 2, 3}, {{"e1", 1, 2}, {"e2", 2, 3}}, {1}, {{3, 1}}); }

/// random_dag, moving on to the next seed while the parameters are infeasible.
inline Problem random_problem(std::uint64_t seed, int nodes, int edges, int sources, int sinks) {
  for (int attempt = 0;; ++attempt, ++seed) {
    try {
      return random_dag(seed, nodes, edges, sources, sinks);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfeasibleParams || attempt == 1000) throw;
    }
  }
}

template <class F>
void require_error(ErrorKind kind, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    CHECK_MESSAGE(e.kind() == kind, e.what());
    return;
  }
  FAIL("expected error " << to_string(kind));
}

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(FIXTURE_DIR) / name; }

/// Sparse random system of degree at most 2 with small integer coefficients.
/// Linear equations with unit coefficients are common so that elimination
/// has something to do.
inline PolySystem random_system(std::uint64_t seed, int n_vars, int n_eqs) {
  std::mt19937_64 rng(seed);
  auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  PolySystem s;
  for (int v = 0; v < n_vars; ++v) s.add_variable(Variable::named("x" + std::to_string(v + 1)));
  for (int e = 0; e < n_eqs; ++e) {
    std::vector<Term> terms;
    const int n_terms = pick(1, 3);
    for (int t = 0; t < n_terms; ++t) {
      Monomial m{pick(0, n_vars - 1)};
      if (pick(0, 2) == 0) m.push_back(pick(0, n_vars - 1));
      std::sort(m.begin(), m.end());
      const int c = pick(0, 3) == 0 ? pick(-3, 3) : (pick(0, 1) ? 1 : -1);
      if (c != 0) terms.push_back(Term{c, m});
    }
    if (pick(0, 1)) terms.push_back(Term{pick(-2, 2), {}});
    s.add_equation(Poly::from_terms(terms), "r" + std::to_string(e + 1));
  }
  return s;
}

/// Parses "a2*b2 - a4*b1 + 1" (integer coefficients, products of names, an
/// optional "= rhs" moved to the left) against the variables of `system`.
inline Poly parse_poly(const std::string& text, const PolySystem& system) {
  auto side = [&system](const std::string& src) {
    std::vector<Term> terms;
    std::size_t i = 0;
    auto skip = [&] {
      while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
    };
    while (true) {
      skip();
      if (i >= src.size()) break;
      std::int64_t sign = 1;
      if (src[i] == '+' || src[i] == '-') {
        sign = src[i] == '-' ? -1 : 1;
        ++i;
        skip();
      }
      Term t{sign, {}};
      while (true) {
        skip();
        if (std::isdigit(static_cast<unsigned char>(src[i]))) {
          std::size_t j = i;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
          t.coeff *= std::stoll(src.substr(i, j - i));
          i = j;
        } else {
          std::size_t j = i;
          while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                    src[j] == '(' || src[j] == ')' || src[j] == ',')) {
            ++j;
          }
          const auto idx = system.find_variable(src.substr(i, j - i));
          if (!idx || j == i) throw std::invalid_argument("unknown variable in: " + src);
          t.mono.push_back(*idx);
          i = j;
        }
        skip();
        if (i < src.size() && src[i] == '*') {
          ++i;
          continue;
        }
        break;
      }
      std::sort(t.mono.begin(), t.mono.end());
      terms.push_back(t);
    }
    return Poly::from_terms(terms);
  };
  const auto eq = text.find('=');
  if (eq == std::string::npos) return side(text);
  return side(text.substr(0, eq)) - side(text.substr(eq + 1));
}

/// Canonical forms of all equations, for order-independent comparison.
inline std::set<Poly> equation_set(const PolySystem& system) {
  std::set<Poly> out;
  for (const auto& e : system.equations()) out.insert(e.poly.canonical());
  return out;
}

/// Butterfly leaves are met in a different order than in the hand-drawn
/// trees; these aliases are swapped to get the textbook names.
inline std::string textbook_alias(const std::string& alias) {
  static const std::map<std::string, std::string> swap{{"b3", "b4"}, {"b4", "b3"}, {"b5", "b6"}, {"b6", "b5"}};
  const auto it = swap.find(alias);
  return it == swap.end() ? alias : it->second;
}

/// The GF(4) butterfly solution, keyed by textbook alias.
inline Solution butterfly_gf4_solution(const Forest& forest) {
  const FieldSpec f = FieldSpec::make(2, 2);
  const FieldElem z = f.zero(), o = f.one(), al = f.element(2), al2 = f.mul(al, al);
  const std::map<std::string, FieldElem> values{{"a1", o}, {"a5", o}, {"b2", o},  {"b6", o},
                                                {"a2", z}, {"a6", z}, {"b1", z},  {"b5", z},
                                                {"a3", al}, {"a4", al}, {"b3", al2}, {"b4", al2}};
  Solution s{f, {}, {}};
  for (int id = 0; id < static_cast<int>(forest.leaf_vars().size()); ++id) {
    s.names.push_back(forest.var_name(id));
    s.values.push_back(values.at(textbook_alias(forest.alias(id))));
  }
  return s;
}

}  // namespace pathgain::testing
