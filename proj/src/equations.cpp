#include "pathgain/equations.hpp"

#include <algorithm>

#include "pathgain/error.hpp"

namespace pathgain {

namespace {

Poly leaf_sum(const LeafRange& r) {
  std::vector<Term> terms;
  for (int id = r.begin; id < r.end; ++id) terms.push_back(Term{1, {id}});
  return Poly::from_terms(std::move(terms));
}

int sources_reaching(const Forest& forest, int tree_node) {
  int n = 0;
  for (int i = 1; i <= forest.num_sources(); ++i) n += forest.h(i, tree_node).empty() ? 0 : 1;
  return n;
}

bool has_gain(GainConvention convention, const Problem& problem, NodeId v) {
  return convention == GainConvention::Full || problem.in_edges(v).size() > 1;
}

}  // namespace

std::vector<TaggedPoly> build_no_interference(const Forest& forest, const Problem& problem) {
  std::vector<TaggedPoly> out;
  for (int j = 1; j <= forest.num_trees(); ++j) {
    const auto& sink = problem.sinks()[static_cast<std::size_t>(j - 1)];
    for (int i = 1; i <= forest.num_sources(); ++i) {
      const int n = forest.path_count(i, j);
      const int delta = sink.demand == i ? 1 : 0;
      if (n == 0) {
        if (delta == 1) {
          raise(ErrorKind::UnsatisfiableDemand, "sink " + std::to_string(sink.node) +
                                                    " has no path from source " + std::to_string(i));
        }
        continue;
      }
      const int first = forest.leaf_var_id(i, j, 1);
      Poly p = leaf_sum(LeafRange{first, first + n}) - Poly::constant(delta);
      out.push_back(TaggedPoly{std::move(p), "no-interference(sink=" + std::to_string(sink.node) +
                                                 ",source=" + std::to_string(i) + ")"});
    }
  }
  return out;
}

std::vector<TaggedPoly> build_edge_compat(const Forest& forest, const Problem& problem, bool screen) {
  std::vector<TaggedPoly> out;
  std::vector<NodeId> nodes = problem.nodes();
  std::sort(nodes.begin(), nodes.end());
  for (NodeId v : nodes) {
    if (screen && forest.relevant_in_degree(v) < 2) continue;
    for (std::size_t e : problem.out_edges(v)) {
      const auto copies = forest.node_replicas_on(e);
      if (copies.size() < 2) continue;
      if (screen && sources_reaching(forest, copies[0]) < 2) continue;
      for (std::size_t x = 0; x < copies.size(); ++x) {
        for (std::size_t y = x + 1; y < copies.size(); ++y) {
          const int c1 = copies[x];
          const int c2 = copies[y];
          for (int i1 = 1; i1 <= forest.num_sources(); ++i1) {
            for (int i2 = i1 + 1; i2 <= forest.num_sources(); ++i2) {
              if (screen && (forest.h(i1, c1).empty() || forest.h(i2, c1).empty())) continue;
              Poly p = leaf_sum(forest.h(i1, c1)) * leaf_sum(forest.h(i2, c2)) -
                       leaf_sum(forest.h(i1, c2)) * leaf_sum(forest.h(i2, c1));
              if (p.is_zero()) continue;
              const auto& n1 = forest.nodes()[static_cast<std::size_t>(c1)];
              const auto& n2 = forest.nodes()[static_cast<std::size_t>(c2)];
              out.push_back(TaggedPoly{
                  std::move(p), "edge-compat(node=" + std::to_string(v) + ",edge=" + problem.edge(e).id +
                                    ",copies=" + std::to_string(n1.copy) + ":" + std::to_string(n2.copy) +
                                    ",sources=" + std::to_string(i1) + ":" + std::to_string(i2) + ")"});
            }
          }
        }
      }
    }
  }
  return out;
}

PathSystem build_path_formulation(const Problem& problem) {
  PathSystem ps{topo_sort(problem), {}, {}};
  ps.forest = transform(problem, ps.order);
  for (const auto& lv : ps.forest.leaf_vars()) ps.system.add_variable(Variable::path_gain(lv.source, lv.tree, lv.k));
  for (auto& tp : build_no_interference(ps.forest, problem)) ps.system.add_equation(tp.poly, tp.tag);
  for (auto& tp : build_edge_compat(ps.forest, problem)) {
    if (tp.poly.degree() > 2) raise(ErrorKind::InvalidArgument, "path-gain equation of degree > 2");
    ps.system.add_equation(tp.poly, tp.tag);
  }
  return ps;
}

PolySystem build_path_system(const Problem& problem) { return build_path_formulation(problem).system; }

PolySystem with_aliases(const PolySystem& system, const Forest& forest) {
  PolySystem out;
  for (std::size_t v = 0; v < system.num_variables(); ++v) {
    const auto& var = system.variables()[v];
    if (var.kind != VarKind::PathGain) {
      out.add_variable(var);
      continue;
    }
    const int id = forest.leaf_var_id(var.source, var.tree, var.k);
    out.add_variable(Variable::named(forest.alias(id)));
  }
  for (const auto& e : system.equations()) out.add_equation(e.poly, e.tag);
  return out;
}

PolySystem build_km_system(const Problem& problem, GainConvention convention) {
  const TopoOrder order = topo_sort(problem);
  const std::size_t num_sources = problem.num_sources();
  PolySystem system;

  std::vector<NodeId> sources_first(order.order.rbegin(), order.order.rend());
  std::map<std::pair<std::string, std::string>, int> gain;
  auto gain_var = [&](const std::string& from, const std::string& to) {
    auto [it, inserted] = gain.emplace(std::make_pair(from, to), -1);
    if (inserted) it->second = system.add_variable(Variable::edge_gain(from, to));
    return Poly::variable(it->second);
  };

  // Register every candidate gain first so that the numbering follows the
  // node order rather than the order in which equations mention them.
  for (NodeId v : sources_first) {
    if (auto i = problem.source_index_of(v)) {
      if (convention == GainConvention::Full) {
        for (std::size_t e : problem.out_edges(v)) gain_var(problem.virtual_source_edge(*i).id, problem.edge(e).id);
      }
      continue;
    }
    if (has_gain(convention, problem, v)) {
      for (std::size_t e : problem.out_edges(v)) {
        for (std::size_t ep : problem.in_edges(v)) gain_var(problem.edge(ep).id, problem.edge(e).id);
      }
      if (auto j = problem.sink_index_of(v)) {
        for (std::size_t ep : problem.in_edges(v)) gain_var(problem.edge(ep).id, problem.virtual_sink_edge(*j).id);
      }
    }
  }

  std::vector<std::vector<Poly>> f(problem.edges().size(), std::vector<Poly>(num_sources));
  std::vector<std::pair<Poly, std::string>> equations;
  for (NodeId v : sources_first) {
    if (auto i = problem.source_index_of(v)) {
      for (std::size_t e : problem.out_edges(v)) {
        f[e][static_cast<std::size_t>(*i - 1)] =
            convention == GainConvention::Full
                ? gain_var(problem.virtual_source_edge(*i).id, problem.edge(e).id)
                : Poly::constant(1);
      }
      continue;
    }
    const bool gains = has_gain(convention, problem, v);
    for (std::size_t e : problem.out_edges(v)) {
      std::vector<Poly> acc(num_sources);
      for (std::size_t ep : problem.in_edges(v)) {
        const Poly g = gains ? gain_var(problem.edge(ep).id, problem.edge(e).id) : Poly::constant(1);
        for (std::size_t c = 0; c < num_sources; ++c) {
          if (!f[ep][c].is_zero()) acc[c] = acc[c] + g * f[ep][c];
        }
      }
      f[e] = std::move(acc);
    }
    if (auto j = problem.sink_index_of(v)) {
      const auto& sink = problem.sinks()[static_cast<std::size_t>(*j - 1)];
      std::vector<Poly> received(num_sources);
      for (std::size_t ep : problem.in_edges(v)) {
        const Poly g = gains ? gain_var(problem.edge(ep).id, problem.virtual_sink_edge(*j).id) : Poly::constant(1);
        for (std::size_t c = 0; c < num_sources; ++c) {
          if (!f[ep][c].is_zero()) received[c] = received[c] + g * f[ep][c];
        }
      }
      for (std::size_t c = 0; c < num_sources; ++c) {
        const int delta = sink.demand == static_cast<int>(c + 1) ? 1 : 0;
        equations.emplace_back(received[c] - Poly::constant(delta),
                               "km(sink=" + std::to_string(v) + ",coord=" + std::to_string(c + 1) + ")");
      }
    }
  }
  // Sinks are visited in topological order; emit equations in sink order.
  std::vector<std::pair<Poly, std::string>> ordered;
  for (const auto& sink : problem.sinks()) {
    const std::string prefix = "km(sink=" + std::to_string(sink.node) + ",";
    for (const auto& eq : equations) {
      if (eq.second.starts_with(prefix)) ordered.push_back(eq);
    }
  }
  for (const auto& [p, tag] : ordered) system.add_equation(p, tag);
  return system.pruned();
}

std::vector<std::pair<std::string, std::string>> expand_path_in_gains(const Forest& forest, const Problem& problem,
                                                                      int leaf_var, GainConvention convention) {
  const auto& lv = forest.leaf_vars().at(static_cast<std::size_t>(leaf_var));
  const auto path = forest.leaf_path(leaf_var);
  std::vector<std::pair<std::string, std::string>> out;
  if (path.empty()) return out;
  if (convention == GainConvention::Full) {
    out.emplace_back(problem.virtual_source_edge(lv.source).id, problem.edge(path.front()).id);
  }
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    if (has_gain(convention, problem, problem.edge(path[k]).head)) {
      out.emplace_back(problem.edge(path[k]).id, problem.edge(path[k + 1]).id);
    }
  }
  const NodeId sink = problem.edge(path.back()).head;
  if (has_gain(convention, problem, sink)) {
    out.emplace_back(problem.edge(path.back()).id, problem.virtual_sink_edge(lv.tree).id);
  }
  return out;
}

Poly path_gain_poly(const Forest& forest, const Problem& problem, int leaf_var, const PolySystem& km,
                    GainConvention convention) {
  Poly p = Poly::constant(1);
  for (const auto& [from, to] : expand_path_in_gains(forest, problem, leaf_var, convention)) {
    const auto v = km.find_variable(Variable::edge_gain(from, to).name);
    if (!v) return Poly{};
    p = p * Poly::variable(*v);
  }
  return p;
}

}  // namespace pathgain
