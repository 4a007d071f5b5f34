#include "pathgain/harness.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>

#include "pathgain/equations.hpp"
#include "pathgain/error.hpp"
#include "pathgain/recover.hpp"
#include "pathgain/simplify.hpp"

namespace pathgain {

namespace {

constexpr int kAttempts = 100;
constexpr int kBenchSeeds = 1000;

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::optional<Problem> try_dag(std::mt19937_64& rng, int n, int m, int n_sources, int n_sinks) {
  std::vector<NodeId> nodes(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) nodes[static_cast<std::size_t>(v - 1)] = v;
  std::vector<Edge> edges;
  std::vector<int> indeg(static_cast<std::size_t>(n + 1), 0), outdeg(static_cast<std::size_t>(n + 1), 0);
  for (int k = 1; k <= m; ++k) {
    const int u = uniform(rng, 1, n - 1);
    const int w = uniform(rng, u + 1, n);
    edges.push_back(Edge{"e" + std::to_string(k), u, w, false});
    ++outdeg[static_cast<std::size_t>(u)];
    ++indeg[static_cast<std::size_t>(w)];
  }
  std::vector<NodeId> no_inputs, no_outputs;
  for (int v = 1; v <= n; ++v) {
    if (indeg[static_cast<std::size_t>(v)] == 0) no_inputs.push_back(v);
    if (outdeg[static_cast<std::size_t>(v)] == 0) no_outputs.push_back(v);
  }
  std::shuffle(no_inputs.begin(), no_inputs.end(), rng);
  if (static_cast<int>(no_inputs.size()) < n_sources) return std::nullopt;
  no_inputs.resize(static_cast<std::size_t>(n_sources));
  // reach[v]: sources (0-based) with a path to v; labels are topological.
  std::vector<std::set<int>> reach(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n_sources; ++i) reach[static_cast<std::size_t>(no_inputs[static_cast<std::size_t>(i)])].insert(i);
  std::vector<std::size_t> by_tail(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) by_tail[k] = k;
  std::stable_sort(by_tail.begin(), by_tail.end(),
                   [&edges](std::size_t a, std::size_t b) { return edges[a].tail < edges[b].tail; });
  for (std::size_t k : by_tail) {
    const auto& from = reach[static_cast<std::size_t>(edges[k].tail)];
    reach[static_cast<std::size_t>(edges[k].head)].insert(from.begin(), from.end());
  }

  // Sinks reached by some source come first, the rest only fill up.
  std::vector<NodeId> candidates, unreached;
  for (NodeId v : no_outputs) {
    if (std::find(no_inputs.begin(), no_inputs.end(), v) != no_inputs.end()) continue;
    (reach[static_cast<std::size_t>(v)].empty() ? unreached : candidates).push_back(v);
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::shuffle(unreached.begin(), unreached.end(), rng);
  candidates.insert(candidates.end(), unreached.begin(), unreached.end());
  if (static_cast<int>(candidates.size()) < n_sinks) return std::nullopt;
  candidates.resize(static_cast<std::size_t>(n_sinks));
  std::sort(candidates.begin(), candidates.end());

  std::vector<SourceSpec> sources;
  for (NodeId v : no_inputs) sources.push_back(SourceSpec{v});
  std::vector<SinkSpec> sinks;
  for (NodeId t : candidates) {
    const auto& r = reach[static_cast<std::size_t>(t)];
    int demand = 0;
    if (r.empty()) {
      demand = uniform(rng, 1, n_sources);
    } else {
      std::vector<int> options(r.begin(), r.end());
      demand = options[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(options.size()) - 1))] + 1;
    }
    sinks.push_back(SinkSpec{t, demand});
  }
  return Problem::build(std::move(nodes), std::move(edges), std::move(sources), std::move(sinks));
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

Problem random_dag(std::uint64_t seed, int n_nodes, int n_edges, int n_sources, int n_sinks) {
  if (n_nodes < 1 || n_edges < 0 || n_sources < 0 || n_sinks < 0) {
    raise(ErrorKind::InfeasibleParams, "counts must be non-negative and the graph non-empty");
  }
  if (n_edges > 0 && n_nodes < 2) raise(ErrorKind::InfeasibleParams, "edges need at least two nodes");
  if (n_sinks > 0 && n_sources == 0) raise(ErrorKind::InfeasibleParams, "sinks need a source to demand");
  if (n_sources + n_sinks > n_nodes) raise(ErrorKind::InfeasibleParams, "more terminals than nodes");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    if (auto p = try_dag(rng, n_nodes, n_edges, n_sources, n_sinks)) return *p;
  }
  raise(ErrorKind::InfeasibleParams, "no DAG with " + std::to_string(n_sources) + " sources and " +
                                         std::to_string(n_sinks) + " sinks after " + std::to_string(kAttempts) +
                                         " attempts");
}

OracleReport compare_oracle(const OracleConfig& config) {
  OracleReport report;
  std::mt19937_64 master(config.seed);
  for (int t = 0; t < config.trials; ++t) {
    TrialRecord rec;
    std::optional<Problem> problem;
    while (!problem) {
      rec.seed = master();
      rec.nodes = uniform(master, config.min_nodes, config.max_nodes);
      rec.edges = uniform(master, rec.nodes - 1, std::max(rec.nodes - 1, config.max_edges));
      rec.sinks = uniform(master, config.min_sinks, config.max_sinks);
      try {
        problem = random_dag(rec.seed, rec.nodes, rec.edges, config.sources, rec.sinks);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InfeasibleParams) throw;
      }
    }
    ++report.trials;
    try {
      const auto km = build_km_system(*problem);
      rec.km_solvable = !brute_force(km, config.field, SolveMode::First, config.budget).solutions.empty();
      const auto outcome = solvable_over(*problem, config.field, config.budget);
      rec.path_solvable = outcome.solvable;
      if (outcome.system.max_degree() > 2) ++report.degree_violations;
      if (outcome.witness) {
        ++report.witnesses;
        const auto ps = build_path_formulation(*problem);
        const auto code = derive_code(*problem, ps.forest, *outcome.witness);
        rec.witness_verified = verify_code(*problem, code).pass;
        if (rec.witness_verified) ++report.witnesses_verified;
      }
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::BudgetExceeded:
          rec.skipped = true;
          rec.note = e.what();
          break;
        case ErrorKind::RankViolation:
          ++report.rank_violations;
          rec.note = e.what();
          break;
        case ErrorKind::LiftInconsistency:
          ++report.lift_failures;
          rec.note = e.what();
          break;
        default:
          throw;
      }
    }
    if (rec.skipped) {
      ++report.skipped;
    } else if (rec.note.empty()) {
      if (rec.path_solvable == rec.km_solvable) {
        ++report.agree;
      } else {
        ++report.disagree;
      }
      if (rec.path_solvable) ++report.solvable;
    }
    report.records.push_back(std::move(rec));
  }
  return report;
}

nlohmann::ordered_json oracle_report_to_json(const OracleReport& report) {
  nlohmann::ordered_json doc;
  doc["trials"] = report.trials;
  doc["agree"] = report.agree;
  doc["disagree"] = report.disagree;
  doc["skipped_budget"] = report.skipped;
  doc["solvable"] = report.solvable;
  doc["witnesses"] = report.witnesses;
  doc["witnesses_verified"] = report.witnesses_verified;
  doc["degree_violations"] = report.degree_violations;
  doc["rank_violations"] = report.rank_violations;
  doc["lift_failures"] = report.lift_failures;
  auto records = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json jr;
    jr["seed"] = r.seed;
    jr["nodes"] = r.nodes;
    jr["edges"] = r.edges;
    jr["sinks"] = r.sinks;
    if (r.skipped) {
      jr["skipped"] = true;
    } else {
      jr["path"] = r.path_solvable;
      jr["edge_gain"] = r.km_solvable;
      if (r.path_solvable) jr["verified"] = r.witness_verified;
    }
    if (!r.note.empty()) jr["note"] = r.note;
    records.push_back(std::move(jr));
  }
  doc["records"] = std::move(records);
  return doc;
}

PreservationCheck check_preservation(const PolySystem& system, const FieldSpec& field, std::uint64_t budget) {
  PreservationCheck c;
  try {
    c.original_solvable = !brute_force(system, field, SolveMode::First, budget).solutions.empty();
    const auto r = simplify(system);
    c.admissible = r.verdict.admits(field.characteristic());
    const auto found = brute_force(r.reduced, field, SolveMode::First, budget);
    c.reduced_solvable = !found.solutions.empty();
    if (c.admissible && c.reduced_solvable) lift_solution(r, field, found.solutions.front());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    c.skipped = true;
  }
  return c;
}

BenchReport bench(std::uint64_t seed, int n_nodes, int n_edges, int n_sources, int n_sinks) {
  BenchReport b;
  b.nodes = n_nodes;
  b.edges = n_edges;
  b.sources = n_sources;
  b.sinks = n_sinks;
  // Prefer an instance where every sink is reached by its demanded source.
  std::optional<Problem> problem;
  for (int attempt = 0; attempt < kBenchSeeds && !problem; ++attempt) {
    b.seed = seed + static_cast<std::uint64_t>(attempt);
    Problem candidate = random_dag(b.seed, n_nodes, n_edges, n_sources, n_sinks);
    const Forest f = transform(candidate, topo_sort(candidate));
    bool reachable = true;
    for (int j = 1; j <= f.num_trees(); ++j) {
      reachable = reachable && f.path_count(candidate.sinks()[static_cast<std::size_t>(j - 1)].demand, j) > 0;
    }
    if (reachable || attempt + 1 == kBenchSeeds) problem = std::move(candidate);
  }

  auto start = std::chrono::steady_clock::now();
  const TopoOrder order = topo_sort(*problem);
  const Forest forest = transform(*problem, order);
  b.transform_ms = elapsed_ms(start);
  b.leaf_vars = forest.leaf_vars().size();
  b.tree_nodes = forest.nodes().size();

  start = std::chrono::steady_clock::now();
  PolySystem system;
  try {
    system = build_path_system(*problem);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsatisfiableDemand) throw;
    b.note = e.what();
    b.equations_ms = elapsed_ms(start);
    b.verdict = "unsolvable";
    return b;
  }
  b.equations_ms = elapsed_ms(start);
  b.variables = system.num_variables();
  b.linear = system.count_degree(1);
  b.quadratic = system.count_degree(2);

  start = std::chrono::steady_clock::now();
  const SimplifyResult r = simplify(system);
  b.simplify_ms = elapsed_ms(start);
  b.reduced_variables = r.reduced.active_variables().size();
  b.reduced_equations = r.reduced.size();
  b.reduced_linear = r.reduced.count_degree(1);
  b.reduced_quadratic = r.reduced.count_degree(2);
  b.verdict = r.verdict.to_string();
  return b;
}

nlohmann::ordered_json bench_report_to_json(const BenchReport& b) {
  nlohmann::ordered_json doc;
  doc["seed"] = b.seed;
  doc["nodes"] = b.nodes;
  doc["edges"] = b.edges;
  doc["sources"] = b.sources;
  doc["sinks"] = b.sinks;
  doc["transform_ms"] = b.transform_ms;
  doc["equations_ms"] = b.equations_ms;
  doc["simplify_ms"] = b.simplify_ms;
  doc["leaf_vars"] = b.leaf_vars;
  doc["tree_nodes"] = b.tree_nodes;
  doc["variables"] = b.variables;
  doc["linear"] = b.linear;
  doc["quadratic"] = b.quadratic;
  doc["reduced_variables"] = b.reduced_variables;
  doc["reduced_equations"] = b.reduced_equations;
  doc["reduced_linear"] = b.reduced_linear;
  doc["reduced_quadratic"] = b.reduced_quadratic;
  doc["verdict"] = b.verdict;
  if (!b.note.empty()) doc["note"] = b.note;
  return doc;
}

}  // namespace pathgain
