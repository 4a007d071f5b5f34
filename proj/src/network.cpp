#include "pathgain/network.hpp"

#include <algorithm>
#include <set>

#include "pathgain/error.hpp"
#include "pathgain/io.hpp"

namespace pathgain {

namespace {

constexpr std::string_view kVirtualSourcePrefix = "v_src_";
constexpr std::string_view kVirtualSinkPrefix = "v_snk_";

bool valid_edge_id(const std::string& id) {
  if (id.empty()) return false;
  for (char ch : id) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' || ch == '.';
    if (!ok) return false;
  }
  return !id.starts_with(kVirtualSourcePrefix) && !id.starts_with(kVirtualSinkPrefix);
}

}  // namespace

Problem Problem::build(std::vector<NodeId> nodes, std::vector<Edge> edges,
                       std::vector<SourceSpec> sources, std::vector<SinkSpec> sinks) {
  Problem pb;
  for (NodeId v : nodes) {
    if (v < 0) raise(ErrorKind::ParseError, "node ids must be non-negative");
    if (!pb.incidence_.emplace(v, Incidence{}).second) {
      raise(ErrorKind::ParseError, "duplicate node " + std::to_string(v));
    }
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (!valid_edge_id(e.id)) raise(ErrorKind::ParseError, "invalid edge id '" + e.id + "'");
    if (!pb.edge_index_.emplace(e.id, k).second) {
      raise(ErrorKind::DuplicateEdgeId, "edge id '" + e.id + "' used twice");
    }
    if (!pb.incidence_.count(e.tail) || !pb.incidence_.count(e.head)) {
      raise(ErrorKind::ParseError, "edge '" + e.id + "' references an unknown node");
    }
    if (e.tail == e.head) raise(ErrorKind::CyclicGraph, "self-loop on edge '" + e.id + "'");
    pb.incidence_[e.tail].out.push_back(k);
    pb.incidence_[e.head].in.push_back(k);
  }
  const auto by_id = [&edges](std::size_t a, std::size_t b) { return edges[a].id < edges[b].id; };
  for (auto& [v, inc] : pb.incidence_) {
    std::sort(inc.in.begin(), inc.in.end(), by_id);
    std::sort(inc.out.begin(), inc.out.end(), by_id);
  }
  for (const auto& s : sources) {
    if (!pb.incidence_.count(s.node)) {
      raise(ErrorKind::ParseError, "source node " + std::to_string(s.node) + " does not exist");
    }
  }
  for (const auto& t : sinks) {
    if (!pb.incidence_.count(t.node)) {
      raise(ErrorKind::ParseError, "sink node " + std::to_string(t.node) + " does not exist");
    }
    if (t.demand < 1 || t.demand > static_cast<int>(sources.size())) {
      raise(ErrorKind::DanglingDemand, "sink " + std::to_string(t.node) + " demands source " +
                                           std::to_string(t.demand) + " of " +
                                           std::to_string(sources.size()));
    }
  }
  pb.nodes_ = std::move(nodes);
  pb.edges_ = std::move(edges);
  pb.sources_ = std::move(sources);
  pb.sinks_ = std::move(sinks);
  topo_sort(pb);  // acyclicity witness
  return pb;
}

std::optional<std::size_t> Problem::find_edge(const std::string& id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> Problem::in_edges(NodeId v) const {
  auto it = incidence_.find(v);
  if (it == incidence_.end()) return {};
  return it->second.in;
}

std::span<const std::size_t> Problem::out_edges(NodeId v) const {
  auto it = incidence_.find(v);
  if (it == incidence_.end()) return {};
  return it->second.out;
}

std::optional<int> Problem::source_index_of(NodeId v) const {
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (sources_[i].node == v) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

std::optional<int> Problem::sink_index_of(NodeId v) const {
  for (std::size_t j = 0; j < sinks_.size(); ++j) {
    if (sinks_[j].node == v) return static_cast<int>(j + 1);
  }
  return std::nullopt;
}

Edge Problem::virtual_source_edge(int i) const {
  return Edge{std::string(kVirtualSourcePrefix) + std::to_string(i), kNoNode,
              sources_.at(static_cast<std::size_t>(i - 1)).node, true};
}

Edge Problem::virtual_sink_edge(int j) const {
  return Edge{std::string(kVirtualSinkPrefix) + std::to_string(j),
              sinks_.at(static_cast<std::size_t>(j - 1)).node, kNoNode, true};
}

std::vector<Edge> Problem::virtual_edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 1; i <= sources_.size(); ++i) out.push_back(virtual_source_edge(static_cast<int>(i)));
  for (std::size_t j = 1; j <= sinks_.size(); ++j) out.push_back(virtual_sink_edge(static_cast<int>(j)));
  return out;
}

bool Problem::is_normalized() const {
  std::set<NodeId> source_nodes, sink_nodes;
  for (const auto& s : sources_) {
    if (!source_nodes.insert(s.node).second || !in_edges(s.node).empty()) return false;
  }
  for (const auto& t : sinks_) {
    if (!sink_nodes.insert(t.node).second || !out_edges(t.node).empty()) return false;
    if (source_nodes.count(t.node)) return false;
  }
  return true;
}

TopoOrder topo_sort(const Problem& problem) {
  std::map<NodeId, std::size_t> remaining;
  std::vector<NodeId> frontier;
  for (NodeId v : problem.nodes()) {
    remaining[v] = problem.out_edges(v).size();
    if (remaining[v] == 0) frontier.push_back(v);
  }
  TopoOrder result;
  result.order.reserve(problem.nodes().size());
  while (!frontier.empty()) {
    std::sort(frontier.begin(), frontier.end());
    std::vector<NodeId> next;
    for (NodeId v : frontier) {
      result.order.push_back(v);
      for (std::size_t e : problem.in_edges(v)) {
        const NodeId u = problem.edge(e).tail;
        if (--remaining[u] == 0) next.push_back(u);
      }
    }
    frontier = std::move(next);
  }
  if (result.order.size() != problem.nodes().size()) {
    raise(ErrorKind::CyclicGraph, "graph has a directed cycle");
  }
  return result;
}

Problem normalize_rates(const Problem& problem) {
  std::map<NodeId, int> source_count, sink_count;
  for (const auto& s : problem.sources()) ++source_count[s.node];
  for (const auto& t : problem.sinks()) ++sink_count[t.node];

  std::vector<NodeId> nodes = problem.nodes();
  std::vector<Edge> edges = problem.edges();
  std::set<std::string> used_ids;
  for (const auto& e : edges) used_ids.insert(e.id);
  NodeId next = nodes.empty() ? 1 : *std::max_element(nodes.begin(), nodes.end()) + 1;

  auto attach = [&](NodeId from, NodeId to, NodeId fresh) {
    std::string id = "split_" + std::to_string(fresh);
    while (used_ids.count(id)) id += "_";
    used_ids.insert(id);
    edges.push_back(Edge{id, from, to, false});
  };

  std::vector<SourceSpec> sources = problem.sources();
  for (auto& s : sources) {
    const NodeId v = s.node;
    if (source_count[v] > 1 || !problem.in_edges(v).empty() || sink_count.count(v)) {
      const NodeId fresh = next++;
      nodes.push_back(fresh);
      attach(fresh, v, fresh);
      s.node = fresh;
    }
  }
  std::vector<SinkSpec> sinks = problem.sinks();
  for (auto& t : sinks) {
    const NodeId v = t.node;
    if (sink_count[v] > 1 || !problem.out_edges(v).empty()) {
      const NodeId fresh = next++;
      nodes.push_back(fresh);
      attach(v, fresh, fresh);
      t.node = fresh;
    }
  }
  return Problem::build(std::move(nodes), std::move(edges), std::move(sources), std::move(sinks));
}

Problem problem_from_json(const nlohmann::json& doc) {
  try {
    std::vector<NodeId> nodes = doc.at("nodes").get<std::vector<NodeId>>();
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      edges.push_back(Edge{e.at("id").get<std::string>(), e.at("tail").get<NodeId>(),
                           e.at("head").get<NodeId>(), false});
    }
    std::vector<SourceSpec> sources;
    for (const auto& s : doc.at("sources")) sources.push_back(SourceSpec{s.at("node").get<NodeId>()});
    std::vector<SinkSpec> sinks;
    for (const auto& t : doc.at("sinks")) {
      sinks.push_back(SinkSpec{t.at("node").get<NodeId>(), t.at("demand").get<int>()});
    }
    return Problem::build(std::move(nodes), std::move(edges), std::move(sources), std::move(sinks));
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ParseError, std::string("problem: ") + e.what());
  }
}

nlohmann::ordered_json problem_to_json(const Problem& problem) {
  nlohmann::ordered_json doc;
  doc["nodes"] = problem.nodes();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : problem.edges()) {
    nlohmann::ordered_json je;
    je["id"] = e.id;
    je["tail"] = e.tail;
    je["head"] = e.head;
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);
  auto sources = nlohmann::ordered_json::array();
  for (const auto& s : problem.sources()) {
    nlohmann::ordered_json js;
    js["node"] = s.node;
    sources.push_back(std::move(js));
  }
  doc["sources"] = std::move(sources);
  auto sinks = nlohmann::ordered_json::array();
  for (const auto& t : problem.sinks()) {
    nlohmann::ordered_json jt;
    jt["node"] = t.node;
    jt["demand"] = t.demand;
    sinks.push_back(std::move(jt));
  }
  doc["sinks"] = std::move(sinks);
  return doc;
}

Problem problem_load(const std::filesystem::path& path) {
  return normalize_rates(problem_from_json(read_json(path)));
}

void problem_save(const Problem& problem, const std::filesystem::path& path) {
  write_json_atomic(path, problem_to_json(problem));
}

}  // namespace pathgain
