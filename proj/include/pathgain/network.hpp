#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace pathgain {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

struct Edge {
  std::string id;
  NodeId tail = kNoNode;
  NodeId head = kNoNode;
  bool is_virtual = false;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct SourceSpec {
  NodeId node = kNoNode;
  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

struct SinkSpec {
  NodeId node = kNoNode;
  int demand = 0;  // 1-based source index
  friend bool operator==(const SinkSpec&, const SinkSpec&) = default;
};

/// A validated directed acyclic multigraph with sources, sinks and demands.
///
/// Edges are addressed by their position in `edges()`; incidence lists are
/// sorted by edge id. The virtual edges e(s_i) ("v_src_<i>") and e(t_j)
/// ("v_snk_<j>") are kept apart from the real edges and never take part in
/// in/out-degree counts.
class Problem {
 public:
  Problem() = default;

  /// Validates and indexes a problem as declared. Does not normalize rates.
  static Problem build(std::vector<NodeId> nodes, std::vector<Edge> edges,
                       std::vector<SourceSpec> sources, std::vector<SinkSpec> sinks);

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<SourceSpec>& sources() const noexcept { return sources_; }
  const std::vector<SinkSpec>& sinks() const noexcept { return sinks_; }
  std::size_t num_sources() const noexcept { return sources_.size(); }
  std::size_t num_sinks() const noexcept { return sinks_.size(); }

  const Edge& edge(std::size_t index) const { return edges_.at(index); }
  std::optional<std::size_t> find_edge(const std::string& id) const;
  std::span<const std::size_t> in_edges(NodeId v) const;
  std::span<const std::size_t> out_edges(NodeId v) const;
  bool has_node(NodeId v) const { return incidence_.count(v) != 0; }

  /// 1-based source index whose node is v, if any.
  std::optional<int> source_index_of(NodeId v) const;
  /// 1-based sink index whose node is v, if any (first match).
  std::optional<int> sink_index_of(NodeId v) const;

  /// e(s_i) and e(t_j), 1-based.
  Edge virtual_source_edge(int i) const;
  Edge virtual_sink_edge(int j) const;
  std::vector<Edge> virtual_edges() const;

  /// True when every source/sink occurs once, sources have no inputs, sinks
  /// have no outputs and no node is both.
  bool is_normalized() const;

  friend bool operator==(const Problem& a, const Problem& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.sources_ == b.sources_ &&
           a.sinks_ == b.sinks_;
  }

 private:
  struct Incidence {
    std::vector<std::size_t> in;
    std::vector<std::size_t> out;
  };

  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  std::vector<SourceSpec> sources_;
  std::vector<SinkSpec> sinks_;
  std::map<NodeId, Incidence> incidence_;
  std::map<std::string, std::size_t> edge_index_;
};

struct TopoOrder {
  std::vector<NodeId> order;
};

/// Reverse topological order. N(v) starts at |O(v)|; nodes with N(v) = 0
/// are emitted and N(tail(e)) is decremented for their inputs. Nodes are emitted in rounds:
/// every node that is ready at the start of a round, smallest id first, before
/// any node that becomes ready during it. Sinks come first.
TopoOrder topo_sort(const Problem& problem);

/// Splits multi-rate sources and sinks (a node listed more than once) into
/// fresh unit-rate nodes attached by a single edge. Source entries on nodes
/// with inputs or that are also sinks, and sink entries on nodes with outputs,
/// are split the same way. Idempotent.
Problem normalize_rates(const Problem& problem);

Problem problem_from_json(const nlohmann::json& doc);
nlohmann::ordered_json problem_to_json(const Problem& problem);

/// Parses, validates and normalizes a problem file.
Problem problem_load(const std::filesystem::path& path);
void problem_save(const Problem& problem, const std::filesystem::path& path);

}  // namespace pathgain
