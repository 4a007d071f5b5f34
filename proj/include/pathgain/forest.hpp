#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pathgain/network.hpp"

namespace pathgain {

struct TreeNode {
  NodeId original = kNoNode;
  int tree = 0;      // 1-based
  int copy = 0;      // 1-based position in R_v
  int out_edge = -1; // tree edge towards the root; -1 for roots
  std::vector<int> in_edges;  // ordered by original edge id
  int leaf_var = -1;
};

struct TreeEdge {
  std::size_t original = 0;  // index into Problem::edges()
  int tree = 0;
  int copy = 0;  // 1-based position in R_e
  int tail = -1;
  int head = -1;
};

/// A leaf of the forest that is a copy of source s_i inside tree j; its value
/// is the path gain a_ijk of the matching s_i -> t_j path.
struct LeafVar {
  int source = 0;
  int tree = 0;
  int k = 0;
  int leaf = -1;
};

/// Half-open range of leaf variable ids.
struct LeafRange {
  int begin = 0;
  int end = 0;
  bool empty() const noexcept { return begin >= end; }
  int size() const noexcept { return end > begin ? end - begin : 0; }
};

/// The sink-rooted trees produced by the graph transformation together with
/// the replica bookkeeping used by the equation builders and code recovery.
///
/// Leaf variables are numbered by (source, tree, k); within a tree, leaves are
/// met depth first from the root with inputs taken in edge-id order. Because
/// of that numbering, h_i(v') is always a contiguous id range.
class Forest {
 public:
  int num_trees() const noexcept { return static_cast<int>(roots_.size()); }
  int num_sources() const noexcept { return num_sources_; }
  int root(int tree) const { return roots_.at(static_cast<std::size_t>(tree - 1)); }

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const std::vector<TreeEdge>& edges() const noexcept { return edges_; }
  const std::vector<LeafVar>& leaf_vars() const noexcept { return leaf_vars_; }

  /// R_v in tree-major depth-first order.
  const std::vector<int>& node_replicas(NodeId v) const;
  /// R_e, aligned with R_{head(e)}.
  const std::vector<int>& edge_replicas(std::size_t edge) const;
  /// R_{v,e}: copies of v = tail(e) whose outgoing edge is a copy of e.
  std::vector<int> node_replicas_on(std::size_t out_edge) const;
  /// R_{e',e}: copies of e' entering the nodes of R_{v,e}, in the same order.
  std::vector<int> feeding_replicas(std::size_t in_edge, std::size_t out_edge) const;
  /// Copy of `in_edge` entering tree node `node`, or -1.
  int input_copy(int node, std::size_t in_edge) const;

  /// h_i(v'): leaves of source i (1-based) below tree node v'.
  LeafRange h(int source, int tree_node) const;

  /// N_ij.
  int path_count(int source, int tree) const;
  int leaf_var_id(int source, int tree, int k) const;

  /// "g<i>_<j>_<k>"
  std::string var_name(int leaf_var) const;
  /// Letter per source numbered across trees ("a1".."a6", "b1"...), as used
  /// for small examples. Only defined for up to 26 sources.
  std::string alias(int leaf_var) const;

  /// Original edges from the leaf up to its root.
  std::vector<std::size_t> leaf_path(int leaf_var) const;

  /// True when the transformation kept an input edge (its tail is reachable
  /// from some source). Irrelevant edges carry no flow and have no copies.
  bool is_relevant(std::size_t edge) const { return relevant_.at(edge); }
  /// Inputs of v whose tails are reachable from a source.
  int relevant_in_degree(NodeId v) const;

 private:
  friend Forest transform(const Problem&, const TopoOrder&);

  int num_sources_ = 0;
  std::vector<int> roots_;
  std::vector<TreeNode> nodes_;
  std::vector<TreeEdge> edges_;
  std::vector<LeafVar> leaf_vars_;
  std::map<NodeId, std::vector<int>> node_replicas_;
  std::vector<std::vector<int>> edge_replicas_;
  std::vector<LeafRange> ranges_;  // nodes_.size() * num_sources_
  std::vector<int> counts_;        // num_sources_ * num_trees
  std::vector<int> count_offset_;  // first leaf id of (i, j)
  std::vector<bool> relevant_;
  std::map<NodeId, int> relevant_in_degree_;
};

/// Unrolls the graph into one tree per sink: every node with several outputs
/// is replicated once per outgoing copy, each replica receiving a copy of
/// every input. `order` must list every node sinks-first.
Forest transform(const Problem& problem, const TopoOrder& order);

/// All s_i -> t_j paths as original edge index sequences, found depth first
/// with outputs in edge-id order (hence lexicographic by edge id).
std::vector<std::vector<std::size_t>> enumerate_paths(const Problem& problem, int source, int sink);

nlohmann::ordered_json forest_to_json(const Forest& forest, const Problem& problem);

}  // namespace pathgain
