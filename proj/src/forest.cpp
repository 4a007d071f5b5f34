#include "pathgain/forest.hpp"

#include <algorithm>
#include <climits>

#include "pathgain/error.hpp"

namespace pathgain {

namespace {

const std::vector<int> kEmpty;

}  // namespace

const std::vector<int>& Forest::node_replicas(NodeId v) const {
  auto it = node_replicas_.find(v);
  return it == node_replicas_.end() ? kEmpty : it->second;
}

const std::vector<int>& Forest::edge_replicas(std::size_t edge) const {
  return edge < edge_replicas_.size() ? edge_replicas_[edge] : kEmpty;
}

std::vector<int> Forest::node_replicas_on(std::size_t out_edge) const {
  std::vector<int> out;
  for (int te : edge_replicas(out_edge)) out.push_back(edges_[te].tail);
  return out;
}

std::vector<int> Forest::feeding_replicas(std::size_t in_edge, std::size_t out_edge) const {
  std::vector<int> out;
  for (int copy : node_replicas_on(out_edge)) {
    const int te = input_copy(copy, in_edge);
    if (te >= 0) out.push_back(te);
  }
  return out;
}

int Forest::input_copy(int node, std::size_t in_edge) const {
  for (int te : nodes_.at(static_cast<std::size_t>(node)).in_edges) {
    if (edges_[te].original == in_edge) return te;
  }
  return -1;
}

LeafRange Forest::h(int source, int tree_node) const {
  return ranges_.at(static_cast<std::size_t>(tree_node) * num_sources_ + (source - 1));
}

int Forest::path_count(int source, int tree) const {
  return counts_.at(static_cast<std::size_t>(source - 1) * roots_.size() + (tree - 1));
}

int Forest::leaf_var_id(int source, int tree, int k) const {
  if (k < 1 || k > path_count(source, tree)) {
    raise(ErrorKind::InvalidArgument, "no leaf variable (" + std::to_string(source) + "," +
                                          std::to_string(tree) + "," + std::to_string(k) + ")");
  }
  return count_offset_[static_cast<std::size_t>(source - 1) * roots_.size() + (tree - 1)] + k - 1;
}

std::string Forest::var_name(int leaf_var) const {
  const auto& lv = leaf_vars_.at(static_cast<std::size_t>(leaf_var));
  return "g" + std::to_string(lv.source) + "_" + std::to_string(lv.tree) + "_" + std::to_string(lv.k);
}

std::string Forest::alias(int leaf_var) const {
  const auto& lv = leaf_vars_.at(static_cast<std::size_t>(leaf_var));
  if (lv.source > 26) return var_name(leaf_var);
  const int first = count_offset_[static_cast<std::size_t>(lv.source - 1) * roots_.size()];
  return std::string(1, static_cast<char>('a' + lv.source - 1)) + std::to_string(leaf_var - first + 1);
}

std::vector<std::size_t> Forest::leaf_path(int leaf_var) const {
  std::vector<std::size_t> path;
  int node = leaf_vars_.at(static_cast<std::size_t>(leaf_var)).leaf;
  while (nodes_[node].out_edge >= 0) {
    const auto& te = edges_[nodes_[node].out_edge];
    path.push_back(te.original);
    node = te.head;
  }
  return path;
}

int Forest::relevant_in_degree(NodeId v) const {
  auto it = relevant_in_degree_.find(v);
  return it == relevant_in_degree_.end() ? 0 : it->second;
}

Forest transform(const Problem& problem, const TopoOrder& order) {
  if (order.order.size() != problem.nodes().size()) {
    raise(ErrorKind::InvalidArgument, "topological order does not cover the graph");
  }
  std::map<NodeId, std::size_t> position;
  for (std::size_t k = 0; k < order.order.size(); ++k) position[order.order[k]] = k;
  for (const auto& e : problem.edges()) {
    if (position.at(e.head) >= position.at(e.tail)) {
      raise(ErrorKind::InvalidArgument, "order is not sinks-first at edge '" + e.id + "'");
    }
  }

  Forest f;
  const int num_sources = static_cast<int>(problem.num_sources());
  const int num_trees = static_cast<int>(problem.num_sinks());
  f.num_sources_ = num_sources;

  // Sources first: reverse of the sinks-first order.
  std::map<NodeId, bool> reachable;
  for (auto it = order.order.rbegin(); it != order.order.rend(); ++it) {
    const NodeId v = *it;
    bool r = problem.source_index_of(v).has_value();
    for (std::size_t e : problem.in_edges(v)) r = r || reachable[problem.edge(e).tail];
    reachable[v] = r;
  }
  f.relevant_.resize(problem.edges().size());
  for (std::size_t e = 0; e < problem.edges().size(); ++e) {
    f.relevant_[e] = reachable[problem.edge(e).tail];
    if (f.relevant_[e]) ++f.relevant_in_degree_[problem.edge(e).head];
  }

  // Depth-first unrolling from each sink. Each call creates one replica of v;
  // its inputs are replicated recursively in edge-id order.
  std::vector<std::vector<int>> tree_leaves(static_cast<std::size_t>(num_trees));
  auto build = [&](auto&& self, NodeId v, int tree) -> int {
    const int idx = static_cast<int>(f.nodes_.size());
    f.nodes_.push_back(TreeNode{v, tree, 0, -1, {}, -1});
    if (problem.source_index_of(v)) tree_leaves[static_cast<std::size_t>(tree - 1)].push_back(idx);
    for (std::size_t e : problem.in_edges(v)) {
      if (!f.relevant_[e]) continue;
      const int child = self(self, problem.edge(e).tail, tree);
      const int te = static_cast<int>(f.edges_.size());
      f.edges_.push_back(TreeEdge{e, tree, 0, child, idx});
      f.nodes_[static_cast<std::size_t>(child)].out_edge = te;
      f.nodes_[static_cast<std::size_t>(idx)].in_edges.push_back(te);
    }
    return idx;
  };
  for (int j = 1; j <= num_trees; ++j) {
    f.roots_.push_back(build(build, problem.sinks()[static_cast<std::size_t>(j - 1)].node, j));
  }

  for (std::size_t n = 0; n < f.nodes_.size(); ++n) {
    auto& replicas = f.node_replicas_[f.nodes_[n].original];
    replicas.push_back(static_cast<int>(n));
    f.nodes_[n].copy = static_cast<int>(replicas.size());
  }
  f.edge_replicas_.assign(problem.edges().size(), {});
  for (std::size_t te = 0; te < f.edges_.size(); ++te) {
    f.edge_replicas_[f.edges_[te].original].push_back(static_cast<int>(te));
  }
  for (auto& replicas : f.edge_replicas_) {
    std::sort(replicas.begin(), replicas.end(),
              [&f](int a, int b) { return f.edges_[a].head < f.edges_[b].head; });
    for (std::size_t k = 0; k < replicas.size(); ++k) f.edges_[replicas[k]].copy = static_cast<int>(k + 1);
  }

  // Leaf variables ordered by (source, tree, k).
  f.counts_.assign(static_cast<std::size_t>(num_sources) * num_trees, 0);
  std::vector<std::vector<int>> k_of(static_cast<std::size_t>(num_trees));
  for (int j = 1; j <= num_trees; ++j) {
    for (int leaf : tree_leaves[static_cast<std::size_t>(j - 1)]) {
      const int i = *problem.source_index_of(f.nodes_[static_cast<std::size_t>(leaf)].original);
      const int k = ++f.counts_[static_cast<std::size_t>(i - 1) * num_trees + (j - 1)];
      k_of[static_cast<std::size_t>(j - 1)].push_back(k);
    }
  }
  f.count_offset_.assign(f.counts_.size(), 0);
  int running = 0;
  for (std::size_t slot = 0; slot < f.counts_.size(); ++slot) {
    f.count_offset_[slot] = running;
    running += f.counts_[slot];
  }
  f.leaf_vars_.resize(static_cast<std::size_t>(running));
  for (int j = 1; j <= num_trees; ++j) {
    const auto& leaves = tree_leaves[static_cast<std::size_t>(j - 1)];
    for (std::size_t n = 0; n < leaves.size(); ++n) {
      const int leaf = leaves[n];
      const int i = *problem.source_index_of(f.nodes_[static_cast<std::size_t>(leaf)].original);
      const int k = k_of[static_cast<std::size_t>(j - 1)][n];
      const int id = f.count_offset_[static_cast<std::size_t>(i - 1) * num_trees + (j - 1)] + k - 1;
      f.leaf_vars_[static_cast<std::size_t>(id)] = LeafVar{i, j, k, leaf};
      f.nodes_[static_cast<std::size_t>(leaf)].leaf_var = id;
    }
  }

  // h-sets: children are created after their parent, so a reverse sweep sees
  // every child before its parent.
  f.ranges_.assign(f.nodes_.size() * static_cast<std::size_t>(num_sources), LeafRange{INT_MAX, INT_MIN});
  for (std::size_t n = f.nodes_.size(); n-- > 0;) {
    const auto& node = f.nodes_[n];
    if (node.leaf_var >= 0) {
      const int i = f.leaf_vars_[static_cast<std::size_t>(node.leaf_var)].source;
      auto& r = f.ranges_[n * num_sources + (i - 1)];
      r.begin = std::min(r.begin, node.leaf_var);
      r.end = std::max(r.end, node.leaf_var + 1);
    }
    if (node.out_edge >= 0) {
      const std::size_t parent = static_cast<std::size_t>(f.edges_[node.out_edge].head);
      for (int i = 0; i < num_sources; ++i) {
        const auto& mine = f.ranges_[n * num_sources + i];
        auto& theirs = f.ranges_[parent * num_sources + i];
        theirs.begin = std::min(theirs.begin, mine.begin);
        theirs.end = std::max(theirs.end, mine.end);
      }
    }
  }
  for (auto& r : f.ranges_) {
    if (r.begin >= r.end) r = LeafRange{0, 0};
  }
  return f;
}

std::vector<std::vector<std::size_t>> enumerate_paths(const Problem& problem, int source, int sink) {
  if (source < 1 || source > static_cast<int>(problem.num_sources()) || sink < 1 ||
      sink > static_cast<int>(problem.num_sinks())) {
    raise(ErrorKind::InvalidArgument, "source or sink index out of range");
  }
  const NodeId from = problem.sources()[static_cast<std::size_t>(source - 1)].node;
  const NodeId to = problem.sinks()[static_cast<std::size_t>(sink - 1)].node;
  std::vector<std::vector<std::size_t>> paths;
  std::vector<std::size_t> current;
  auto walk = [&](auto&& self, NodeId v) -> void {
    if (v == to) {
      paths.push_back(current);
      return;
    }
    for (std::size_t e : problem.out_edges(v)) {
      current.push_back(e);
      self(self, problem.edge(e).head);
      current.pop_back();
    }
  };
  walk(walk, from);
  return paths;
}

nlohmann::ordered_json forest_to_json(const Forest& forest, const Problem& problem) {
  auto node_json = [&](auto&& self, int n) -> nlohmann::ordered_json {
    const auto& node = forest.nodes()[static_cast<std::size_t>(n)];
    nlohmann::ordered_json out;
    out["node"] = node.original;
    out["copy"] = node.copy;
    if (node.out_edge >= 0) {
      const auto& te = forest.edges()[static_cast<std::size_t>(node.out_edge)];
      out["edge"] = problem.edge(te.original).id;
      out["edge_copy"] = te.copy;
    }
    if (node.leaf_var >= 0) out["var"] = forest.var_name(node.leaf_var);
    auto children = nlohmann::ordered_json::array();
    for (int te : node.in_edges) children.push_back(self(self, forest.edges()[static_cast<std::size_t>(te)].tail));
    out["children"] = std::move(children);
    return out;
  };

  nlohmann::ordered_json doc;
  auto trees = nlohmann::ordered_json::array();
  for (int j = 1; j <= forest.num_trees(); ++j) {
    nlohmann::ordered_json tree;
    tree["tree"] = j;
    tree["sink"] = problem.sinks()[static_cast<std::size_t>(j - 1)].node;
    tree["root"] = node_json(node_json, forest.root(j));
    trees.push_back(std::move(tree));
  }
  doc["trees"] = std::move(trees);
  auto vars = nlohmann::ordered_json::array();
  for (std::size_t id = 0; id < forest.leaf_vars().size(); ++id) {
    const auto& lv = forest.leaf_vars()[id];
    nlohmann::ordered_json jv;
    jv["name"] = forest.var_name(static_cast<int>(id));
    jv["source"] = lv.source;
    jv["tree"] = lv.tree;
    jv["k"] = lv.k;
    if (forest.num_sources() <= 26) jv["alias"] = forest.alias(static_cast<int>(id));
    auto path = nlohmann::ordered_json::array();
    for (std::size_t e : forest.leaf_path(static_cast<int>(id))) path.push_back(problem.edge(e).id);
    jv["path"] = std::move(path);
    vars.push_back(std::move(jv));
  }
  doc["leaf_vars"] = std::move(vars);
  return doc;
}

}  // namespace pathgain
