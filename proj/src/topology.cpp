#include "treedet/topology.hpp"

#include <algorithm>
#include <string>

#include "treedet/error.hpp"

namespace treedet {

Tree::Tree(std::vector<std::optional<NodeId>> parents) : parents_(std::move(parents)) {
  const std::size_t n = parents_.size();
  if (n < 2) throw InvalidParams("a tree needs a root and at least one leaf");
  if (parents_[0]) throw InvalidParams("node 0 must be the root");
  children_.assign(n, {});
  for (NodeId v = 1; v < n; ++v) {
    if (!parents_[v]) throw InvalidParams("node " + std::to_string(v) + " has no parent; only 0 may be the root");
    const NodeId p = *parents_[v];
    if (p >= n) throw InvalidParams("node " + std::to_string(v) + " has an out-of-range parent");
    if (p == v) throw InvalidParams("node " + std::to_string(v) + " is its own parent");
    children_[p].push_back(v);
  }
  depth_.assign(n, 0);
  std::vector<NodeId> bfs{0};
  bfs.reserve(n);
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    for (NodeId c : children_[bfs[i]]) {
      depth_[c] = depth_[bfs[i]] + 1;
      bfs.push_back(c);
    }
  }
  if (bfs.size() != n) throw InvalidParams("parent map contains a cycle or a detached component");
  order_.assign(bfs.rbegin(), bfs.rend());
  leaves_.assign(n, 0);
  preds_.assign(n, 0);
  for (NodeId v : order_) {
    if (children_[v].empty()) leaves_[v] = 1;
    height_ = std::max(height_, depth_[v]);
    if (parents_[v]) {
      leaves_[*parents_[v]] += leaves_[v];
      preds_[*parents_[v]] += preds_[v] + 1;
    }
  }
}

std::vector<NodeId> Tree::set_a() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < size(); ++v) {
    for (NodeId c : children_[v]) {
      if (is_leaf(c)) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

bool Tree::in_b(NodeId v) const {
  if (children_[v].empty()) return false;
  for (NodeId c : children_[v]) {
    if (!is_leaf(c)) return false;
  }
  return true;
}

std::vector<NodeId> Tree::set_b() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < size(); ++v) {
    if (in_b(v)) out.push_back(v);
  }
  return out;
}

bool Tree::is_uniform() const {
  for (NodeId v = 1; v < size(); ++v) {
    if (is_leaf(v) && depth_[v] != height_) return false;
  }
  return true;
}

TreeStats analyze_tree(const Tree& tree, std::size_t small_threshold) {
  TreeStats s;
  s.n = tree.size();
  s.height = tree.height();
  s.leaves = tree.leaf_total();
  s.a_size = tree.set_a().size();
  s.small_threshold = small_threshold;
  std::size_t small_leaves = 0;
  for (NodeId v : tree.set_b()) {
    ++s.b_size;
    if (tree.leaf_count(v) <= small_threshold) {
      s.small.push_back(v);
      small_leaves += tree.leaf_count(v);
    }
  }
  s.q = static_cast<double>(small_leaves) / static_cast<double>(s.leaves);
  s.leaf_fraction = static_cast<double>(s.leaves) / static_cast<double>(s.n);
  s.count_bound_holds = static_cast<double>(s.small.size()) + 1e-12 >=
                        s.q * static_cast<double>(s.leaves) / static_cast<double>(small_threshold);
  return s;
}

Reindexed uniformize(const Tree& tree) {
  auto parents = tree.parents();
  const std::size_t h = tree.height();
  for (NodeId v : tree.set_a()) {
    const std::size_t deficit = h - tree.depth(v) - 1;
    if (deficit == 0) continue;
    NodeId tail = v;
    for (std::size_t j = 0; j < deficit; ++j) {
      parents.push_back(tail);
      tail = parents.size() - 1;
    }
    for (NodeId c : tree.children(v)) {
      if (tree.is_leaf(c)) parents[c] = tail;
    }
  }
  std::vector<std::optional<NodeId>> map(tree.size());
  for (NodeId v = 0; v < tree.size(); ++v) map[v] = v;
  return {Tree(std::move(parents)), std::move(map)};
}

namespace {

Reindexed keep_only(const Tree& tree, const std::vector<bool>& removed) {
  std::vector<std::optional<NodeId>> map(tree.size());
  NodeId next = 0;
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (!removed[v]) map[v] = next++;
  }
  std::vector<std::optional<NodeId>> parents(next);
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (removed[v]) continue;
    if (auto p = tree.parent(v)) parents[*map[v]] = map[*p];
  }
  return {Tree(std::move(parents)), std::move(map)};
}

}  // namespace

Reindexed prune_small(const Tree& tree, std::size_t small_threshold) {
  if (!tree.is_uniform()) throw NotUniform("pruning needs a uniform tree");
  std::vector<bool> removed(tree.size(), false);
  for (NodeId v : tree.set_b()) {
    if (tree.leaf_count(v) > small_threshold) continue;
    removed[v] = true;
    for (NodeId c : tree.children(v)) removed[c] = true;
  }
  for (NodeId v : tree.bottom_up_order()) {
    if (removed[v] || tree.children(v).empty()) continue;
    bool any = false;
    for (NodeId c : tree.children(v)) any = any || !removed[c];
    if (!any) removed[v] = true;
  }
  if (removed[0]) throw EmptyAfterPrune("every leaf sits under a small subtree");
  return keep_only(tree, removed);
}

Reindexed collapse_leaves(const Tree& tree) {
  if (!tree.is_uniform()) throw NotUniform("collapsing needs a uniform tree");
  if (tree.height() < 2) throw InvalidParams("collapsing needs height at least 2");
  std::vector<bool> removed(tree.size(), false);
  for (NodeId v = 1; v < tree.size(); ++v) removed[v] = tree.is_leaf(v);
  return keep_only(tree, removed);
}

bool uniformized_fraction_bound_holds(const Tree& original, const Tree& uniform, std::size_t n_small,
                                      std::size_t m_small) {
  const double qn = analyze_tree(uniform, n_small).q;
  const double qm = analyze_tree(original, m_small).q;
  const double h = static_cast<double>(original.height());
  const double n = static_cast<double>(n_small);
  return qn <= h * (n * qm + n / static_cast<double>(m_small)) + 1e-12;
}

}  // namespace treedet
