#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace treedet {

using NodeId = std::size_t;

/// Rooted in-tree over dense ids with root 0. Immutable after construction.
class Tree {
 public:
  /// parents[0] must be empty; every other entry names an existing node.
  explicit Tree(std::vector<std::optional<NodeId>> parents);

  std::size_t size() const { return parents_.size(); }
  NodeId root() const { return 0; }
  std::optional<NodeId> parent(NodeId v) const { return parents_[v]; }
  const std::vector<std::optional<NodeId>>& parents() const { return parents_; }
  std::span<const NodeId> children(NodeId v) const { return children_[v]; }

  bool is_leaf(NodeId v) const { return v != 0 && children_[v].empty(); }
  std::size_t depth(NodeId v) const { return depth_[v]; }
  std::size_t height() const { return height_; }
  /// height - depth; leaves of a uniform tree sit at level 0.
  std::size_t level(NodeId v) const { return height_ - depth_[v]; }
  std::size_t leaf_count(NodeId v) const { return leaves_[v]; }
  std::size_t predecessor_count(NodeId v) const { return preds_[v]; }
  std::size_t leaf_total() const { return leaves_[0]; }

  /// Nodes with at least one leaf child.
  std::vector<NodeId> set_a() const;
  /// Non-leaf nodes whose children are all leaves.
  std::vector<NodeId> set_b() const;
  bool in_b(NodeId v) const;

  bool is_uniform() const;
  /// Children before parents.
  const std::vector<NodeId>& bottom_up_order() const { return order_; }

  bool operator==(const Tree& o) const { return parents_ == o.parents_; }

 private:
  std::vector<std::optional<NodeId>> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> leaves_;
  std::vector<std::size_t> preds_;
  std::vector<NodeId> order_;
  std::size_t height_ = 0;
};

struct TreeStats {
  std::size_t n = 0;
  std::size_t height = 0;
  std::size_t leaves = 0;
  std::size_t a_size = 0;
  std::size_t b_size = 0;
  std::size_t small_threshold = 0;
  /// Members of B with at most `small_threshold` leaves.
  std::vector<NodeId> small;
  /// Fraction of leaves under small members of B.
  double q = 0.0;
  double leaf_fraction = 0.0;
  /// |small| >= q * leaves / N
  bool count_bound_holds = false;
};

TreeStats analyze_tree(const Tree& tree, std::size_t small_threshold);

/// Result of a construction plus the id map from the input tree.
struct Reindexed {
  Tree tree;
  std::vector<std::optional<NodeId>> old_to_new;
};

/// Splice one relay chain per node whose leaf children sit above the bottom
/// level. Original ids are kept; chain nodes are appended.
Reindexed uniformize(const Tree& tree);

/// Remove members of B with at most `small_threshold` leaves, then any relay
/// left without children. Surviving nodes are relabelled densely in id order.
/// Throws NotUniform, EmptyAfterPrune.
Reindexed prune_small(const Tree& tree, std::size_t small_threshold);

/// Delete every leaf of a uniform tree of height >= 2.
Reindexed collapse_leaves(const Tree& tree);

/// q'_N <= h (N q_M + N/M) for a tree and its uniformized version.
bool uniformized_fraction_bound_holds(const Tree& original, const Tree& uniform, std::size_t n_small,
                                      std::size_t m_small);

}  // namespace treedet
