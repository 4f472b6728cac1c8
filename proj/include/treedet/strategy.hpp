#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "treedet/channels.hpp"
#include "treedet/hypothesis.hpp"
#include "treedet/message_law.hpp"
#include "treedet/topology.hpp"

namespace treedet {

/// Relay strategy on a uniform tree: every leaf sends leaf_rule(X), every node
/// at level k runs a 1-bit LLRQ with threshold t_k normalized by its active
/// leaf count, and the root declares H1 on output 1.
///
/// Idle nodes send nothing. A relay whose children are all idle is idle too.
/// With llr_step > 0 every receiver snaps incoming LLRs to the lattice
/// llr_step * Z before summing.
class Strategy {
 public:
  /// thresholds[k-1] is the level-k threshold; its size must equal the height.
  Strategy(Tree tree, TransmissionFunction leaf_rule, std::vector<double> thresholds);

  const Tree& tree() const { return *tree_; }
  const TransmissionFunction& leaf_rule() const { return leaf_rule_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  /// 1-based level.
  double threshold(std::size_t level) const { return thresholds_.at(level - 1); }
  double root_threshold() const { return root_override_.value_or(thresholds_.back()); }
  std::optional<double> root_override() const { return root_override_; }
  double llr_step() const { return llr_step_; }

  bool idle(NodeId v) const { return idle_[v]; }
  std::size_t active_leaves(NodeId v) const { return active_leaves_[v]; }
  /// Relays never use an observation of their own here.
  bool is_relay_strategy() const { return true; }

  Strategy with_root_threshold(double t) const;
  Strategy with_llr_step(double step) const;
  /// Marks nodes idle; throws InvalidParams if nothing active remains.
  Strategy with_idle(std::span<const NodeId> nodes) const;

 private:
  void refresh_activity();

  std::shared_ptr<const Tree> tree_;
  TransmissionFunction leaf_rule_;
  std::vector<double> thresholds_;
  std::optional<double> root_override_;
  double llr_step_ = 0.0;
  std::vector<bool> marked_;
  std::vector<bool> idle_;
  std::vector<std::size_t> active_leaves_;
};

/// Validates the thresholds against the rate recursion. Throws NotUniform,
/// InfeasibleThreshold.
Strategy build_relay_strategy(const Tree& tree, const DistributionPair& pair,
                              const TransmissionFunction& gamma, const std::vector<double>& thresholds);

struct SimpleStrategy {
  Strategy strategy;
  std::size_t gamma_index;
  double threshold;
  double g_p_star;
  /// Input tree ids to ids in the uniformized tree.
  std::vector<std::optional<NodeId>> node_map;
};

/// The most informative leaf map in the family and the common threshold
/// -D(P0^g || P1^g) + eps/2 at every level, on the uniformized tree.
/// Throws EpsilonTooLarge when eps >= -g_P*.
SimpleStrategy simple_strategy(const Tree& tree, const DistributionPair& pair,
                               std::span<const TransmissionFunction> leaf_family, double eps);

/// Returns the law of the root's sum of incoming LLRs.
using RootLawEvaluator = std::function<MessageLaw(const Strategy&)>;

struct RootCalibration {
  double threshold;
  double log_type_I;
  double log_type_II;
};

/// Smallest atom x of sum/leaf_count with P0(sum/leaf_count > x) <= alpha.
RootCalibration calibrate_threshold(const MessageLaw& root_sum, double leaf_count, double alpha);

/// Replaces the root threshold with the calibrated one.
Strategy np_calibrate_root(const Strategy& strategy, double alpha, const RootLawEvaluator& evaluator);

}  // namespace treedet
