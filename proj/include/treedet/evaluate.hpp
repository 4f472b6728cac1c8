#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "treedet/hypothesis.hpp"
#include "treedet/message_law.hpp"
#include "treedet/strategy.hpp"

namespace treedet {

/// Message laws of every node, shared between nodes whose subtrees and rules
/// coincide.
struct NodeEvaluation {
  /// Per node, index into the per-signature tables below.
  std::vector<std::size_t> signature;
  /// Law of the sum of incoming (snapped) LLRs; empty for leaves and idle nodes.
  std::vector<MessageLaw> sum_laws;
  /// Law of the LLR a parent assigns to this node's message, before snapping.
  std::vector<MessageLaw> out_laws;
  /// For relays: LLR of bit 0 and bit 1 as seen by the parent.
  std::vector<std::array<double, 2>> bit_llr;
  /// For leaves: LLR per output symbol of the leaf rule.
  std::vector<double> leaf_llr;
};

NodeEvaluation evaluate_messages(const Strategy& strategy, const DistributionPair& pair,
                                 std::size_t cap = MessageLaw::kDefaultCap);

/// Law of the LLR carried by a 1-bit LLRQ output given its input sum law.
MessageLaw relay_output_law(const MessageLaw& sum, double t, double leaf_count);

enum class Method { Exact, MonteCarlo };

struct ErrorEstimate {
  double type_I = 0.0;
  double type_II = 0.0;
  double log_type_I = 0.0;
  double log_type_II = 0.0;
  Method method = Method::Exact;
  std::size_t trials = 0;
  double std_error_I = 0.0;
  double std_error_II = 0.0;
};

ErrorEstimate exact_error_probs(const Strategy& strategy, const DistributionPair& pair);

MessageLaw root_sum_law(const Strategy& strategy, const DistributionPair& pair);

/// np_calibrate_root with the exact evaluator.
Strategy calibrate_root_exact(const Strategy& strategy, const DistributionPair& pair, double alpha);

/// Local error probabilities of a node's own LLRQ decision.
struct LocalErrors {
  NodeId node;
  std::size_t level;
  /// log P1(S/l <= t)
  double log_miss;
  /// log P0(S/l > t)
  double log_false_alarm;
};

/// One entry per active non-leaf node; the root uses its current threshold.
std::vector<LocalErrors> local_error_probs(const Strategy& strategy, const DistributionPair& pair);

/// Counter-based simulation; each (hypothesis, trial, node) draws from its own
/// stream, so results do not depend on the thread schedule.
ErrorEstimate monte_carlo_error(const Strategy& strategy, const DistributionPair& pair, std::size_t trials,
                                std::uint64_t seed);

struct ChebyshevCheck {
  /// E0[S(f)] / l(f)
  double center;
  /// P0(|S(f)/l(f) - center| > eta)
  double lhs;
  /// a (1 + N) / (eta^2 l(f))
  double rhs;
  double bound_constant;
  bool holds;
};

/// Needs a height-2 tree whose relays all have at most `small_threshold` leaves.
ChebyshevCheck chebyshev_variance_check(const Strategy& strategy, const DistributionPair& pair,
                                        std::size_t small_threshold, double eta);

}  // namespace treedet
