#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treedet/hypothesis.hpp"

namespace treedet {

/// Deterministic table from input tuples to output symbols.
///
/// A leaf map has arity 0 and a single input alphabet (its observation); a
/// relay map of arity d has d message alphabets. Tuples are flattened in mixed
/// radix with the first input most significant.
class TransmissionFunction {
 public:
  TransmissionFunction(std::size_t arity, std::vector<Alphabet> inputs, Alphabet output,
                       std::vector<std::size_t> table);

  static TransmissionFunction identity(const Alphabet& alphabet);
  static TransmissionFunction constant(const Alphabet& input, const Alphabet& output,
                                       std::size_t symbol);
  /// f receives input symbol indices and returns an output index.
  static TransmissionFunction from_function(
      std::size_t arity, std::vector<Alphabet> inputs, Alphabet output,
      const std::function<std::size_t(std::span<const std::size_t>)>& f);

  std::size_t arity() const { return arity_; }
  const std::vector<Alphabet>& inputs() const { return inputs_; }
  const Alphabet& output() const { return output_; }
  const std::vector<std::size_t>& table() const { return table_; }
  std::size_t domain_size() const { return table_.size(); }

  std::size_t flat_index(std::span<const std::size_t> tuple) const;
  std::vector<std::size_t> tuple_at(std::size_t flat) const;
  std::size_t apply(std::span<const std::size_t> tuple) const { return table_[flat_index(tuple)]; }
  std::size_t apply(std::size_t observation) const { return table_.at(observation); }

  bool operator==(const TransmissionFunction&) const = default;

 private:
  std::size_t arity_;
  std::vector<Alphabet> inputs_;
  Alphabet output_;
  std::vector<std::size_t> table_;
};

/// Push-forward of a leaf observation pair through an arity-0 map. Output
/// symbols that neither hypothesis can produce are dropped.
DistributionPair induced_pair(const DistributionPair& pair, const TransmissionFunction& tf);

/// Push-forward of independent input messages through an arity-d map.
DistributionPair induced_pair(std::span<const DistributionPair> inputs, const TransmissionFunction& tf);

struct EnumerationOptions {
  /// Keep one representative per output relabeling (restricted-growth tables).
  bool canonical = false;
  double cap = 1e6;
};

/// Every total map from the product of `inputs` into `output`, in lexicographic
/// order of the table (entry 0 most significant). Throws EnumerationTooLarge.
std::vector<TransmissionFunction> enumerate_quantizers(const std::vector<Alphabet>& inputs,
                                                       const Alphabet& output, std::size_t arity,
                                                       EnumerationOptions options = {});

/// All maps from an observation alphabet to {0,1}.
std::vector<TransmissionFunction> all_binary_quantizers(const Alphabet& observation);

/// Returns 0 when the normalized sum is at most t (ties within a relative
/// 1e-12 count as equal), else 1.
int apply_llrq(double t, std::span<const double> incoming_llrs, double leaf_count);

/// Decision helper shared by every evaluator: true when sum > t * leaf_count.
bool llrq_exceeds(double sum, double t, double leaf_count);

struct ParallelExponent {
  double g_p_star;
  std::size_t index;
};

/// -max over the family of D(P0^g || P1^g). Throws DegenerateFamily.
ParallelExponent parallel_exponent(const DistributionPair& pair,
                                   std::span<const TransmissionFunction> leaf_family);

struct FusionLoss {
  std::size_t k;
  double constant;
  /// g_P* < K_k
  bool holds;
  double g_p_star;
  std::size_t relay_index;
  std::vector<std::size_t> leaf_indices;
};

/// inf over (relay map, k leaf maps) of -(1/k) D(nu0 || nu1).
FusionLoss fusion_loss_constant(const DistributionPair& pair,
                                std::span<const TransmissionFunction> leaf_family,
                                std::span<const TransmissionFunction> relay_family, std::size_t k);

/// Threshold interval [lo, hi) for which an LLRQ reproduces a binary-output map,
/// given the log-likelihood ratio of each input symbol of each input.
struct ThresholdRange {
  double lo;
  double hi;
};
std::optional<ThresholdRange> llrq_realization(const TransmissionFunction& tf,
                                               const std::vector<std::vector<double>>& input_llrs,
                                               double leaf_count);

/// Standard two-input gates over binary messages.
TransmissionFunction or_gate();
TransmissionFunction and_gate();
TransmissionFunction forward_first_gate();

}  // namespace treedet
