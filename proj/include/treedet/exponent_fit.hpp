#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "treedet/channels.hpp"
#include "treedet/families.hpp"
#include "treedet/hypothesis.hpp"

namespace treedet {

/// How to build a strategy for each tree of a family.
struct StrategyRecipe {
  enum class Kind { Simple, Thresholds };
  Kind kind = Kind::Simple;
  /// Simple: margin below -g_P*.
  double epsilon = 0.02;
  /// Simple: candidate leaf maps; empty means every map into {0,1}.
  std::vector<TransmissionFunction> leaf_family;
  /// Thresholds: leaf map and one threshold per level.
  std::optional<TransmissionFunction> gamma;
  std::vector<double> thresholds;
  /// Receiver-side LLR lattice step; 0 keeps exact values.
  double llr_step = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares of ys on xs.
LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

struct FitPoint {
  std::size_t size;
  std::size_t n;
  std::size_t leaves;
  double alpha;
  double root_threshold;
  double type_I;
  double type_II;
  double log_type_II;
  /// log(type II) / regressor
  double normalized_log_beta;
};

struct ExponentFit {
  std::vector<FitPoint> points;
  LinearFit fit;
  /// True when regressing on n instead of the leaf count.
  bool per_node = false;
  /// Largest regressor over smallest is at least 8.
  bool span_ok = false;
};

/// Calibrates the root of each tree to `alpha` and fits log(type II) against
/// the leaf count (or n). Grid points run in parallel.
ExponentFit empirical_exponent(const TreeFamily& family, const StrategyRecipe& recipe,
                               const DistributionPair& pair, const std::vector<std::size_t>& grid,
                               double alpha = 0.25, bool per_node = false);

}  // namespace treedet
