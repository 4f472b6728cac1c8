#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "treedet/channels.hpp"
#include "treedet/hypothesis.hpp"
#include "treedet/topology.hpp"

namespace treedet {

/// log E_j[(p1/p0)^lambda] over a message pair.
double log_mgf(const DistributionPair& pair, Hypothesis j, double lambda);

struct Interval {
  double lo;
  double hi;
  bool empty() const { return !(lo < hi); }
  bool contains_open(double x) const { return lo < x && x < hi; }
};

struct Transform {
  double value;
  double argmax;
};

/// sup over the domain of lambda*t - fn(lambda), by ternary search on a concave
/// objective. fn must be convex on the domain.
Transform fenchel_legendre(const std::function<double(double)>& fn, double t, Interval domain);

/// Lambda domain used for hypothesis j: [-1, 0] for H1, [0, 1] for H0.
Interval rate_domain(Hypothesis j);

/// The level-k log-mgf built from level-k rates:
/// max{-rate1 (j + lambda), rate0 (j - 1 + lambda)}.
double piecewise_log_mgf(double rate0, double rate1, Hypothesis j, double lambda);

struct LevelRates {
  std::size_t level;
  double threshold;
  /// Rates used downstream (numeric at level 1, closed form above).
  double rate0;
  double rate1;
  /// Independent numeric transform of the previous level's log-mgf.
  double numeric0;
  double numeric1;
  double argmax0;
  double argmax1;
};

struct RateTable {
  /// Leaf message pair the table was built from.
  DistributionPair message_pair;
  /// D(P0||P1) and D(P1||P0) of the message pair.
  double d01;
  double d10;
  std::vector<double> thresholds;
  std::vector<LevelRates> levels;

  std::size_t height() const { return levels.size(); }
  /// 1-based level.
  const LevelRates& at(std::size_t k) const { return levels.at(k - 1); }
};

/// Rates for leaves sending gamma(X) and 1-bit LLRQs at levels 1..h. Throws
/// InfeasibleThreshold at the first violated level.
RateTable rate_table(const DistributionPair& pair, const TransmissionFunction& gamma,
                     const std::vector<double>& thresholds);
/// Same, starting from an already quantized message pair.
RateTable rate_table(const DistributionPair& message_pair, const std::vector<double>& thresholds);

/// Open interval for t_k given a table holding at least levels 1..k-1.
Interval feasible_threshold_interval(const RateTable& partial, std::size_t k);
/// Level-1 interval (-D(P0||P1), D(P1||P0)).
Interval feasible_threshold_interval(const DistributionPair& message_pair);

/// Cap on the numeric disagreement between the closed-form recursion and the
/// transform of the piecewise log-mgf.
inline constexpr double kRateCrossCheckTolerance = 1e-8;

enum class BoundKind { LocalTypeI, LocalTypeII, RootTypeI, RootTypeII };
const char* bound_kind_name(BoundKind kind);

struct BoundRow {
  NodeId node;
  std::size_t level;
  std::size_t leaves;
  std::size_t predecessors;
  BoundKind kind;
  /// Bound on (1/l(v)) log of the error probability.
  double value;
  bool informative;
};

/// Per-node local bounds -rate_{j,k} + p(v)/l(v) - 1 for every relay and the
/// root, plus root bounds -rate_{j,h} + h/n_floor when every member of B has
/// at least n_floor leaves.
std::vector<BoundRow> chernoff_bound_report(const Tree& tree, const RateTable& table,
                                            std::optional<std::size_t> n_floor);

std::string bound_report_csv(const std::vector<BoundRow>& rows);

}  // namespace treedet
