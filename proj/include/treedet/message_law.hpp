#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "treedet/hypothesis.hpp"

namespace treedet {

/// One value of a log-likelihood ratio (or a sum of them) with its log mass
/// under each hypothesis.
struct Atom {
  double value;
  double log_p0;
  double log_p1;
};

/// Finite joint description of a real statistic under H0 and H1.
///
/// Atoms are sorted by value and merged when values agree to a relative 1e-12.
/// Masses live in the log domain so that tails far below double range survive.
class MessageLaw {
 public:
  static constexpr double kMergeTolerance = 1e-12;
  static constexpr std::size_t kDefaultCap = 10'000'000;

  MessageLaw() = default;

  /// Point mass at `value` under both hypotheses.
  static MessageLaw point(double value);
  /// Sorts and merges; atoms with zero mass under both hypotheses are dropped.
  static MessageLaw from_atoms(std::vector<Atom> atoms);
  /// Law of log(p1/p0)(Y) for Y drawn from the pair.
  static MessageLaw llr_of(const DistributionPair& pair);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  /// Law of the sum of independent copies. `step` > 0 snaps every sum to the
  /// lattice step * Z. Throws StateSpaceTooLarge past `cap` atoms.
  static MessageLaw convolve(const MessageLaw& a, const MessageLaw& b, double step = 0.0,
                             std::size_t cap = kDefaultCap);
  /// Law of the sum of `count` independent copies.
  MessageLaw power(std::size_t count, double step = 0.0, std::size_t cap = kDefaultCap) const;
  /// Values snapped to step * round(value / step).
  MessageLaw quantized(double step) const;

  /// log P_j(value > x) and log P_j(value <= x) using the shared tie rule
  /// against a per-leaf threshold t and leaf count.
  double log_upper_tail(Hypothesis j, double t, double leaf_count) const;
  double log_lower_tail(Hypothesis j, double t, double leaf_count) const;

  double log_total(Hypothesis j) const;
  double mean(Hypothesis j) const;

 private:
  explicit MessageLaw(std::vector<Atom> sorted) : atoms_(std::move(sorted)) {}
  MessageLaw power_snapped(std::size_t count, double step, std::size_t cap) const;
  void renormalize();

  std::vector<Atom> atoms_;
};

}  // namespace treedet
