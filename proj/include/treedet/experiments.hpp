#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "treedet/exponent_fit.hpp"
#include "treedet/hypothesis.hpp"
#include "treedet/serialization.hpp"

namespace treedet {

struct Verdict {
  std::string name;
  bool pass;
  std::string detail;
};

struct ReportBundle {
  Json summary;
  /// (file name, contents)
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<Verdict> verdicts;
  bool all_pass() const;
};

/// Bernoulli observations with P0(1) = 1 - p and P1(1) = p.
DistributionPair symmetric_bernoulli(double p);

/// Per-leaf exponent -D(nu0 || nu1) / 2 of a two-leaf gate over identity leaves.
double gate_exponent(const DistributionPair& pair, const TransmissionFunction& gate);

/// Wide trees with `relays` identical relays of m leaves under the common
/// threshold t, evaluated without materializing the tree.
struct WideEvaluation {
  /// log P0(relay sends 1)
  double log_relay_false_alarm;
  /// Type I of the root that declares H0 iff every relay sends 0.
  double naive_type_I;
  /// Calibrated root on the same relays.
  double calibrated_type_I;
  double calibrated_type_II;
  double calibrated_log_type_II;
};
WideEvaluation evaluate_wide(const DistributionPair& pair, const TransmissionFunction& gamma, std::size_t m,
                             double relays, double t, double alpha);

/// LLRQ threshold for level-1 relays of two leaves reproducing `gate`, taken
/// at the midpoint of the realizing range intersected with the feasible one.
double gate_threshold(const DistributionPair& pair, const TransmissionFunction& gate);

ReportBundle reproduce_example(int id);

}  // namespace treedet
