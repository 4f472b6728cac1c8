#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treedet/topology.hpp"

namespace treedet {

/// Star with `leaves` leaves.
Tree parallel_tree(std::size_t leaves);
/// Chain f <- c1 <- ... <- c_{h-1} with the remaining n - h nodes as leaves of c_{h-1}.
Tree chain_plus_leaves_tree(std::size_t height, std::size_t n);
/// Two relays with m leaves each.
Tree two_relay_tree(std::size_t m);
/// `relays` relays with `leaves_per_relay` leaves each.
Tree wide_uniform_tree(std::size_t leaves_per_relay, std::size_t relays);
/// Relays v_1..v_m where v_i has i + 1 leaves.
Tree increasing_leaves_tree(std::size_t m);

enum class FamilyKind { Parallel, ChainPlusLeaves, TwoRelay, WideUniform, IncreasingLeaves, Explicit };

const char* family_kind_name(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& name);

/// A tree sequence indexed by a structural size m.
///
/// Parallel: m leaves. ChainPlusLeaves: n = m, with param "h". TwoRelay: m
/// leaves per relay. WideUniform: exactly one of "relays" (m = leaves per
/// relay), "leaves_per_relay" (m = relays) or "relays_power" (m leaves per
/// relay, m^power relays). IncreasingLeaves: m relays. Explicit: fixed tree.
struct TreeFamily {
  FamilyKind kind = FamilyKind::Parallel;
  std::map<std::string, double> params;
  std::optional<Tree> fixed;

  /// Throws InvalidParams.
  Tree at(std::size_t m) const;
  void validate() const;
};

struct ZEstimate {
  std::vector<std::size_t> grid;
  std::vector<double> leaf_fraction;
  /// Per requested N, q_N along the grid.
  std::map<std::size_t, std::vector<double>> q;
  double z = 0.0;
  bool z_to_one = false;
  bool q_to_zero = false;
  /// z -> 1 iff every q_N -> 0 on this grid.
  bool consistent = false;
};

/// `tol` decides when a sequence counts as having reached its limit.
ZEstimate estimate_z(const TreeFamily& family, const std::vector<std::size_t>& grid,
                     const std::vector<std::size_t>& small_thresholds, double tol = 0.05);

}  // namespace treedet
