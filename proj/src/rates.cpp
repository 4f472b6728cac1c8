#include "treedet/rates.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "treedet/error.hpp"
#include "treedet/numeric.hpp"

namespace treedet {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

InfeasibleThreshold::InfeasibleThreshold(std::size_t level, double threshold, double lo, double hi)
    : InfeasibleError("threshold " + fmt(threshold) + " at level " + std::to_string(level) +
                      " lies outside (" + fmt(lo) + ", " + fmt(hi) + ")"),
      level_(level),
      threshold_(threshold),
      lo_(lo),
      hi_(hi) {}

double log_mgf(const DistributionPair& pair, Hypothesis j, double lambda) {
  std::vector<double> terms;
  terms.reserve(pair.size());
  for (std::size_t i = 0; i < pair.size(); ++i) {
    const double w = pair.prob(j, i);
    if (w > 0.0) terms.push_back(std::log(w) + lambda * log_likelihood_ratio(pair, i));
  }
  return log_sum_exp(terms);
}

Transform fenchel_legendre(const std::function<double(double)>& fn, double t, Interval domain) {
  auto objective = [&](double l) { return l * t - fn(l); };
  double lo = domain.lo, hi = domain.hi;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (objective(a) < objective(b)) {
      lo = a;
    } else {
      hi = b;
    }
  }
  Transform best{objective(0.5 * (lo + hi)), 0.5 * (lo + hi)};
  // The maximizer may sit on the boundary of the domain.
  for (double edge : {domain.lo, domain.hi}) {
    const double v = objective(edge);
    if (v > best.value) best = {v, edge};
  }
  return best;
}

Interval rate_domain(Hypothesis j) {
  return j == Hypothesis::H1 ? Interval{-1.0, 0.0} : Interval{0.0, 1.0};
}

double piecewise_log_mgf(double rate0, double rate1, Hypothesis j, double lambda) {
  const double jj = j == Hypothesis::H1 ? 1.0 : 0.0;
  return std::max(-rate1 * (jj + lambda), rate0 * (jj - 1.0 + lambda));
}

Interval feasible_threshold_interval(const DistributionPair& message_pair) {
  return {-kl_divergence(message_pair, Direction::ZeroOne), kl_divergence(message_pair, Direction::OneZero)};
}

Interval feasible_threshold_interval(const RateTable& partial, std::size_t k) {
  if (k == 1) return {-partial.d01, partial.d10};
  const auto& prev = partial.at(k - 1);
  return {-prev.rate1, prev.rate0};
}

RateTable rate_table(const DistributionPair& pair, const TransmissionFunction& gamma,
                     const std::vector<double>& thresholds) {
  return rate_table(induced_pair(pair, gamma), thresholds);
}

RateTable rate_table(const DistributionPair& message_pair, const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw InvalidParams("at least one level threshold is required");
  RateTable table{message_pair, kl_divergence(message_pair, Direction::ZeroOne),
                  kl_divergence(message_pair, Direction::OneZero), thresholds, {}};
  for (std::size_t k = 1; k <= thresholds.size(); ++k) {
    const double t = thresholds[k - 1];
    const Interval iv = feasible_threshold_interval(table, k);
    if (!iv.contains_open(t)) throw InfeasibleThreshold(k, t, iv.lo, iv.hi);

    LevelRates lr{k, t, 0, 0, 0, 0, 0, 0};
    std::function<double(double)> f0, f1;
    if (k == 1) {
      f0 = [&](double l) { return log_mgf(message_pair, Hypothesis::H0, l); };
      f1 = [&](double l) { return log_mgf(message_pair, Hypothesis::H1, l); };
    } else {
      const double a0 = table.at(k - 1).rate0;
      const double a1 = table.at(k - 1).rate1;
      f0 = [=](double l) { return piecewise_log_mgf(a0, a1, Hypothesis::H0, l); };
      f1 = [=](double l) { return piecewise_log_mgf(a0, a1, Hypothesis::H1, l); };
    }
    const Transform n0 = fenchel_legendre(f0, t, rate_domain(Hypothesis::H0));
    const Transform n1 = fenchel_legendre(f1, t, rate_domain(Hypothesis::H1));
    lr.numeric0 = n0.value;
    lr.numeric1 = n1.value;
    lr.argmax0 = n0.argmax;
    lr.argmax1 = n1.argmax;
    if (k == 1) {
      lr.rate0 = n0.value;
      lr.rate1 = n1.value;
    } else {
      const double b = table.at(k - 1).rate0;
      const double a = table.at(k - 1).rate1;
      lr.rate1 = a * (b - t) / (a + b);
      lr.rate0 = b * (a + t) / (a + b);
      if (std::abs(lr.rate0 - lr.numeric0) > kRateCrossCheckTolerance ||
          std::abs(lr.rate1 - lr.numeric1) > kRateCrossCheckTolerance) {
        throw std::logic_error("closed-form rates disagree with the numeric transform at level " +
                               std::to_string(k));
      }
    }
    table.levels.push_back(lr);
  }
  return table;
}

const char* bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::LocalTypeI: return "local_type_I";
    case BoundKind::LocalTypeII: return "local_type_II";
    case BoundKind::RootTypeI: return "root_type_I";
    case BoundKind::RootTypeII: return "root_type_II";
  }
  return "?";
}

std::vector<BoundRow> chernoff_bound_report(const Tree& tree, const RateTable& table,
                                            std::optional<std::size_t> n_floor) {
  if (!tree.is_uniform()) throw NotUniform("bounds need a uniform tree");
  if (tree.height() != table.height()) throw InvalidParams("rate table height differs from tree height");
  std::vector<BoundRow> rows;
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    const std::size_t k = tree.level(v);
    const double l = static_cast<double>(tree.leaf_count(v));
    const double slack = static_cast<double>(tree.predecessor_count(v)) / l - 1.0;
    for (auto [kind, rate] : {std::pair{BoundKind::LocalTypeII, table.at(k).rate1},
                              std::pair{BoundKind::LocalTypeI, table.at(k).rate0}}) {
      const double value = -rate + slack;
      rows.push_back({v, k, tree.leaf_count(v), tree.predecessor_count(v), kind, value, value < 0.0});
    }
  }
  bool floor_ok = n_floor.has_value() && *n_floor > 0;
  if (floor_ok) {
    for (NodeId v : tree.set_b()) floor_ok = floor_ok && tree.leaf_count(v) >= *n_floor;
  }
  if (floor_ok) {
    const std::size_t h = tree.height();
    const double extra = static_cast<double>(h) / static_cast<double>(*n_floor);
    for (auto [kind, rate] : {std::pair{BoundKind::RootTypeII, table.at(h).rate1},
                              std::pair{BoundKind::RootTypeI, table.at(h).rate0}}) {
      const double value = -rate + extra;
      rows.push_back({tree.root(), h, tree.leaf_total(), tree.predecessor_count(0), kind, value, value < 0.0});
    }
  }
  return rows;
}

std::string bound_report_csv(const std::vector<BoundRow>& rows) {
  std::ostringstream os;
  os << "node_id,level,l(v),p(v),bound_type,bound_value\n";
  for (const auto& r : rows) {
    os << r.node << ',' << r.level << ',' << r.leaves << ',' << r.predecessors << ','
       << bound_kind_name(r.kind) << ',' << fmt(r.value) << '\n';
  }
  return os.str();
}

}  // namespace treedet
