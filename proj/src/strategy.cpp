#include "treedet/strategy.hpp"

#include <cmath>

#include "treedet/error.hpp"
#include "treedet/numeric.hpp"
#include "treedet/rates.hpp"

namespace treedet {

Strategy::Strategy(Tree tree, TransmissionFunction leaf_rule, std::vector<double> thresholds)
    : tree_(std::make_shared<const Tree>(std::move(tree))),
      leaf_rule_(std::move(leaf_rule)),
      thresholds_(std::move(thresholds)) {
  if (!tree_->is_uniform()) throw NotUniform("relay strategies need a uniform tree; uniformize first");
  if (leaf_rule_.arity() != 0) throw InvalidParams("leaf rule must have arity 0");
  if (thresholds_.size() != tree_->height()) {
    throw InvalidParams("expected " + std::to_string(tree_->height()) + " level thresholds, got " +
                        std::to_string(thresholds_.size()));
  }
  for (double t : thresholds_) {
    if (!std::isfinite(t)) throw InvalidParams("thresholds must be finite");
  }
  marked_.assign(tree_->size(), false);
  refresh_activity();
}

void Strategy::refresh_activity() {
  const Tree& t = *tree_;
  idle_.assign(t.size(), false);
  active_leaves_.assign(t.size(), 0);
  for (NodeId v : t.bottom_up_order()) {
    if (marked_[v]) {
      idle_[v] = true;
      continue;
    }
    if (t.is_leaf(v)) {
      active_leaves_[v] = 1;
      continue;
    }
    for (NodeId c : t.children(v)) active_leaves_[v] += active_leaves_[c];
    idle_[v] = active_leaves_[v] == 0;
  }
  if (idle_[0]) throw InvalidParams("strategy has no active leaf");
}

Strategy Strategy::with_root_threshold(double t) const {
  if (!std::isfinite(t)) throw InvalidParams("root threshold must be finite");
  Strategy s = *this;
  s.root_override_ = t;
  return s;
}

Strategy Strategy::with_llr_step(double step) const {
  if (!(step >= 0.0) || !std::isfinite(step)) throw InvalidParams("llr_step must be a finite value >= 0");
  Strategy s = *this;
  s.llr_step_ = step;
  return s;
}

Strategy Strategy::with_idle(std::span<const NodeId> nodes) const {
  Strategy s = *this;
  for (NodeId v : nodes) {
    if (v >= s.marked_.size()) throw InvalidParams("idle node out of range");
    s.marked_[v] = true;
  }
  s.refresh_activity();
  return s;
}

Strategy build_relay_strategy(const Tree& tree, const DistributionPair& pair,
                              const TransmissionFunction& gamma, const std::vector<double>& thresholds) {
  if (!tree.is_uniform()) throw NotUniform("relay strategies need a uniform tree; uniformize first");
  rate_table(pair, gamma, thresholds);
  return Strategy(tree, gamma, thresholds);
}

SimpleStrategy simple_strategy(const Tree& tree, const DistributionPair& pair,
                               std::span<const TransmissionFunction> leaf_family, double eps) {
  if (!(eps > 0.0)) throw InvalidParams("epsilon must be positive");
  const auto best = parallel_exponent(pair, leaf_family);
  if (eps >= -best.g_p_star) {
    throw EpsilonTooLarge("epsilon must be below " + std::to_string(-best.g_p_star));
  }
  const auto& gamma = leaf_family[best.index];
  const double t = best.g_p_star + eps / 2.0;
  auto uni = uniformize(tree);
  std::vector<double> thresholds(uni.tree.height(), t);
  Strategy s = build_relay_strategy(uni.tree, pair, gamma, thresholds);
  return {std::move(s), best.index, t, best.g_p_star, std::move(uni.old_to_new)};
}

RootCalibration calibrate_threshold(const MessageLaw& root_sum, double leaf_count, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParams("alpha must lie in (0, 1)");
  const auto atoms = root_sum.atoms();
  if (atoms.empty()) throw Unachievable("empty root law");
  const double log_alpha = std::log(alpha);
  // tail[i] = log P0(atom index > i)
  std::vector<double> tail(atoms.size(), kNegInf);
  for (std::size_t i = atoms.size() - 1; i-- > 0;) tail[i] = log_add_exp(tail[i + 1], atoms[i + 1].log_p0);
  double head1 = kNegInf;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    head1 = log_add_exp(head1, atoms[i].log_p1);
    if (tail[i] <= log_alpha) return {atoms[i].value / leaf_count, tail[i], head1};
  }
  throw Unachievable("no root threshold meets the level");
}

Strategy np_calibrate_root(const Strategy& strategy, double alpha, const RootLawEvaluator& evaluator) {
  const MessageLaw law = evaluator(strategy);
  const auto cal = calibrate_threshold(law, static_cast<double>(strategy.active_leaves(0)), alpha);
  return strategy.with_root_threshold(cal.threshold);
}

}  // namespace treedet
