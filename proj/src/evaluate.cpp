#include "treedet/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "treedet/channels.hpp"
#include "treedet/error.hpp"
#include "treedet/numeric.hpp"

namespace treedet {

namespace {

double threshold_for(const Strategy& s, NodeId v) {
  return v == s.tree().root() ? s.root_threshold() : s.threshold(s.tree().level(v));
}

std::array<double, 2> bit_values(const MessageLaw& sum, double t, double leaf_count) {
  const double z0 = sum.log_lower_tail(Hypothesis::H0, t, leaf_count);
  const double z1 = sum.log_lower_tail(Hypothesis::H1, t, leaf_count);
  const double o0 = sum.log_upper_tail(Hypothesis::H0, t, leaf_count);
  const double o1 = sum.log_upper_tail(Hypothesis::H1, t, leaf_count);
  auto llr = [](double a, double b) { return (a == kNegInf || b == kNegInf) ? 0.0 : b - a; };
  return {llr(z0, z1), llr(o0, o1)};
}

}  // namespace

MessageLaw relay_output_law(const MessageLaw& sum, double t, double leaf_count) {
  const double z0 = sum.log_lower_tail(Hypothesis::H0, t, leaf_count);
  const double z1 = sum.log_lower_tail(Hypothesis::H1, t, leaf_count);
  const double o0 = sum.log_upper_tail(Hypothesis::H0, t, leaf_count);
  const double o1 = sum.log_upper_tail(Hypothesis::H1, t, leaf_count);
  const auto v = bit_values(sum, t, leaf_count);
  return MessageLaw::from_atoms({Atom{v[0], z0, z1}, Atom{v[1], o0, o1}});
}

NodeEvaluation evaluate_messages(const Strategy& strategy, const DistributionPair& pair, std::size_t cap) {
  const Tree& tree = strategy.tree();
  const double step = strategy.llr_step();
  const auto message = induced_pair(pair, strategy.leaf_rule());
  const MessageLaw leaf_law = MessageLaw::llr_of(message);

  NodeEvaluation ev;
  ev.signature.assign(tree.size(), 0);
  const auto& out_alphabet = strategy.leaf_rule().output();
  for (std::size_t y = 0; y < out_alphabet.size(); ++y) {
    const auto idx = message.alphabet().find(out_alphabet[y]);
    ev.leaf_llr.push_back(idx ? log_likelihood_ratio(message, *idx) : 0.0);
  }

  std::map<std::vector<std::size_t>, std::size_t> ids;
  std::vector<std::size_t> child_sigs;
  for (NodeId v : tree.bottom_up_order()) {
    const bool idle = strategy.idle(v);
    std::vector<std::size_t> key{tree.level(v), idle ? 1U : 0U};
    if (!idle && !tree.is_leaf(v)) {
      child_sigs.clear();
      for (NodeId c : tree.children(v)) {
        if (!strategy.idle(c)) child_sigs.push_back(ev.signature[c]);
      }
      std::sort(child_sigs.begin(), child_sigs.end());
      for (std::size_t i = 0; i < child_sigs.size();) {
        std::size_t j = i;
        while (j < child_sigs.size() && child_sigs[j] == child_sigs[i]) ++j;
        key.push_back(child_sigs[i]);
        key.push_back(j - i);
        i = j;
      }
    }
    const auto [it, inserted] = ids.try_emplace(std::move(key), ev.out_laws.size());
    ev.signature[v] = it->second;
    if (!inserted) continue;

    if (idle) {
      ev.sum_laws.emplace_back();
      ev.out_laws.push_back(MessageLaw::point(0.0));
      ev.bit_llr.push_back({0.0, 0.0});
      continue;
    }
    if (tree.is_leaf(v)) {
      ev.sum_laws.emplace_back();
      ev.out_laws.push_back(leaf_law);
      ev.bit_llr.push_back({0.0, 0.0});
      continue;
    }
    const auto& k = it->first;
    MessageLaw sum = MessageLaw::point(0.0);
    for (std::size_t i = 2; i < k.size(); i += 2) {
      sum = MessageLaw::convolve(sum, ev.out_laws[k[i]].power(k[i + 1], step, cap), step, cap);
    }
    const double t = threshold_for(strategy, v);
    const double l = static_cast<double>(strategy.active_leaves(v));
    if (v == tree.root()) {
      ev.out_laws.emplace_back();
      ev.bit_llr.push_back({0.0, 0.0});
    } else {
      ev.out_laws.push_back(relay_output_law(sum, t, l));
      ev.bit_llr.push_back(bit_values(sum, t, l));
    }
    ev.sum_laws.push_back(std::move(sum));
  }
  return ev;
}

MessageLaw root_sum_law(const Strategy& strategy, const DistributionPair& pair) {
  auto ev = evaluate_messages(strategy, pair);
  return std::move(ev.sum_laws[ev.signature[strategy.tree().root()]]);
}

ErrorEstimate exact_error_probs(const Strategy& strategy, const DistributionPair& pair) {
  const MessageLaw law = root_sum_law(strategy, pair);
  const double t = strategy.root_threshold();
  const double l = static_cast<double>(strategy.active_leaves(0));
  ErrorEstimate e;
  e.method = Method::Exact;
  e.log_type_I = law.log_upper_tail(Hypothesis::H0, t, l);
  e.log_type_II = law.log_lower_tail(Hypothesis::H1, t, l);
  e.type_I = prob_from_log(e.log_type_I);
  e.type_II = prob_from_log(e.log_type_II);
  return e;
}

Strategy calibrate_root_exact(const Strategy& strategy, const DistributionPair& pair, double alpha) {
  return np_calibrate_root(strategy, alpha, [&](const Strategy& s) { return root_sum_law(s, pair); });
}

std::vector<LocalErrors> local_error_probs(const Strategy& strategy, const DistributionPair& pair) {
  const auto ev = evaluate_messages(strategy, pair);
  const Tree& tree = strategy.tree();
  std::vector<LocalErrors> out;
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v) || strategy.idle(v)) continue;
    const auto& law = ev.sum_laws[ev.signature[v]];
    const double t = threshold_for(strategy, v);
    const double l = static_cast<double>(strategy.active_leaves(v));
    out.push_back({v, tree.level(v), law.log_lower_tail(Hypothesis::H1, t, l),
                   law.log_upper_tail(Hypothesis::H0, t, l)});
  }
  return out;
}

ChebyshevCheck chebyshev_variance_check(const Strategy& strategy, const DistributionPair& pair,
                                        std::size_t small_threshold, double eta) {
  const Tree& tree = strategy.tree();
  if (tree.height() != 2) throw InvalidParams("the variance check needs a height-2 tree");
  if (!(eta > 0.0)) throw InvalidParams("eta must be positive");
  for (NodeId c : tree.children(0)) {
    if (!tree.in_b(c) || tree.leaf_count(c) > small_threshold) {
      throw InvalidParams("every relay must be a small member of B");
    }
  }
  const MessageLaw law = root_sum_law(strategy, pair);
  const double l = static_cast<double>(strategy.active_leaves(0));
  const double center = law.mean(Hypothesis::H0) / l;
  double lhs = 0.0;
  for (const auto& a : law.atoms()) {
    if (std::abs(a.value / l - center) > eta) lhs += prob_from_log(a.log_p0);
  }
  const double a = validate_assumptions(pair, {}).bound_constant;
  const double rhs = a * (1.0 + static_cast<double>(small_threshold)) / (eta * eta * l);
  return {center, lhs, rhs, a, lhs <= rhs};
}

}  // namespace treedet
