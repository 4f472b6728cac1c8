#include <array>
#include <cmath>
#include <mutex>

#include "treedet/channels.hpp"
#include "treedet/error.hpp"
#include "treedet/evaluate.hpp"
#include "treedet/parallel.hpp"
#include "treedet/random.hpp"

namespace treedet {

namespace {

double snap(double v, double step) { return step > 0.0 ? step * std::round(v / step) : v; }

struct Plan {
  std::vector<NodeId> order;
  std::vector<std::optional<NodeId>> parent;
  std::vector<char> kind;  // 0 idle, 1 leaf, 2 relay, 3 root
  std::vector<double> t;
  std::vector<double> leaves;
  std::vector<std::array<double, 2>> bit;
  std::vector<double> leaf_llr;
  std::array<std::vector<double>, 2> cdf;
  std::vector<std::size_t> leaf_map;
};

Plan make_plan(const Strategy& s, const DistributionPair& pair) {
  const Tree& tree = s.tree();
  const auto ev = evaluate_messages(s, pair);
  const double step = s.llr_step();
  Plan p;
  p.order = tree.bottom_up_order();
  p.parent = tree.parents();
  p.kind.resize(tree.size());
  p.t.resize(tree.size());
  p.leaves.resize(tree.size());
  p.bit.resize(tree.size());
  for (NodeId v = 0; v < tree.size(); ++v) {
    p.kind[v] = s.idle(v) ? 0 : tree.is_leaf(v) ? 1 : v == tree.root() ? 3 : 2;
    p.leaves[v] = static_cast<double>(s.active_leaves(v));
    if (p.kind[v] == 2) p.t[v] = s.threshold(tree.level(v));
    if (p.kind[v] == 3) p.t[v] = s.root_threshold();
    const auto& b = ev.bit_llr[ev.signature[v]];
    p.bit[v] = {snap(b[0], step), snap(b[1], step)};
  }
  for (double l : ev.leaf_llr) p.leaf_llr.push_back(snap(l, step));
  for (int j = 0; j < 2; ++j) {
    double acc = 0.0;
    for (double w : pair.law(static_cast<Hypothesis>(j))) {
      acc += w;
      p.cdf[j].push_back(acc);
    }
  }
  p.leaf_map = s.leaf_rule().table();
  return p;
}

std::size_t sample(const std::vector<double>& cdf, double u) {
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (u < cdf[i]) return i;
  }
  // u above a total that rounded below 1: take the last charged symbol.
  std::size_t i = cdf.size() - 1;
  while (i > 0 && cdf[i] == cdf[i - 1]) --i;
  return i;
}

/// Root decision for one trial.
int run_trial(const Plan& p, int j, std::uint64_t seed, std::uint64_t trial, std::vector<double>& sum,
              std::vector<double>& sent) {
  std::fill(sum.begin(), sum.end(), 0.0);
  int decision = 0;
  for (NodeId v : p.order) {
    switch (p.kind[v]) {
      case 0:
        continue;
      case 1: {
        const std::size_t x = sample(p.cdf[j], counter_uniform(seed, static_cast<std::uint64_t>(j), trial, v));
        sent[v] = p.leaf_llr[p.leaf_map[x]];
        break;
      }
      case 2:
        sent[v] = p.bit[v][llrq_exceeds(sum[v], p.t[v], p.leaves[v]) ? 1 : 0];
        break;
      default:
        decision = llrq_exceeds(sum[v], p.t[v], p.leaves[v]) ? 1 : 0;
        continue;
    }
    sum[*p.parent[v]] += sent[v];
  }
  return decision;
}

}  // namespace

ErrorEstimate monte_carlo_error(const Strategy& strategy, const DistributionPair& pair, std::size_t trials,
                                std::uint64_t seed) {
  if (trials < 1) throw InvalidParams("trials must be at least 1");
  const Plan plan = make_plan(strategy, pair);
  const std::size_t n = strategy.tree().size();
  std::mutex guard;
  std::array<std::size_t, 2> errors{0, 0};
  parallel_blocks(trials, [&](std::size_t b, std::size_t e) {
    std::vector<double> sum(n), sent(n);
    std::array<std::size_t, 2> local{0, 0};
    for (std::size_t i = b; i < e; ++i) {
      if (run_trial(plan, 0, seed, i, sum, sent) == 1) ++local[0];
      if (run_trial(plan, 1, seed, i, sum, sent) == 0) ++local[1];
    }
    std::lock_guard<std::mutex> lock(guard);
    errors[0] += local[0];
    errors[1] += local[1];
  });
  ErrorEstimate est;
  est.method = Method::MonteCarlo;
  est.trials = trials;
  const double nt = static_cast<double>(trials);
  est.type_I = static_cast<double>(errors[0]) / nt;
  est.type_II = static_cast<double>(errors[1]) / nt;
  est.log_type_I = std::log(est.type_I);
  est.log_type_II = std::log(est.type_II);
  est.std_error_I = std::sqrt(est.type_I * (1.0 - est.type_I) / nt);
  est.std_error_II = std::sqrt(est.type_II * (1.0 - est.type_II) / nt);
  return est;
}

}  // namespace treedet
