#include "treedet/exponent_fit.hpp"

#include <cmath>

#include "treedet/error.hpp"
#include "treedet/evaluate.hpp"
#include "treedet/numeric.hpp"
#include "treedet/parallel.hpp"
#include "treedet/strategy.hpp"

namespace treedet {

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw InvalidParams("need at least two points to fit");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidParams("regressor has no spread");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    sse += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return f;
}

namespace {

Strategy strategy_for(const Tree& tree, const StrategyRecipe& recipe, const DistributionPair& pair) {
  if (recipe.kind == StrategyRecipe::Kind::Simple) {
    const auto family = recipe.leaf_family.empty() ? all_binary_quantizers(pair.alphabet()) : recipe.leaf_family;
    return simple_strategy(tree, pair, family, recipe.epsilon).strategy.with_llr_step(recipe.llr_step);
  }
  if (!recipe.gamma) throw InvalidParams("threshold recipe needs a leaf map");
  const Tree uni = uniformize(tree).tree;
  return build_relay_strategy(uni, pair, *recipe.gamma, recipe.thresholds).with_llr_step(recipe.llr_step);
}

}  // namespace

ExponentFit empirical_exponent(const TreeFamily& family, const StrategyRecipe& recipe,
                               const DistributionPair& pair, const std::vector<std::size_t>& grid,
                               double alpha, bool per_node) {
  if (grid.size() < 2) throw InvalidParams("grid needs at least two sizes");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw InvalidParams("grid must be increasing");
  }
  ExponentFit out;
  out.per_node = per_node;
  out.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Tree tree = family.at(grid[i]);
    const Strategy s = strategy_for(tree, recipe, pair);
    const MessageLaw law = root_sum_law(s, pair);
    const double l = static_cast<double>(s.active_leaves(0));
    const auto cal = calibrate_threshold(law, l, alpha);
    FitPoint p{};
    p.size = grid[i];
    p.n = tree.size();
    p.leaves = tree.leaf_total();
    p.alpha = alpha;
    p.root_threshold = cal.threshold;
    p.type_I = prob_from_log(law.log_upper_tail(Hypothesis::H0, cal.threshold, l));
    p.log_type_II = law.log_lower_tail(Hypothesis::H1, cal.threshold, l);
    p.type_II = prob_from_log(p.log_type_II);
    p.normalized_log_beta = p.log_type_II / static_cast<double>(per_node ? p.n : p.leaves);
    out.points[i] = p;
  });
  std::vector<double> xs, ys;
  for (const auto& p : out.points) {
    xs.push_back(static_cast<double>(per_node ? p.n : p.leaves));
    ys.push_back(p.log_type_II);
  }
  out.fit = least_squares(xs, ys);
  out.span_ok = xs.back() >= 8.0 * xs.front();
  return out;
}

}  // namespace treedet
