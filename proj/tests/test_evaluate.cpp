#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "treedet/channels.hpp"
#include "treedet/error.hpp"
#include "treedet/evaluate.hpp"
#include "treedet/experiments.hpp"
#include "treedet/families.hpp"
#include "treedet/rates.hpp"
#include "treedet/strategy.hpp"

using namespace treedet;

namespace {

DistributionPair bern75() { return DistributionPair::bernoulli(0.25, 0.75); }
TransmissionFunction ident() { return TransmissionFunction::identity(Alphabet::binary()); }

oracle::BruteForce brute_for(const Strategy& s, const DistributionPair& pair) {
  oracle::BruteForce bf;
  const Tree& t = s.tree();
  bf.parent.assign(t.size(), -1);
  for (NodeId v = 1; v < t.size(); ++v) bf.parent[v] = static_cast<int>(*t.parent(v));
  bf.p0.assign(pair.p0().begin(), pair.p0().end());
  bf.p1.assign(pair.p1().begin(), pair.p1().end());
  for (std::size_t x : s.leaf_rule().table()) bf.leaf_map.push_back(static_cast<int>(x));
  bf.level_threshold = s.thresholds();
  bf.root_threshold = s.root_threshold();
  bf.run();
  return bf;
}

// random uniform tree with at most `max_leaves` leaves
Tree small_uniform_tree(std::mt19937_64& rng, int max_height, std::size_t max_leaves) {
  while (true) {
    const Tree t = uniformize(Tree(oracle::random_parents(rng, max_height, 3, static_cast<int>(max_leaves)))).tree;
    if (t.leaf_total() <= max_leaves) return t;
  }
}

}  // namespace

TEST(ExactErrors, ParallelTwoLeaves) {
  const Strategy s = build_relay_strategy(parallel_tree(2), bern75(), ident(), {0.0});
  const auto e = exact_error_probs(s, bern75());
  EXPECT_NEAR(e.type_I, 0.0625, 1e-15);
  EXPECT_NEAR(e.type_II, 0.4375, 1e-15);
  EXPECT_EQ(e.method, Method::Exact);
  EXPECT_NEAR(std::exp(e.log_type_II), e.type_II, 1e-15);
}

TEST(ExactErrors, TwoRelayOfSingleLeavesMatchesParallel) {
  const Strategy s(two_relay_tree(1), ident(), {0.0, 0.0});
  const auto e = exact_error_probs(s, bern75());
  EXPECT_NEAR(e.type_I, 0.0625, 1e-15);
  EXPECT_NEAR(e.type_II, 0.4375, 1e-15);
}

TEST(ExactErrors, IdenticalHypothesesGiveComplementaryErrors) {
  const auto same = DistributionPair::bernoulli(0.3, 0.3);
  for (const Tree& t : {parallel_tree(5), two_relay_tree(3), increasing_leaves_tree(3)}) {
    const Strategy s(t, ident(), std::vector<double>(t.height(), -0.1));
    const auto e = exact_error_probs(s, same);
    EXPECT_NEAR(e.type_I, 1.0 - e.type_II, 1e-12);
  }
}

TEST(ExactErrors, RelayBitLlrsAreConsistent) {
  const Strategy s(two_relay_tree(4), ident(), {-0.2, 0.0});
  const auto ev = evaluate_messages(s, bern75());
  const auto sum = ev.sum_laws[ev.signature[1]];
  const double p0_one = std::exp(sum.log_upper_tail(Hypothesis::H0, -0.2, 4));
  const double p1_one = std::exp(sum.log_upper_tail(Hypothesis::H1, -0.2, 4));
  EXPECT_NEAR(ev.bit_llr[1][1], std::log(p1_one / p0_one), 1e-12);
  EXPECT_NEAR(ev.bit_llr[1][0], std::log((1 - p1_one) / (1 - p0_one)), 1e-12);
}

TEST(ExactErrors, StateSpaceCap) {
  const DistributionPair p(Alphabet::range(3), {0.2, 0.3, 0.5}, {0.5, 0.3, 0.2});
  const Strategy s(parallel_tree(5000), TransmissionFunction::identity(Alphabet::range(3)), {0.0});
  EXPECT_THROW(evaluate_messages(s, p, 1000), StateSpaceTooLarge);
}

TEST(MonteCarlo, ParallelAccuracyAndDeterminism) {
  const Strategy s = build_relay_strategy(parallel_tree(2), bern75(), ident(), {0.0});
  const auto a = monte_carlo_error(s, bern75(), 1'000'000, 7);
  EXPECT_LE(std::abs(a.type_I - 0.0625), 3 * a.std_error_I);
  EXPECT_LE(std::abs(a.type_II - 0.4375), 3 * a.std_error_II);
  EXPECT_EQ(a.method, Method::MonteCarlo);
  const auto b = monte_carlo_error(s, bern75(), 1'000'000, 7);
  EXPECT_EQ(a.type_I, b.type_I);
  EXPECT_EQ(a.type_II, b.type_II);
  const auto one = monte_carlo_error(s, bern75(), 1, 3);
  EXPECT_TRUE(one.type_I == 0.0 || one.type_I == 1.0);
  EXPECT_TRUE(one.type_II == 0.0 || one.type_II == 1.0);
  EXPECT_THROW(monte_carlo_error(s, bern75(), 0, 3), InvalidParams);
}

TEST(Chebyshev, OrTreeExamples) {
  const auto pair = bern75();
  const double t1 = gate_threshold(pair, or_gate());
  double prev_lhs = 2.0, prev_rhs = 0.0;
  for (std::size_t m : {50, 100, 200}) {
    const Strategy s(wide_uniform_tree(2, m), ident(), {t1, 0.0});
    const auto c = chebyshev_variance_check(s, pair, 2, 0.3);
    EXPECT_TRUE(c.holds);
    EXPECT_LE(c.lhs, c.rhs);
    EXPECT_NEAR(c.bound_constant, std::pow(std::log(3.0), 2) + 2, 1e-12);
    EXPECT_LE(c.lhs, prev_lhs);
    if (prev_rhs > 0.0) EXPECT_NEAR(c.rhs, prev_rhs / 2, 1e-12);
    prev_lhs = c.lhs;
    prev_rhs = c.rhs;
  }
  const Strategy s(wide_uniform_tree(2, 50), ident(), {t1, 0.0});
  EXPECT_EQ(chebyshev_variance_check(s, pair, 2, 1e6).lhs, 0.0);
  EXPECT_THROW(chebyshev_variance_check(s, pair, 1, 0.3), InvalidParams);
}

// properties

TEST(EvaluateProperties, ExactMatchesBruteForce) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int trial = 0; trial < 40; ++trial) {
    const bool ternary = trial % 2 == 1;
    const std::size_t k = ternary ? 3 : 2;
    const DistributionPair pair(Alphabet::range(k), oracle::random_law(rng, k), oracle::random_law(rng, k));
    const Tree t = small_uniform_tree(rng, 1 + trial % 3, ternary ? 7 : 11);
    std::vector<double> th(t.height());
    for (auto& x : th) x = u(rng);
    const Strategy s(t, TransmissionFunction::identity(pair.alphabet()), th);
    const auto e = exact_error_probs(s, pair);
    const auto bf = brute_for(s, pair);
    EXPECT_NEAR(e.type_I, bf.type_I, 1e-12) << "trial " << trial;
    EXPECT_NEAR(e.type_II, bf.type_II, 1e-12) << "trial " << trial;
  }
}

TEST(EvaluateProperties, MessageLawsNormalized) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    const DistributionPair pair(Alphabet::range(3), oracle::random_law(rng, 3), oracle::random_law(rng, 3));
    const Tree t = small_uniform_tree(rng, 3, 200);
    const Strategy s(t, TransmissionFunction::identity(pair.alphabet()), std::vector<double>(t.height(), -0.05));
    const auto ev = evaluate_messages(s, pair);
    for (NodeId v = 0; v < t.size(); ++v) {
      if (t.is_leaf(v)) continue;
      const auto& law = ev.sum_laws[ev.signature[v]];
      EXPECT_NEAR(law.log_total(Hypothesis::H0), 0.0, 1e-12);
      EXPECT_NEAR(law.log_total(Hypothesis::H1), 0.0, 1e-12);
    }
  }
}

TEST(EvaluateProperties, ChernoffBoundsHold) {
  std::mt19937_64 rng(63);
  const auto fam = all_binary_quantizers(Alphabet::binary());
  for (int trial = 0; trial < 20; ++trial) {
    const Tree t = small_uniform_tree(rng, 1 + trial % 3, 300);
    const double p = 0.6 + 0.3 * (trial % 5) / 5.0;
    const auto pair = DistributionPair::bernoulli(1 - p, p);
    const double g = parallel_exponent(pair, fam).g_p_star;
    const auto simple = simple_strategy(t, pair, fam, -0.5 * g);
    const auto& s = simple.strategy;
    const auto table = rate_table(pair, fam[simple.gamma_index], s.thresholds());
    for (const auto& le : local_error_probs(s, pair)) {
      const double l = static_cast<double>(t.leaf_count(le.node));
      const double slack = static_cast<double>(t.predecessor_count(le.node)) / l - 1.0;
      EXPECT_LE(le.log_miss / l, -table.at(le.level).rate1 + slack + 1e-9);
      EXPECT_LE(le.log_false_alarm / l, -table.at(le.level).rate0 + slack + 1e-9);
    }
  }
}

TEST(EvaluateProperties, PrunedTreeMatchesIdleNodes) {
  std::mt19937_64 rng(64);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 20; ++trial) {
    const Tree t = small_uniform_tree(rng, 2 + trial % 2, 200);
    if (t.height() < 2) continue;
    const std::size_t n_small = 2;
    const auto stats = analyze_tree(t, n_small);
    if (stats.small.empty() || stats.q >= 1.0) continue;
    const auto pruned = prune_small(t, n_small);
    const std::vector<double> th(t.height(), -0.2);
    const Strategy idle = Strategy(t, ident(), th).with_idle(stats.small);
    const Strategy direct(pruned.tree, ident(), th);
    const auto a = exact_error_probs(idle, bern75());
    const auto b = exact_error_probs(direct, bern75());
    EXPECT_NEAR(a.log_type_I, b.log_type_I, 1e-9);
    EXPECT_NEAR(a.log_type_II, b.log_type_II, 1e-9);
    const auto mc_a = monte_carlo_error(idle, bern75(), 2000, 5);
    EXPECT_LE(mc_a.type_I, 1.0);
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(EvaluateProperties, CollapsedTreeIsNoBetter) {
  // best Type II over leaf maps and a threshold grid, root calibrated to alpha
  const auto pair = bern75();
  const auto fam = all_binary_quantizers(Alphabet::binary());
  const double alpha = 0.25;
  auto best_beta = [&](const Tree& t) {
    double best = 1.0;
    const std::vector<double> grid{-0.4, -0.2, 0.0, 0.2};
    for (const auto& g : fam) {
      const auto m = induced_pair(pair, g);
      if (m.size() < 2) continue;
      std::vector<double> th(t.height(), 0.0);
      const std::size_t combos = t.height() == 1 ? 1 : grid.size();
      for (std::size_t c = 0; c < combos; ++c) {
        if (t.height() > 1) th[0] = grid[c];
        const Strategy s = calibrate_root_exact(Strategy(t, g, th), pair, alpha);
        best = std::min(best, exact_error_probs(s, pair).type_II);
      }
    }
    return best;
  };
  for (const Tree& t : {two_relay_tree(2), two_relay_tree(3), wide_uniform_tree(2, 3), increasing_leaves_tree(3)}) {
    const Tree c = collapse_leaves(t).tree;
    EXPECT_LE(best_beta(t), best_beta(c) + 1e-12);
  }
}

TEST(EvaluateProperties, MonteCarloWithinFourSigma) {
  std::mt19937_64 rng(65);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  int ok = 0, total = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const DistributionPair pair(Alphabet::range(3), oracle::random_law(rng, 3), oracle::random_law(rng, 3));
    const Tree t = small_uniform_tree(rng, 1 + trial % 3, 40);
    std::vector<double> th(t.height());
    for (auto& x : th) x = u(rng);
    const Strategy s(t, TransmissionFunction::identity(pair.alphabet()), th);
    const auto ex = exact_error_probs(s, pair);
    const auto mc = monte_carlo_error(s, pair, 20000, 1000 + trial);
    total += 2;
    ok += std::abs(mc.type_I - ex.type_I) <= 4 * std::max(mc.std_error_I, 1e-12) || (ex.type_I < 1e-9 && mc.type_I == 0);
    ok += std::abs(mc.type_II - ex.type_II) <= 4 * std::max(mc.std_error_II, 1e-12) ||
          (ex.type_II < 1e-9 && mc.type_II == 0);
  }
  EXPECT_GE(ok, total - 1);
}
