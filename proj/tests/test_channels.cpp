#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "treedet/channels.hpp"
#include "treedet/error.hpp"
#include "treedet/hypothesis.hpp"

using namespace treedet;

namespace {

DistributionPair bern75() { return DistributionPair::bernoulli(0.25, 0.75); }

const double kLog3 = std::log(3.0);

std::vector<TransmissionFunction> all_gates() {
  return enumerate_quantizers({Alphabet::binary(), Alphabet::binary()}, Alphabet::binary(), 2);
}

}  // namespace

TEST(TransmissionFunction, MixedRadixFirstInputMostSignificant) {
  const TransmissionFunction tf(2, {Alphabet::range(2), Alphabet::range(3)}, Alphabet::binary(),
                                {0, 1, 0, 1, 0, 1});
  const std::vector<std::size_t> t{1, 2};
  EXPECT_EQ(tf.flat_index(t), 5u);
  EXPECT_EQ(tf.tuple_at(4), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(tf.apply(t), 1u);
  EXPECT_THROW(TransmissionFunction(2, {Alphabet::binary(), Alphabet::binary()}, Alphabet::binary(), {0, 1}),
               ValidationError);
  EXPECT_THROW(TransmissionFunction(0, {Alphabet::binary()}, Alphabet::binary(), {0, 2}), ValidationError);
}

TEST(InducedPair, IdentityKeepsPair) {
  const auto q = induced_pair(bern75(), TransmissionFunction::identity(Alphabet::binary()));
  EXPECT_EQ(q, bern75());
}

TEST(InducedPair, OrGateOnTwoBern75) {
  const std::vector<DistributionPair> in{bern75(), bern75()};
  const auto q = induced_pair(in, or_gate());
  ASSERT_EQ(q.size(), 2u);
  EXPECT_NEAR(q.p0()[0], 0.5625, 1e-15);
  EXPECT_NEAR(q.p1()[0], 0.0625, 1e-15);
}

TEST(InducedPair, ConstantMapDropsSilentSymbol) {
  const auto q = induced_pair(bern75(), TransmissionFunction::constant(Alphabet::binary(), Alphabet::binary(), 0));
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q.alphabet()[0], "0");
  EXPECT_DOUBLE_EQ(q.p0()[0], 1.0);
  EXPECT_DOUBLE_EQ(q.p1()[0], 1.0);
}

TEST(ApplyLlrq, Examples) {
  const std::vector<double> tie{kLog3, -kLog3};
  EXPECT_EQ(apply_llrq(0.0, tie, 2), 0);
  const std::vector<double> up{kLog3, kLog3};
  EXPECT_EQ(apply_llrq(0.0, up, 2), 1);
  const std::vector<double> three{-kLog3, -kLog3, kLog3};
  EXPECT_EQ(apply_llrq(-0.2, three, 3), 0);
}

TEST(ApplyLlrq, RoundingTieGoesToZero) {
  // 0.1 + 0.2 != 0.3 in binary; the relative tolerance treats it as a tie
  const std::vector<double> v{0.1, 0.2};
  EXPECT_EQ(apply_llrq(0.15, v, 2), 0);
  EXPECT_EQ(apply_llrq(0.15 - 1e-9, v, 2), 1);
}

TEST(EnumerateQuantizers, Counts) {
  EXPECT_EQ(enumerate_quantizers({Alphabet::binary()}, Alphabet::binary(), 0).size(), 4u);
  EXPECT_EQ(all_gates().size(), 16u);
  EXPECT_EQ(enumerate_quantizers({Alphabet::range(3)}, Alphabet::binary(), 0).size(), 8u);
  EXPECT_EQ(enumerate_quantizers({Alphabet::range(3)}, Alphabet::range(3), 0).size(), 27u);
  EXPECT_THROW(enumerate_quantizers({Alphabet::range(21)}, Alphabet::binary(), 0), EnumerationTooLarge);
}

TEST(EnumerateQuantizers, LexicographicOrder) {
  const auto fam = enumerate_quantizers({Alphabet::binary()}, Alphabet::binary(), 0);
  EXPECT_EQ(fam[0].table(), (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(fam[1].table(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(fam[2].table(), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(fam[3].table(), (std::vector<std::size_t>{1, 1}));
  const auto gates = all_gates();
  EXPECT_EQ(gates[7], or_gate());  // 0111
  EXPECT_EQ(gates[1], and_gate());  // 0001
}

TEST(EnumerateQuantizers, CanonicalDropsRelabelings) {
  const auto fam =
      enumerate_quantizers({Alphabet::range(3)}, Alphabet::binary(), 0, EnumerationOptions{true, 1e6});
  // restricted growth strings of length 3 over 2 symbols: 000, 001, 010, 011
  EXPECT_EQ(fam.size(), 4u);
}

TEST(ParallelExponent, Bern75AllBinary) {
  const auto fam = all_binary_quantizers(Alphabet::binary());
  const auto r = parallel_exponent(bern75(), fam);
  EXPECT_NEAR(r.g_p_star, -0.5 * kLog3, 1e-12);
  EXPECT_EQ(fam[r.index], TransmissionFunction::identity(Alphabet::binary()));
}

TEST(ParallelExponent, DegenerateFamily) {
  const auto fam = all_binary_quantizers(Alphabet::binary());
  EXPECT_THROW(parallel_exponent(DistributionPair::bernoulli(0.4, 0.4), fam), DegenerateFamily);
}

TEST(ParallelExponent, FourSymbolPairMatchesBruteForce) {
  const std::vector<double> p0{0.25, 0.25, 0.25, 0.25};
  const std::vector<double> p1{0.125, 0.125, 0.25, 0.5};
  const DistributionPair pair(Alphabet::range(4), p0, p1);
  double best = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<double> a0(2, 0.0), a1(2, 0.0);
    for (int x = 0; x < 4; ++x) {
      const int y = (mask >> (3 - x)) & 1;
      a0[y] += p0[x];
      a1[y] += p1[x];
    }
    if (a0[0] == 0.0 || a0[1] == 0.0) continue;
    best = std::max(best, oracle::kl(a0, a1));
  }
  const auto fam = all_binary_quantizers(pair.alphabet());
  const auto r = parallel_exponent(pair, fam);
  EXPECT_NEAR(r.g_p_star, -best, 1e-14);
  // best split is {0,1} | {2,3}
  EXPECT_NEAR(r.g_p_star, -(0.5 * std::log(0.5 / 0.25) + 0.5 * std::log(0.5 / 0.75)), 1e-14);
}

TEST(FusionLoss, K2Bern75AllGates) {
  const std::vector<TransmissionFunction> leaf{TransmissionFunction::identity(Alphabet::binary())};
  const auto gates = all_gates();
  const auto r = fusion_loss_constant(bern75(), leaf, gates, 2);
  const double or_value =
      0.5 * (0.5625 * std::log(0.0625 / 0.5625) + 0.4375 * std::log(0.9375 / 0.4375));
  EXPECT_NEAR(or_value, oracle::gate_exponent(0.75, {0, 1, 1, 1}), 1e-15);
  EXPECT_NEAR(r.constant, or_value, 1e-12);
  EXPECT_NEAR(r.constant, -0.451251276, 1e-9);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.g_p_star, -0.5 * kLog3, 1e-12);
  EXPECT_EQ(gates[r.relay_index], or_gate());
}

TEST(FusionLoss, IdenticalLawsAndXor) {
  const std::vector<TransmissionFunction> leaf{TransmissionFunction::identity(Alphabet::binary())};
  const auto gates = all_gates();
  const auto flat = fusion_loss_constant(DistributionPair::bernoulli(0.3, 0.3), leaf, gates, 2);
  EXPECT_EQ(flat.constant, 0.0);
  EXPECT_FALSE(flat.holds);

  const std::vector<TransmissionFunction> xr{gates[6]};  // 0110
  const auto x = fusion_loss_constant(bern75(), leaf, xr, 2);
  EXPECT_NEAR(x.constant, 0.0, 1e-15);
  // g_P* < 0 = K_2, so the strict inequality is met trivially
  EXPECT_TRUE(x.holds);
}

TEST(FusionLoss, RejectsBadArity) {
  const std::vector<TransmissionFunction> leaf{TransmissionFunction::identity(Alphabet::binary())};
  const auto gates = all_gates();
  EXPECT_THROW(fusion_loss_constant(bern75(), leaf, gates, 1), InvalidParams);
  EXPECT_THROW(fusion_loss_constant(bern75(), leaf, gates, 3), InvalidParams);
}

TEST(LlrqRealization, OrGate) {
  const std::vector<std::vector<double>> llrs{{-kLog3, kLog3}, {-kLog3, kLog3}};
  const auto r = llrq_realization(or_gate(), llrs, 2);
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->lo, -kLog3, 1e-15);
  EXPECT_NEAR(r->hi, 0.0, 1e-15);
  // XOR is not a threshold rule
  EXPECT_FALSE(llrq_realization(all_gates()[6], llrs, 2).has_value());
}

// properties

TEST(ChannelProperties, DataProcessing) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + trial % 4;
    const DistributionPair p(Alphabet::range(k), oracle::random_law(rng, k), oracle::random_law(rng, k));
    const double d = kl_divergence(p, Direction::ZeroOne);
    const auto fam = enumerate_quantizers({p.alphabet()}, Alphabet::range(3), 0);
    double best = 0.0;
    for (const auto& g : fam) {
      const double dg = kl_divergence(induced_pair(p, g), Direction::ZeroOne);
      EXPECT_LE(dg, d + 1e-12);
      best = std::max(best, dg);
    }
    EXPECT_NEAR(parallel_exponent(p, fam).g_p_star, -best, 1e-15);
  }
}

TEST(ChannelProperties, ParallelExponentBelowFusionLoss) {
  std::mt19937_64 rng(22);
  const auto gates = all_gates();
  for (int trial = 0; trial < 20; ++trial) {
    const DistributionPair p(Alphabet::range(3), oracle::random_law(rng, 3), oracle::random_law(rng, 3));
    const auto leaf = all_binary_quantizers(p.alphabet());
    const auto r = fusion_loss_constant(p, leaf, gates, 2);
    EXPECT_LE(r.g_p_star, r.constant + 1e-12);
  }
}

TEST(ChannelProperties, LlrqMonotone) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v{u(rng), u(rng), u(rng)};
    const double t = u(rng) / 3;
    const int base = apply_llrq(t, v, 3);
    auto w = v;
    w[trial % 3] += std::abs(u(rng));
    EXPECT_GE(apply_llrq(t, w, 3), base);
    EXPECT_GE(apply_llrq(t - std::abs(u(rng)), v, 3), base);
  }
}
