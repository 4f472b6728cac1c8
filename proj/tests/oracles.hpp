#pragma once

// Reference computations written directly from definitions, without the
// library's message-law machinery. Used to freeze expected values.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) acc += p[i] * std::log(p[i] / q[i]);
  }
  return acc;
}

/// Per-leaf exponent of a two-leaf gate over Bernoulli(1-p) / Bernoulli(p)
/// leaves; `ones` lists which of (00, 01, 10, 11) map to 1.
inline double gate_exponent(double p, const std::vector<int>& ones) {
  const double q = 1.0 - p;
  const double w0[4] = {p * p, p * q, q * p, q * q};  // H0: P(1) = q
  const double w1[4] = {q * q, q * p, p * q, p * p};
  double a0 = 0.0, a1 = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (ones[i]) {
      a0 += w0[i];
      a1 += w1[i];
    }
  }
  return -kl({1.0 - a0, a0}, {1.0 - a1, a1}) / 2.0;
}

/// Brute-force relay tree evaluation.
///
/// parents[0] is ignored (root). Every leaf maps its observation x through
/// `leaf_map` and sends log(P1(y)/P0(y)); every internal node at level k sums
/// incoming values and sends bit (sum > t_k * l(v)), represented by the LLR
/// of that bit. Probabilities are found by enumerating every joint leaf
/// outcome, one level at a time.
struct BruteForce {
  std::vector<int> parent;  // -1 for root
  std::vector<double> p0, p1;
  std::vector<int> leaf_map;  // observation -> message symbol
  std::vector<double> level_threshold;  // index k-1
  double root_threshold;

  double type_I = 0.0, type_II = 0.0;

  void run() {
    const std::size_t n = parent.size();
    std::vector<std::vector<int>> kids(n);
    for (std::size_t v = 1; v < n; ++v) kids[parent[v]].push_back(static_cast<int>(v));
    std::vector<int> depth(n, 0);
    for (std::size_t v = 1; v < n; ++v) {
      int d = 0;
      for (int u = static_cast<int>(v); u != 0; u = parent[u]) ++d;
      depth[v] = d;
    }
    int h = 0;
    for (int d : depth) h = std::max(h, d);
    std::vector<int> leaves, leaf_count(n, 0);
    for (std::size_t v = 1; v < n; ++v) {
      if (kids[v].empty()) {
        leaves.push_back(static_cast<int>(v));
        for (int u = static_cast<int>(v); u != -1; u = u == 0 ? -1 : parent[u]) ++leaf_count[u];
      }
    }
    // message LLRs at the leaves
    std::size_t msgs = 0;
    for (int y : leaf_map) msgs = std::max<std::size_t>(msgs, static_cast<std::size_t>(y) + 1);
    std::vector<double> m0(msgs, 0.0), m1(msgs, 0.0);
    for (std::size_t x = 0; x < p0.size(); ++x) {
      m0[leaf_map[x]] += p0[x];
      m1[leaf_map[x]] += p1[x];
    }
    std::vector<double> leaf_llr(msgs, 0.0);
    for (std::size_t y = 0; y < msgs; ++y) {
      if (m0[y] > 0.0) leaf_llr[y] = std::log(m1[y] / m0[y]);
    }
    const std::size_t L = leaves.size();
    const std::size_t X = p0.size();
    std::size_t outcomes = 1;
    for (std::size_t i = 0; i < L; ++i) outcomes *= X;

    // bit LLRs per node, filled level by level
    std::vector<std::array<double, 2>> bit_llr(n, {0.0, 0.0});
    auto sweep = [&](int upto_level, std::vector<std::array<double, 4>>& mass) {
      // mass[v] = {P0(bit 0), P1(bit 0), P0(bit 1), P1(bit 1)}
      mass.assign(n, {0, 0, 0, 0});
      std::vector<int> obs(L, 0);
      std::vector<double> sent(n), sum(n);
      std::vector<int> bit(n);
      for (std::size_t o = 0; o < outcomes; ++o) {
        std::size_t r = o;
        double w0 = 1.0, w1 = 1.0;
        for (std::size_t i = 0; i < L; ++i) {
          obs[i] = static_cast<int>(r % X);
          r /= X;
          w0 *= p0[obs[i]];
          w1 *= p1[obs[i]];
        }
        std::fill(sum.begin(), sum.end(), 0.0);
        for (std::size_t i = 0; i < L; ++i) sent[leaves[i]] = leaf_llr[leaf_map[obs[i]]];
        for (int lev = 1; lev <= upto_level; ++lev) {
          for (std::size_t v = 0; v < n; ++v) {
            if (kids[v].empty() || h - depth[v] != lev) continue;
            double s = 0.0;
            for (int c : kids[v]) s += sent[c];
            const double t = v == 0 ? root_threshold : level_threshold[lev - 1];
            const double bound = t * leaf_count[v];
            bit[v] = s > bound + 1e-12 * std::max(1.0, std::abs(bound)) ? 1 : 0;
            sent[v] = bit_llr[v][bit[v]];
            mass[v][2 * bit[v]] += w0;
            mass[v][2 * bit[v] + 1] += w1;
          }
        }
      }
    };
    std::vector<std::array<double, 4>> mass;
    for (int lev = 1; lev <= h; ++lev) {
      sweep(lev, mass);
      for (std::size_t v = 0; v < n; ++v) {
        if (kids[v].empty() || h - depth[v] != lev) continue;
        for (int b = 0; b < 2; ++b) {
          const double a0 = mass[v][2 * b], a1 = mass[v][2 * b + 1];
          bit_llr[v][b] = a0 > 0.0 && a1 > 0.0 ? std::log(a1 / a0) : 0.0;
        }
      }
    }
    type_I = mass[0][2];
    type_II = mass[0][1];
  }
};

/// Random positive probability vector of the given size.
inline std::vector<double> random_law(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& x : p) s += (x = u(rng));
  for (auto& x : p) x /= s;
  // absorb rounding into the largest entry so the sum is 1 to the ulp
  double t = 0.0;
  for (std::size_t i = 1; i < k; ++i) t += p[i];
  p[0] = 1.0 - t;
  return p;
}

/// Random parent vector with height at most max_height. max_leaves is a soft
/// cap: relays still open when it is reached each add one more leaf.
inline std::vector<std::optional<std::size_t>> random_parents(std::mt19937_64& rng, int max_height,
                                                              int max_children, int max_leaves) {
  std::vector<std::optional<std::size_t>> parents{std::nullopt};
  std::vector<int> depth{0};
  std::vector<std::size_t> frontier{0};
  int leaves = 0;
  std::uniform_int_distribution<int> kids(1, max_children);
  std::bernoulli_distribution stop(0.3);
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t v : frontier) {
      const int c = kids(rng);
      for (int i = 0; i < c; ++i) {
        parents.push_back(v);
        depth.push_back(depth[v] + 1);
        const std::size_t id = parents.size() - 1;
        const bool leaf = depth[id] >= max_height || leaves + static_cast<int>(next.size()) >= max_leaves ||
                          stop(rng);
        if (leaf) {
          ++leaves;
        } else {
          next.push_back(id);
        }
      }
    }
    frontier = std::move(next);
  }
  return parents;
}

}  // namespace oracle
