#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treedet {

using Symbol = std::string;

enum class Hypothesis { H0 = 0, H1 = 1 };

/// Direction of a KL divergence: ZeroOne is D(P0 || P1), OneZero is D(P1 || P0).
enum class Direction { ZeroOne, OneZero };

/// Ordered finite set of distinct symbols.
class Alphabet {
 public:
  explicit Alphabet(std::vector<Symbol> symbols);

  /// {"0", "1"}
  static Alphabet binary();
  /// {"0", ..., "n-1"}
  static Alphabet range(std::size_t n);

  std::size_t size() const { return symbols_.size(); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  std::optional<std::size_t> find(std::string_view symbol) const;
  /// Throws UnknownSymbol.
  std::size_t index_of(std::string_view symbol) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Two equivalent discrete laws over one alphabet, indexed in alphabet order.
///
/// Construction validates each law (entries in [0, 1], sum within 1e-12) and
/// equivalence: a symbol is either charged by both hypotheses or by neither.
/// Nothing is renormalized.
class DistributionPair {
 public:
  static constexpr double kSumTolerance = 1e-12;

  DistributionPair(Alphabet alphabet, std::vector<double> p0, std::vector<double> p1);

  /// Binary alphabet {"0","1"} with P0(1) = one0 and P1(1) = one1.
  static DistributionPair bernoulli(double one0, double one1);

  /// True when p0(x) > 0 <=> p1(x) > 0 for every entry.
  static bool equivalent(std::span<const double> p0, std::span<const double> p1);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }
  std::span<const double> p0() const { return p0_; }
  std::span<const double> p1() const { return p1_; }
  std::span<const double> law(Hypothesis j) const { return j == Hypothesis::H0 ? p0() : p1(); }
  double prob(Hypothesis j, std::size_t i) const { return law(j)[i]; }

  bool operator==(const DistributionPair&) const = default;

 private:
  Alphabet alphabet_;
  std::vector<double> p0_;
  std::vector<double> p1_;
};

/// Independent product of pairs; tuple symbols are joined with ',' and ordered
/// lexicographically with the first factor most significant.
DistributionPair product_pair(std::span<const DistributionPair> factors);

double kl_divergence(const DistributionPair& pair, Direction direction);

/// log(p1/p0) at a symbol. Symbols carrying no mass under either hypothesis
/// return 0.
double log_likelihood_ratio(const DistributionPair& pair, std::string_view symbol);
double log_likelihood_ratio(const DistributionPair& pair, std::size_t index);

/// E_j[f(LLR)] by direct summation over the alphabet.
template <class F>
double expect_llr(const DistributionPair& pair, Hypothesis j, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    const double w = pair.prob(j, i);
    if (w > 0.0) acc += w * f(log_likelihood_ratio(pair, i));
  }
  return acc;
}

class TransmissionFunction;

struct ValidationReport {
  bool equivalent = false;
  /// Some leaf quantizer gives -D(P0^g||P1^g) < 0 < D(P1^g||P0^g).
  bool informative_quantizer = false;
  std::optional<std::size_t> informative_index;
  /// E0[log^2(p1/p0)]
  double llr_second_moment = 0.0;
  /// Chebyshev constant a = E0[log^2(p1/p0)] + 2.
  double bound_constant = 0.0;
};

ValidationReport validate_assumptions(const DistributionPair& pair,
                                      std::span<const TransmissionFunction> leaf_family);

}  // namespace treedet
