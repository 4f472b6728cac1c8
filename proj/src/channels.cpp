#include "treedet/channels.hpp"

#include <cmath>
#include <limits>

#include "treedet/error.hpp"

namespace treedet {

TransmissionFunction::TransmissionFunction(std::size_t arity, std::vector<Alphabet> inputs,
                                           Alphabet output, std::vector<std::size_t> table)
    : arity_(arity), inputs_(std::move(inputs)), output_(std::move(output)), table_(std::move(table)) {
  const std::size_t expected_inputs = arity_ == 0 ? 1 : arity_;
  if (inputs_.size() != expected_inputs) {
    throw InvalidParams("arity " + std::to_string(arity_) + " needs " +
                        std::to_string(expected_inputs) + " input alphabets, got " +
                        std::to_string(inputs_.size()));
  }
  std::size_t domain = 1;
  for (const auto& a : inputs_) domain *= a.size();
  if (table_.size() != domain) {
    throw InvalidParams("table has " + std::to_string(table_.size()) + " entries, domain has " +
                        std::to_string(domain));
  }
  for (std::size_t y : table_) {
    if (y >= output_.size()) throw InvalidParams("table entry outside the output alphabet");
  }
}

TransmissionFunction TransmissionFunction::identity(const Alphabet& alphabet) {
  std::vector<std::size_t> table(alphabet.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = i;
  return TransmissionFunction(0, {alphabet}, alphabet, std::move(table));
}

TransmissionFunction TransmissionFunction::constant(const Alphabet& input, const Alphabet& output,
                                                    std::size_t symbol) {
  return TransmissionFunction(0, {input}, output, std::vector<std::size_t>(input.size(), symbol));
}

TransmissionFunction TransmissionFunction::from_function(
    std::size_t arity, std::vector<Alphabet> inputs, Alphabet output,
    const std::function<std::size_t(std::span<const std::size_t>)>& f) {
  std::size_t domain = 1;
  for (const auto& a : inputs) domain *= a.size();
  std::vector<std::size_t> table(domain);
  std::vector<std::size_t> tuple(inputs.size(), 0);
  for (std::size_t flat = 0; flat < domain; ++flat) {
    std::size_t rest = flat;
    for (std::size_t i = inputs.size(); i-- > 0;) {
      tuple[i] = rest % inputs[i].size();
      rest /= inputs[i].size();
    }
    table[flat] = f(tuple);
  }
  return TransmissionFunction(arity, std::move(inputs), std::move(output), std::move(table));
}

std::size_t TransmissionFunction::flat_index(std::span<const std::size_t> tuple) const {
  if (tuple.size() != inputs_.size()) throw InvalidParams("tuple length does not match arity");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= inputs_[i].size()) throw UnknownSymbol("tuple entry outside its alphabet");
    flat = flat * inputs_[i].size() + tuple[i];
  }
  return flat;
}

std::vector<std::size_t> TransmissionFunction::tuple_at(std::size_t flat) const {
  std::vector<std::size_t> tuple(inputs_.size());
  for (std::size_t i = inputs_.size(); i-- > 0;) {
    tuple[i] = flat % inputs_[i].size();
    flat /= inputs_[i].size();
  }
  return tuple;
}

namespace {

DistributionPair from_masses(const Alphabet& output, const std::vector<double>& m0,
                             const std::vector<double>& m1) {
  std::vector<Symbol> kept;
  std::vector<double> q0, q1;
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t y = 0; y < output.size(); ++y) {
    if (m0[y] == 0.0 && m1[y] == 0.0) continue;
    if ((m0[y] > 0.0) != (m1[y] > 0.0)) {
      throw EquivalenceViolation("output symbol '" + output[y] + "' is charged by only one hypothesis");
    }
    kept.push_back(output[y]);
    q0.push_back(m0[y]);
    q1.push_back(m1[y]);
    s0 += m0[y];
    s1 += m1[y];
  }
  for (double& x : q0) x /= s0;
  for (double& x : q1) x /= s1;
  return DistributionPair(Alphabet(std::move(kept)), std::move(q0), std::move(q1));
}

}  // namespace

DistributionPair induced_pair(const DistributionPair& pair, const TransmissionFunction& tf) {
  if (tf.arity() != 0) throw InvalidParams("leaf push-forward needs an arity-0 map");
  if (!(tf.inputs()[0] == pair.alphabet())) {
    throw InvalidParams("map input alphabet differs from the observation alphabet");
  }
  std::vector<double> m0(tf.output().size(), 0.0), m1(tf.output().size(), 0.0);
  for (std::size_t x = 0; x < pair.size(); ++x) {
    m0[tf.apply(x)] += pair.p0()[x];
    m1[tf.apply(x)] += pair.p1()[x];
  }
  return from_masses(tf.output(), m0, m1);
}

DistributionPair induced_pair(std::span<const DistributionPair> inputs, const TransmissionFunction& tf) {
  if (inputs.size() != tf.inputs().size() || tf.arity() == 0) {
    throw InvalidParams("relay push-forward needs one pair per input");
  }
  // Map each input pair's symbols onto the map's input alphabet.
  std::vector<std::vector<std::size_t>> slot(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (const auto& s : inputs[i].alphabet().symbols()) slot[i].push_back(tf.inputs()[i].index_of(s));
  }
  std::vector<double> m0(tf.output().size(), 0.0), m1(tf.output().size(), 0.0);
  std::vector<std::size_t> pos(inputs.size(), 0), tuple(inputs.size());
  while (true) {
    double w0 = 1.0, w1 = 1.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      tuple[i] = slot[i][pos[i]];
      w0 *= inputs[i].p0()[pos[i]];
      w1 *= inputs[i].p1()[pos[i]];
    }
    const std::size_t y = tf.apply(tuple);
    m0[y] += w0;
    m1[y] += w1;
    std::size_t i = inputs.size();
    while (i-- > 0) {
      if (++pos[i] < inputs[i].size()) break;
      pos[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return from_masses(tf.output(), m0, m1);
}

std::vector<TransmissionFunction> enumerate_quantizers(const std::vector<Alphabet>& inputs,
                                                       const Alphabet& output, std::size_t arity,
                                                       EnumerationOptions options) {
  double domain = 1.0;
  for (const auto& a : inputs) domain *= static_cast<double>(a.size());
  const double count = std::pow(static_cast<double>(output.size()), domain);
  if (!(count <= options.cap)) {
    throw EnumerationTooLarge("enumeration of " + std::to_string(count) + " maps exceeds cap " +
                              std::to_string(options.cap));
  }
  const auto d = static_cast<std::size_t>(domain);
  const std::size_t base = output.size();
  std::vector<TransmissionFunction> out;
  std::vector<std::size_t> table(d, 0);
  while (true) {
    bool keep = true;
    if (options.canonical) {
      std::size_t next = 0;
      for (std::size_t y : table) {
        if (y > next) {
          keep = false;
          break;
        }
        if (y == next) ++next;
      }
    }
    if (keep) out.emplace_back(arity, inputs, output, table);
    std::size_t i = d;
    while (i-- > 0) {
      if (++table[i] < base) break;
      table[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::vector<TransmissionFunction> all_binary_quantizers(const Alphabet& observation) {
  return enumerate_quantizers({observation}, Alphabet::binary(), 0);
}

bool llrq_exceeds(double sum, double t, double leaf_count) {
  const double bound = t * leaf_count;
  return sum > bound + 1e-12 * std::max(1.0, std::abs(bound));
}

int apply_llrq(double t, std::span<const double> incoming_llrs, double leaf_count) {
  double sum = 0.0;
  for (double l : incoming_llrs) sum += l;
  return llrq_exceeds(sum, t, leaf_count) ? 1 : 0;
}

ParallelExponent parallel_exponent(const DistributionPair& pair,
                                   std::span<const TransmissionFunction> leaf_family) {
  if (leaf_family.empty()) throw InvalidParams("empty quantizer family");
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < leaf_family.size(); ++i) {
    const double d = kl_divergence(induced_pair(pair, leaf_family[i]), Direction::ZeroOne);
    if (d > best) {
      best = d;
      arg = i;
    }
  }
  if (best <= 0.0) throw DegenerateFamily("every quantizer in the family has zero divergence");
  return {-best, arg};
}

FusionLoss fusion_loss_constant(const DistributionPair& pair,
                                std::span<const TransmissionFunction> leaf_family,
                                std::span<const TransmissionFunction> relay_family, std::size_t k) {
  if (k < 2) throw InvalidParams("fusion loss needs k > 1");
  if (leaf_family.empty() || relay_family.empty()) throw InvalidParams("empty quantizer family");
  const double combos = static_cast<double>(relay_family.size()) *
                        std::pow(static_cast<double>(leaf_family.size()), static_cast<double>(k));
  if (combos > 1e6) {
    throw EnumerationTooLarge("fusion loss enumeration of " + std::to_string(combos) + " exceeds 1e6");
  }
  for (const auto& r : relay_family) {
    if (r.arity() != k) throw InvalidParams("relay map arity differs from k");
  }
  std::vector<DistributionPair> leaves;
  leaves.reserve(leaf_family.size());
  for (const auto& g : leaf_family) leaves.push_back(induced_pair(pair, g));

  FusionLoss out{k, 0.0, false, 0.0, 0, std::vector<std::size_t>(k, 0)};
  std::vector<std::size_t> pick(k, 0);
  std::vector<DistributionPair> chosen;
  bool first = true;
  while (true) {
    chosen.clear();
    for (std::size_t i = 0; i < k; ++i) chosen.push_back(leaves[pick[i]]);
    for (std::size_t r = 0; r < relay_family.size(); ++r) {
      const double v = -kl_divergence(induced_pair(chosen, relay_family[r]), Direction::ZeroOne) /
                       static_cast<double>(k);
      if (first || v < out.constant) {
        out.constant = v;
        out.relay_index = r;
        out.leaf_indices = pick;
        first = false;
      }
    }
    std::size_t i = k;
    while (i-- > 0) {
      if (++pick[i] < leaf_family.size()) break;
      pick[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  try {
    out.g_p_star = parallel_exponent(pair, leaf_family).g_p_star;
    out.holds = out.g_p_star < out.constant;
  } catch (const DegenerateFamily&) {
    out.g_p_star = 0.0;
    out.holds = false;
  }
  return out;
}

std::optional<ThresholdRange> llrq_realization(const TransmissionFunction& tf,
                                               const std::vector<std::vector<double>>& input_llrs,
                                               double leaf_count) {
  if (tf.output().size() != 2) throw InvalidParams("LLRQ realization needs a binary output");
  if (input_llrs.size() != tf.inputs().size()) throw InvalidParams("one LLR table per input required");
  for (std::size_t i = 0; i < input_llrs.size(); ++i) {
    if (input_llrs[i].size() != tf.inputs()[i].size()) throw InvalidParams("LLR table size mismatch");
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < tf.domain_size(); ++flat) {
    const auto tuple = tf.tuple_at(flat);
    double sum = 0.0;
    for (std::size_t i = 0; i < tuple.size(); ++i) sum += input_llrs[i][tuple[i]];
    const double x = sum / leaf_count;
    if (tf.table()[flat] == 0) {
      lo = std::max(lo, x);
    } else {
      hi = std::min(hi, x);
    }
  }
  if (!(lo < hi)) return std::nullopt;
  return ThresholdRange{lo, hi};
}

namespace {

TransmissionFunction binary_gate(std::size_t t00, std::size_t t01, std::size_t t10, std::size_t t11) {
  return TransmissionFunction(2, {Alphabet::binary(), Alphabet::binary()}, Alphabet::binary(),
                              {t00, t01, t10, t11});
}

}  // namespace

TransmissionFunction or_gate() { return binary_gate(0, 1, 1, 1); }
TransmissionFunction and_gate() { return binary_gate(0, 0, 0, 1); }
TransmissionFunction forward_first_gate() { return binary_gate(0, 0, 1, 1); }

}  // namespace treedet
