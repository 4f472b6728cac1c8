#include "treedet/message_law.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "treedet/channels.hpp"
#include "treedet/error.hpp"
#include "treedet/numeric.hpp"

namespace treedet {

namespace {

double scaled(std::size_t n, double log_p) { return n == 0 ? 0.0 : static_cast<double>(n) * log_p; }

double snap(double v, double step) { return step > 0.0 ? step * std::round(v / step) : v; }

bool close_values(double a, double b) {
  return std::abs(a - b) <= MessageLaw::kMergeTolerance * std::max(1.0, std::abs(a));
}

}  // namespace

MessageLaw MessageLaw::point(double value) { return MessageLaw({Atom{value, 0.0, 0.0}}); }

MessageLaw MessageLaw::from_atoms(std::vector<Atom> atoms) {
  std::erase_if(atoms, [](const Atom& a) { return a.log_p0 == kNegInf && a.log_p1 == kNegInf; });
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!merged.empty() && close_values(merged.back().value, a.value)) {
      merged.back().log_p0 = log_add_exp(merged.back().log_p0, a.log_p0);
      merged.back().log_p1 = log_add_exp(merged.back().log_p1, a.log_p1);
    } else {
      merged.push_back(a);
    }
  }
  return MessageLaw(std::move(merged));
}

MessageLaw MessageLaw::llr_of(const DistributionPair& pair) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    atoms.push_back({log_likelihood_ratio(pair, i), safe_log(pair.p0()[i]), safe_log(pair.p1()[i])});
  }
  return from_atoms(std::move(atoms));
}

void MessageLaw::renormalize() {
  const double z0 = log_total(Hypothesis::H0);
  const double z1 = log_total(Hypothesis::H1);
  for (auto& a : atoms_) {
    if (a.log_p0 != kNegInf) a.log_p0 -= z0;
    if (a.log_p1 != kNegInf) a.log_p1 -= z1;
  }
}

MessageLaw MessageLaw::convolve(const MessageLaw& a, const MessageLaw& b, double step, std::size_t cap) {
  if (a.atoms_.empty() || b.atoms_.empty()) return MessageLaw();
  if (step > 0.0) {
    // Dense accumulation on the lattice; values of both inputs are snapped first.
    auto index = [step](double v) { return static_cast<long long>(std::llround(v / step)); };
    const long long lo = index(a.atoms_.front().value) + index(b.atoms_.front().value);
    const long long hi = index(a.atoms_.back().value) + index(b.atoms_.back().value);
    const auto width = static_cast<std::size_t>(hi - lo + 1);
    if (width > cap) throw StateSpaceTooLarge("lattice width " + std::to_string(width) + " exceeds cap");
    std::vector<double> m0(width, kNegInf), m1(width, kNegInf);
    for (const auto& x : a.atoms_) {
      const long long ix = index(x.value);
      for (const auto& y : b.atoms_) {
        const auto s = static_cast<std::size_t>(ix + index(y.value) - lo);
        m0[s] = log_add_exp(m0[s], x.log_p0 + y.log_p0);
        m1[s] = log_add_exp(m1[s], x.log_p1 + y.log_p1);
      }
    }
    std::vector<Atom> out;
    for (std::size_t s = 0; s < width; ++s) {
      if (m0[s] == kNegInf && m1[s] == kNegInf) continue;
      out.push_back({step * static_cast<double>(lo + static_cast<long long>(s)), m0[s], m1[s]});
    }
    return MessageLaw(std::move(out));
  }
  const double pairs = static_cast<double>(a.size()) * static_cast<double>(b.size());
  if (pairs > static_cast<double>(cap)) {
    throw StateSpaceTooLarge("convolution of " + std::to_string(a.size()) + " x " +
                             std::to_string(b.size()) + " atoms exceeds cap");
  }
  std::vector<Atom> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a.atoms_) {
    for (const auto& y : b.atoms_) {
      out.push_back({x.value + y.value, x.log_p0 + y.log_p0, x.log_p1 + y.log_p1});
    }
  }
  return from_atoms(std::move(out));
}

MessageLaw MessageLaw::power(std::size_t count, double step, std::size_t cap) const {
  if (count == 0) return point(0.0);
  if (step > 0.0) {
    const MessageLaw snapped = quantized(step);
    return snapped.power_snapped(count, step, cap);
  }
  return power_snapped(count, 0.0, cap);
}

MessageLaw MessageLaw::power_snapped(std::size_t count, double step, std::size_t cap) const {
  if (atoms_.size() == 1) {
    const auto& a = atoms_[0];
    return MessageLaw({Atom{snap(static_cast<double>(count) * a.value, step), scaled(count, a.log_p0),
                            scaled(count, a.log_p1)}});
  }
  if (atoms_.size() == 2) {
    if (count + 1 > cap) throw StateSpaceTooLarge("binomial law exceeds cap");
    const auto& a = atoms_[0];
    const auto& b = atoms_[1];
    const double lc = std::lgamma(static_cast<double>(count) + 1.0);
    std::vector<Atom> out;
    out.reserve(count + 1);
    for (std::size_t k = 0; k <= count; ++k) {
      const double choose = lc - std::lgamma(static_cast<double>(k) + 1.0) -
                            std::lgamma(static_cast<double>(count - k) + 1.0);
      const double v = static_cast<double>(k) * b.value + static_cast<double>(count - k) * a.value;
      out.push_back({snap(v, step), choose + scaled(k, b.log_p0) + scaled(count - k, a.log_p0),
                     choose + scaled(k, b.log_p1) + scaled(count - k, a.log_p1)});
    }
    MessageLaw law = step > 0.0 ? from_atoms(std::move(out)) : MessageLaw(std::move(out));
    if (step <= 0.0) {
      std::erase_if(law.atoms_, [](const Atom& x) { return x.log_p0 == kNegInf && x.log_p1 == kNegInf; });
    }
    law.renormalize();
    return law;
  }
  MessageLaw result = point(0.0);
  MessageLaw base = *this;
  while (count > 0) {
    if (count & 1U) result = convolve(result, base, step, cap);
    count >>= 1U;
    if (count > 0) base = convolve(base, base, step, cap);
  }
  return result;
}

MessageLaw MessageLaw::quantized(double step) const {
  if (step <= 0.0) return *this;
  std::vector<Atom> out(atoms_.begin(), atoms_.end());
  for (auto& a : out) a.value = snap(a.value, step);
  return from_atoms(std::move(out));
}

double MessageLaw::log_upper_tail(Hypothesis j, double t, double leaf_count) const {
  auto it = std::partition_point(atoms_.begin(), atoms_.end(),
                                 [&](const Atom& a) { return !llrq_exceeds(a.value, t, leaf_count); });
  double acc = kNegInf;
  for (; it != atoms_.end(); ++it) acc = log_add_exp(acc, j == Hypothesis::H0 ? it->log_p0 : it->log_p1);
  return acc;
}

double MessageLaw::log_lower_tail(Hypothesis j, double t, double leaf_count) const {
  auto end = std::partition_point(atoms_.begin(), atoms_.end(),
                                  [&](const Atom& a) { return !llrq_exceeds(a.value, t, leaf_count); });
  double acc = kNegInf;
  for (auto it = atoms_.begin(); it != end; ++it) {
    acc = log_add_exp(acc, j == Hypothesis::H0 ? it->log_p0 : it->log_p1);
  }
  return acc;
}

double MessageLaw::log_total(Hypothesis j) const {
  double acc = kNegInf;
  for (const auto& a : atoms_) acc = log_add_exp(acc, j == Hypothesis::H0 ? a.log_p0 : a.log_p1);
  return acc;
}

double MessageLaw::mean(Hypothesis j) const {
  double acc = 0.0;
  for (const auto& a : atoms_) acc += prob_from_log(j == Hypothesis::H0 ? a.log_p0 : a.log_p1) * a.value;
  return acc;
}

}  // namespace treedet
