#include "treedet/families.hpp"

#include <cmath>

#include "treedet/error.hpp"

namespace treedet {

Tree parallel_tree(std::size_t leaves) {
  if (leaves < 1) throw InvalidParams("parallel tree needs at least one leaf");
  std::vector<std::optional<NodeId>> p(leaves + 1, NodeId{0});
  p[0] = std::nullopt;
  return Tree(std::move(p));
}

Tree chain_plus_leaves_tree(std::size_t height, std::size_t n) {
  if (height < 1 || n < height + 1) throw InvalidParams("chain tree needs h >= 1 and n > h");
  std::vector<std::optional<NodeId>> p{std::nullopt};
  for (std::size_t i = 1; i < height; ++i) p.push_back(i - 1);
  const NodeId bottom = height - 1;
  while (p.size() < n) p.push_back(bottom);
  return Tree(std::move(p));
}

Tree wide_uniform_tree(std::size_t leaves_per_relay, std::size_t relays) {
  if (leaves_per_relay < 1 || relays < 1) throw InvalidParams("wide tree needs positive sizes");
  std::vector<std::optional<NodeId>> p{std::nullopt};
  p.reserve(1 + relays * (leaves_per_relay + 1));
  for (std::size_t r = 0; r < relays; ++r) p.push_back(NodeId{0});
  for (std::size_t r = 0; r < relays; ++r) {
    for (std::size_t j = 0; j < leaves_per_relay; ++j) p.push_back(r + 1);
  }
  return Tree(std::move(p));
}

Tree two_relay_tree(std::size_t m) { return wide_uniform_tree(m, 2); }

Tree increasing_leaves_tree(std::size_t m) {
  if (m < 1) throw InvalidParams("increasing-leaves tree needs m >= 1");
  std::vector<std::optional<NodeId>> p{std::nullopt};
  for (std::size_t i = 0; i < m; ++i) p.push_back(NodeId{0});
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) p.push_back(i);
  }
  return Tree(std::move(p));
}

const char* family_kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Parallel: return "Parallel";
    case FamilyKind::ChainPlusLeaves: return "ChainPlusLeaves";
    case FamilyKind::TwoRelay: return "TwoRelay";
    case FamilyKind::WideUniform: return "WideUniform";
    case FamilyKind::IncreasingLeaves: return "IncreasingLeaves";
    case FamilyKind::Explicit: return "Explicit";
  }
  return "?";
}

FamilyKind parse_family_kind(const std::string& name) {
  for (auto k : {FamilyKind::Parallel, FamilyKind::ChainPlusLeaves, FamilyKind::TwoRelay,
                 FamilyKind::WideUniform, FamilyKind::IncreasingLeaves, FamilyKind::Explicit}) {
    if (name == family_kind_name(k)) return k;
  }
  throw InvalidParams("unknown family kind '" + name + "'");
}

namespace {

std::size_t whole(const std::map<std::string, double>& params, const std::string& key) {
  const double v = params.at(key);
  if (!(v >= 1.0) || v != std::floor(v)) throw InvalidParams("param '" + key + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

void TreeFamily::validate() const {
  switch (kind) {
    case FamilyKind::ChainPlusLeaves:
      if (!params.count("h")) throw InvalidParams("ChainPlusLeaves needs param 'h'");
      whole(params, "h");
      break;
    case FamilyKind::WideUniform: {
      const int given = static_cast<int>(params.count("relays")) +
                        static_cast<int>(params.count("leaves_per_relay")) +
                        static_cast<int>(params.count("relays_power"));
      if (given != 1) {
        throw InvalidParams("WideUniform needs exactly one of 'relays', 'leaves_per_relay', 'relays_power'");
      }
      for (const auto& [k, v] : params) whole(params, k);
      break;
    }
    case FamilyKind::Explicit:
      if (!fixed) throw InvalidParams("Explicit family needs a tree");
      break;
    default:
      break;
  }
}

Tree TreeFamily::at(std::size_t m) const {
  validate();
  switch (kind) {
    case FamilyKind::Parallel: return parallel_tree(m);
    case FamilyKind::ChainPlusLeaves: return chain_plus_leaves_tree(whole(params, "h"), m);
    case FamilyKind::TwoRelay: return two_relay_tree(m);
    case FamilyKind::WideUniform:
      if (params.count("relays")) return wide_uniform_tree(m, whole(params, "relays"));
      if (params.count("leaves_per_relay")) return wide_uniform_tree(whole(params, "leaves_per_relay"), m);
      {
        const double relays = std::pow(static_cast<double>(m), params.at("relays_power"));
        if (relays > 5e6) throw InvalidParams("relay count too large to materialize");
        return wide_uniform_tree(m, static_cast<std::size_t>(std::llround(relays)));
      }
    case FamilyKind::IncreasingLeaves: return increasing_leaves_tree(m);
    case FamilyKind::Explicit: return *fixed;
  }
  throw InvalidParams("unknown family kind");
}

namespace {

bool converges_to(const std::vector<double>& seq, double target, double tol) {
  if (seq.empty()) return false;
  const double last = std::abs(seq.back() - target);
  return last < tol && last <= std::abs(seq.front() - target) + 1e-15;
}

}  // namespace

ZEstimate estimate_z(const TreeFamily& family, const std::vector<std::size_t>& grid,
                     const std::vector<std::size_t>& small_thresholds, double tol) {
  if (grid.empty()) throw InvalidParams("empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw InvalidParams("grid must be increasing");
  }
  ZEstimate out;
  out.grid = grid;
  for (std::size_t m : grid) {
    const Tree t = family.at(m);
    out.leaf_fraction.push_back(static_cast<double>(t.leaf_total()) / static_cast<double>(t.size()));
    for (std::size_t n : small_thresholds) out.q[n].push_back(analyze_tree(t, n).q);
  }
  out.z = out.leaf_fraction.back();
  out.z_to_one = converges_to(out.leaf_fraction, 1.0, tol);
  out.q_to_zero = true;
  for (const auto& [n, seq] : out.q) out.q_to_zero = out.q_to_zero && converges_to(seq, 0.0, tol);
  out.consistent = out.z_to_one == out.q_to_zero;
  return out;
}

}  // namespace treedet
