#include "treedet/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "treedet/error.hpp"

namespace treedet {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InvalidParams(std::string("malformed ") + what + ": " + e.what());
  }
}

Symbol symbol_of(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InvalidParams("symbols must be strings or integers");
}

Alphabet alphabet_of(const Json& j) {
  if (!j.is_array()) throw InvalidParams("alphabet must be an array");
  std::vector<Symbol> s;
  for (const auto& x : j) s.push_back(symbol_of(x));
  return Alphabet(std::move(s));
}

Json alphabet_json(const Alphabet& a) { return Json(a.symbols()); }

}  // namespace

Json to_json(const DistributionPair& pair) {
  return {{"alphabet", alphabet_json(pair.alphabet())},
          {"p0", std::vector<double>(pair.p0().begin(), pair.p0().end())},
          {"p1", std::vector<double>(pair.p1().begin(), pair.p1().end())}};
}

DistributionPair pair_from_json(const Json& j) {
  return guarded("pair", [&] {
    return DistributionPair(alphabet_of(j.at("alphabet")), j.at("p0").get<std::vector<double>>(),
                            j.at("p1").get<std::vector<double>>());
  });
}

Json to_json(const TransmissionFunction& tf) {
  Json inputs = Json::array();
  for (const auto& a : tf.inputs()) inputs.push_back(alphabet_json(a));
  Json map = Json::object();
  for (std::size_t flat = 0; flat < tf.domain_size(); ++flat) {
    const auto tuple = tf.tuple_at(flat);
    std::string key;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i) key += ',';
      key += tf.inputs()[i][tuple[i]];
    }
    map[key] = tf.output()[tf.table()[flat]];
  }
  return {{"arity", tf.arity()}, {"inputs", inputs}, {"output", alphabet_json(tf.output())}, {"map", map}};
}

TransmissionFunction transmission_from_json(const Json& j) {
  return guarded("transmission function", [&] {
    const auto arity = j.at("arity").get<std::size_t>();
    std::vector<Alphabet> inputs;
    for (const auto& a : j.at("inputs")) inputs.push_back(alphabet_of(a));
    const Alphabet output = alphabet_of(j.at("output"));
    std::size_t domain = 1;
    for (const auto& a : inputs) domain *= a.size();
    std::vector<std::size_t> table(domain);
    std::vector<bool> seen(domain, false);
    for (const auto& [key, value] : j.at("map").items()) {
      std::vector<std::size_t> tuple;
      std::stringstream ss(key);
      std::string part;
      std::size_t i = 0;
      while (std::getline(ss, part, ',')) {
        if (i >= inputs.size()) throw InvalidParams("map key '" + key + "' has too many entries");
        tuple.push_back(inputs[i++].index_of(part));
      }
      if (tuple.size() != inputs.size()) throw InvalidParams("map key '" + key + "' has too few entries");
      std::size_t flat = 0;
      for (std::size_t k = 0; k < tuple.size(); ++k) flat = flat * inputs[k].size() + tuple[k];
      table[flat] = output.index_of(symbol_of(value));
      seen[flat] = true;
    }
    for (bool s : seen) {
      if (!s) throw InvalidParams("map is not defined on every input tuple");
    }
    return TransmissionFunction(arity, std::move(inputs), output, std::move(table));
  });
}

Json to_json(const Tree& tree) {
  Json parents = Json::array();
  for (const auto& p : tree.parents()) parents.push_back(p ? Json(*p) : Json(nullptr));
  return {{"n", tree.size()}, {"root", 0}, {"parents", parents}};
}

Tree tree_from_json(const Json& j) {
  return guarded("tree", [&] {
    if (j.contains("root") && j.at("root").get<long long>() != 0) throw InvalidParams("root must be 0");
    std::vector<std::optional<NodeId>> parents;
    for (const auto& p : j.at("parents")) {
      if (p.is_null()) {
        parents.push_back(std::nullopt);
      } else {
        const auto v = p.get<long long>();
        if (v < 0) throw InvalidParams("negative parent id");
        parents.push_back(static_cast<NodeId>(v));
      }
    }
    if (j.contains("n") && j.at("n").get<std::size_t>() != parents.size()) {
      throw InvalidParams("'n' disagrees with the parent list");
    }
    return Tree(std::move(parents));
  });
}

Json to_json(const Strategy& s) {
  Json j{{"gamma", to_json(s.leaf_rule())}, {"thresholds", s.thresholds()}, {"llr_step", s.llr_step()}};
  j["root_threshold"] = s.root_override() ? Json(*s.root_override()) : Json(nullptr);
  return j;
}

Strategy strategy_from_json(const Json& j, const Tree& tree) {
  return guarded("strategy", [&] {
    Strategy s(tree, transmission_from_json(j.at("gamma")), j.at("thresholds").get<std::vector<double>>());
    if (j.contains("root_threshold") && !j.at("root_threshold").is_null()) {
      s = s.with_root_threshold(j.at("root_threshold").get<double>());
    }
    if (j.contains("llr_step")) s = s.with_llr_step(j.at("llr_step").get<double>());
    return s;
  });
}

TreeFamily family_from_json(const Json& j) {
  return guarded("family", [&] {
    TreeFamily f;
    f.kind = parse_family_kind(j.at("kind").get<std::string>());
    if (j.contains("params")) {
      for (const auto& [key, value] : j.at("params").items()) {
        if (key == "tree") {
          f.fixed = tree_from_json(value);
        } else {
          f.params[key] = value.get<double>();
        }
      }
    }
    f.validate();
    return f;
  });
}

Json to_json(const TreeFamily& family) {
  Json params = Json::object();
  for (const auto& [k, v] : family.params) params[k] = v;
  if (family.fixed) params["tree"] = to_json(*family.fixed);
  return {{"kind", family_kind_name(family.kind)}, {"params", params}};
}

Json to_json(const TreeStats& s) {
  return {{"n", s.n},
          {"height", s.height},
          {"leaves", s.leaves},
          {"A_size", s.a_size},
          {"B_size", s.b_size},
          {"N", s.small_threshold},
          {"F_N", s.small},
          {"q_N", s.q},
          {"leaf_fraction", s.leaf_fraction},
          {"F_count_bound_holds", s.count_bound_holds}};
}

Json to_json(const ZEstimate& z) {
  Json q = Json::object();
  for (const auto& [n, seq] : z.q) q[std::to_string(n)] = seq;
  return {{"grid", z.grid},       {"leaf_fraction", z.leaf_fraction}, {"q_N", q},
          {"z_estimate", z.z},    {"z_to_one", z.z_to_one},           {"q_to_zero", z.q_to_zero},
          {"consistent", z.consistent}};
}

std::string z_estimate_csv(const ZEstimate& z) {
  std::ostringstream os;
  os << "m,leaf_fraction";
  for (const auto& [n, seq] : z.q) os << ",q_" << n;
  os << '\n';
  for (std::size_t i = 0; i < z.grid.size(); ++i) {
    os << z.grid[i] << ',' << format_number(z.leaf_fraction[i]);
    for (const auto& [n, seq] : z.q) os << ',' << format_number(seq[i]);
    os << '\n';
  }
  return os.str();
}

Json to_json(const RateTable& table) {
  Json levels = Json::array();
  for (const auto& l : table.levels) {
    levels.push_back({{"level", l.level},
                      {"threshold", l.threshold},
                      {"rate0", l.rate0},
                      {"rate1", l.rate1},
                      {"numeric0", l.numeric0},
                      {"numeric1", l.numeric1},
                      {"argmax0", l.argmax0},
                      {"argmax1", l.argmax1}});
  }
  return {{"message_pair", to_json(table.message_pair)},
          {"d01", table.d01},
          {"d10", table.d10},
          {"thresholds", table.thresholds},
          {"levels", levels}};
}

Json to_json(const ErrorEstimate& e) {
  Json j{{"method", e.method == Method::Exact ? "exact" : "monte_carlo"},
         {"type_I", e.type_I},
         {"type_II", e.type_II}};
  if (e.method == Method::Exact) {
    j["log_type_I"] = std::isfinite(e.log_type_I) ? Json(e.log_type_I) : Json(nullptr);
    j["log_type_II"] = std::isfinite(e.log_type_II) ? Json(e.log_type_II) : Json(nullptr);
  } else {
    j["trials"] = e.trials;
    j["std_error_I"] = e.std_error_I;
    j["std_error_II"] = e.std_error_II;
  }
  return j;
}

std::string fit_csv(const ExponentFit& fit) {
  std::ostringstream os;
  os << "n,l_f,alpha,type_I,type_II," << (fit.per_node ? "log_beta_over_n" : "log_beta_over_lf") << '\n';
  for (const auto& p : fit.points) {
    os << p.n << ',' << p.leaves << ',' << format_number(p.alpha) << ',' << format_number(p.type_I) << ','
       << format_number(p.type_II) << ',' << format_number(p.normalized_log_beta) << '\n';
  }
  return os.str();
}

Json fit_summary(const ExponentFit& fit, double target, double tolerance) {
  const bool pass = std::abs(fit.fit.slope - target) <= tolerance;
  return {{"slope", fit.fit.slope},
          {"intercept", fit.fit.intercept},
          {"r2", fit.fit.r2},
          {"target_exponent", target},
          {"tolerance", tolerance},
          {"regressor", fit.per_node ? "n" : "l_f"},
          {"grid_span_ok", fit.span_ok},
          {"verdict", pass ? "pass" : "fail"}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidParams("cannot parse '" + path + "': " + e.what());
  }
}

}  // namespace treedet
