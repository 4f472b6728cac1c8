#include "treedet/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "treedet/error.hpp"
#include "treedet/evaluate.hpp"
#include "treedet/experiments.hpp"
#include "treedet/exponent_fit.hpp"
#include "treedet/families.hpp"
#include "treedet/rates.hpp"
#include "treedet/serialization.hpp"
#include "treedet/strategy.hpp"

namespace treedet {

namespace {

constexpr const char* kSchema = R"(Input formats (JSON):
  pair      {"alphabet": ["0","1"], "p0": [0.75,0.25], "p1": [0.25,0.75]}
  tree      {"n": 4, "root": 0, "parents": [null, 0, 0, 0]}
  map       {"arity": 0, "inputs": [["0","1"]], "output": ["0","1"], "map": {"0": "0", "1": "1"}}
  strategy  {"gamma": <map>, "thresholds": [t_1, ..., t_h], "root_threshold": t or null, "llr_step": 0}
  family    {"kind": "Parallel|ChainPlusLeaves|TwoRelay|WideUniform|IncreasingLeaves|Explicit",
             "params": {...}}
  fit config {"pair": <pair> or "path.json", "family": <family>,
              "strategy": {"recipe": "simple", "epsilon": 0.02, "llr_step": 0}
                       or {"recipe": "thresholds", "gamma": <map> or "identity", "thresholds": [...]},
              "alpha": 0.25, "grid": [m1, m2, ...], "regressor": "l_f" or "n",
              "target": g (optional), "tolerance": 0.05}
)";

struct Output {
  std::string dir = ".";
  bool timestamp = true;

  std::filesystem::path path(const std::string& name) const {
    std::filesystem::create_directories(dir);
    return std::filesystem::path(dir) / name;
  }

  void write_csv(const std::string& name, const std::string& body) const {
    std::ofstream out(path(name));
    if (timestamp) {
      const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      out << "# generated " << buf << '\n';
    }
    out << body;
  }

  void write_json(const std::string& name, const Json& j) const {
    std::ofstream out(path(name));
    out << j.dump(2) << '\n';
  }
};

DistributionPair load_pair(const Json& j) {
  if (j.is_string()) return pair_from_json(read_json_file(j.get<std::string>()));
  return pair_from_json(j);
}

std::vector<TransmissionFunction> load_family(const std::string& spec, const DistributionPair& pair) {
  if (spec == "all-binary") return all_binary_quantizers(pair.alphabet());
  if (spec == "identity") return {TransmissionFunction::identity(pair.alphabet())};
  const Json j = read_json_file(spec);
  std::vector<TransmissionFunction> out;
  if (j.is_array()) {
    for (const auto& x : j) out.push_back(transmission_from_json(x));
  } else {
    out.push_back(transmission_from_json(j));
  }
  if (out.empty()) throw InvalidParams("quantizer family file is empty");
  return out;
}

int cmd_exponent(const Output& o, const std::string& pair_file, const std::string& family_spec, std::size_t k) {
  const auto pair = load_pair(pair_file);
  const auto family = load_family(family_spec, pair);
  const auto best = parallel_exponent(pair, family);
  const auto report = validate_assumptions(pair, family);
  Json j{{"g_p_star", best.g_p_star},
         {"argmax_index", best.index},
         {"gamma", to_json(family[best.index])},
         {"assumptions",
          {{"equivalent", report.equivalent},
           {"informative_quantizer", report.informative_quantizer},
           {"llr_second_moment", report.llr_second_moment},
           {"bound_constant", report.bound_constant}}}};
  if (k >= 2) {
    const Alphabet messages = family[best.index].output();
    const auto relays =
        enumerate_quantizers(std::vector<Alphabet>(k, messages), Alphabet::binary(), k);
    const auto loss = fusion_loss_constant(pair, family, relays, k);
    j["fusion_loss"] = {{"k", k},
                        {"constant", loss.constant},
                        {"holds", loss.holds},
                        {"relay", to_json(relays[loss.relay_index])},
                        {"leaf_indices", loss.leaf_indices}};
  }
  o.write_json("exponent.json", j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_rates(const Output& o, const std::string& pair_file, const std::string& gamma_spec,
              const std::vector<double>& thresholds, const std::string& tree_file, long n_floor) {
  const auto pair = load_pair(pair_file);
  TransmissionFunction gamma = TransmissionFunction::identity(pair.alphabet());
  if (gamma_spec == "best") {
    const auto family = all_binary_quantizers(pair.alphabet());
    gamma = family[parallel_exponent(pair, family).index];
  } else if (gamma_spec != "identity") {
    gamma = transmission_from_json(read_json_file(gamma_spec));
  }
  const auto table = rate_table(pair, gamma, thresholds);
  Json j = to_json(table);
  j["gamma"] = to_json(gamma);
  if (!tree_file.empty()) {
    const Tree tree = tree_from_json(read_json_file(tree_file));
    std::optional<std::size_t> floor;
    if (n_floor > 0) floor = static_cast<std::size_t>(n_floor);
    o.write_csv("bounds.csv", bound_report_csv(chernoff_bound_report(tree, table, floor)));
  }
  o.write_json("rates.json", j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_analyze(const Output& o, const std::string& tree_file, const std::string& family_file,
                const std::vector<std::size_t>& grid, const std::vector<std::size_t>& ns) {
  Json j;
  if (!tree_file.empty()) {
    const Tree tree = tree_from_json(read_json_file(tree_file));
    Json per_n = Json::array();
    for (std::size_t n : ns) per_n.push_back(to_json(analyze_tree(tree, n)));
    j["tree"] = per_n;
  }
  if (!family_file.empty()) {
    if (grid.empty()) throw InvalidParams("--grid is required with --family");
    const auto family = family_from_json(read_json_file(family_file));
    const auto z = estimate_z(family, grid, ns);
    j["family"] = to_json(z);
    o.write_csv("q_curve.csv", z_estimate_csv(z));
  }
  if (j.is_null()) throw InvalidParams("analyze needs --tree or --family");
  o.write_json("analyze.json", j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_uniformize(const Output& o, const std::string& tree_file, const std::string& out_file) {
  const Tree tree = tree_from_json(read_json_file(tree_file));
  const auto u = uniformize(tree);
  const auto path = out_file.empty() ? o.path("uniform_tree.json") : std::filesystem::path(out_file);
  std::ofstream out(path);
  out << to_json(u.tree).dump() << '\n';
  std::cout << "height " << u.tree.height() << ", leaves " << u.tree.leaf_total() << ", nodes "
            << u.tree.size() << " -> " << path.string() << '\n';
  return 0;
}

int cmd_simulate(const Output& o, const std::string& pair_file, const std::string& tree_file,
                 const std::string& strategy_file, double epsilon, double alpha, const std::string& method,
                 std::size_t trials, std::uint64_t seed, double llr_step) {
  const auto pair = load_pair(pair_file);
  const Tree tree = tree_from_json(read_json_file(tree_file));
  std::optional<Strategy> s;
  if (!strategy_file.empty()) {
    s = strategy_from_json(read_json_file(strategy_file), uniformize(tree).tree);
  } else {
    s = simple_strategy(tree, pair, all_binary_quantizers(pair.alphabet()), epsilon).strategy;
  }
  if (llr_step > 0.0) s = s->with_llr_step(llr_step);
  if (alpha > 0.0) s = calibrate_root_exact(*s, pair, alpha);
  Json j{{"strategy", to_json(*s)}};
  if (method == "exact" || method == "both") j["exact"] = to_json(exact_error_probs(*s, pair));
  if (method == "mc" || method == "both") {
    j["monte_carlo"] = to_json(monte_carlo_error(*s, pair, trials, seed));
    j["seed"] = seed;
  }
  o.write_json("simulate.json", j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_fit(Output o, const std::string& config_file) {
  const Json cfg = read_json_file(config_file);
  const auto pair = load_pair(cfg.at("pair"));
  const auto family = family_from_json(cfg.at("family"));
  const Json& sj = cfg.at("strategy");
  StrategyRecipe recipe;
  const std::string name = sj.value("recipe", std::string("simple"));
  if (name == "simple") {
    recipe.epsilon = sj.value("epsilon", 0.02);
  } else if (name == "thresholds") {
    recipe.kind = StrategyRecipe::Kind::Thresholds;
    const Json g = sj.value("gamma", Json("identity"));
    recipe.gamma = g.is_string() && g.get<std::string>() == "identity" ? TransmissionFunction::identity(pair.alphabet())
                                                                         : transmission_from_json(g);
    recipe.thresholds = sj.at("thresholds").get<std::vector<double>>();
  } else {
    throw InvalidParams("unknown recipe '" + name + "'");
  }
  recipe.llr_step = sj.value("llr_step", 0.0);
  const double alpha = cfg.value("alpha", 0.25);
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParams("alpha must lie in (0, 1)");
  const auto grid = cfg.at("grid").get<std::vector<std::size_t>>();
  const bool per_node = cfg.value("regressor", std::string("l_f")) == "n";
  if (cfg.contains("out") && o.dir == ".") o.dir = cfg.at("out").get<std::string>();
  const auto fit = empirical_exponent(family, recipe, pair, grid, alpha, per_node);
  double target = 0.0;
  if (cfg.contains("target")) {
    target = cfg.at("target").get<double>();
  } else {
    target = parallel_exponent(pair, all_binary_quantizers(pair.alphabet())).g_p_star;
  }
  const Json summary = fit_summary(fit, target, cfg.value("tolerance", 0.05));
  o.write_csv("fit.csv", fit_csv(fit));
  o.write_json("fit.json", summary);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_reproduce(const Output& o, int id) {
  const auto bundle = reproduce_example(id);
  o.write_json("example" + std::to_string(id) + ".json", bundle.summary);
  for (const auto& [name, body] : bundle.files) o.write_csv(name, body);
  for (const auto& v : bundle.verdicts) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.name;
    if (!v.detail.empty()) std::cout << ": " << v.detail;
    std::cout << '\n';
  }
  return bundle.all_pass() ? 0 : 3;
}

}  // namespace

int run_command(int argc, char** argv) {
  CLI::App app{"Decentralized detection on bounded-height trees"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  bool no_timestamp = false;
  app.add_option("--out", out.dir, "Output directory")->capture_default_str();
  app.add_flag("--no-timestamp", no_timestamp, "Omit the generated-at line from CSV files");
  app.footer(kSchema);

  std::string pair_file, family_spec = "all-binary", tree_file, strategy_file, gamma_spec = "best",
                         config_file, out_file, family_file, method = "exact";
  std::size_t k = 2, trials = 100000;
  std::uint64_t seed = 1;
  long n_floor = 0;
  double epsilon = 0.02, alpha = 0.0, llr_step = 0.0;
  int example = 0;
  std::vector<double> thresholds;
  std::vector<std::size_t> grid, ns{2, 5, 10};

  auto* exp = app.add_subcommand("exponent", "Parallel exponent and fusion-loss constant");
  exp->add_option("--pair", pair_file, "Pair JSON file")->required();
  exp->add_option("--family", family_spec, "all-binary, identity, or a JSON file of maps")->capture_default_str();
  exp->add_option("--k", k, "Relay arity for the fusion-loss constant (0 skips)")->capture_default_str();

  auto* rates = app.add_subcommand("rates", "Rate table and per-node error bounds");
  rates->add_option("--pair", pair_file, "Pair JSON file")->required();
  rates->add_option("--gamma", gamma_spec, "best, identity, or a map JSON file")->capture_default_str();
  rates->add_option("--thresholds", thresholds, "Level thresholds t_1,...,t_h")->required()->delimiter(',');
  rates->add_option("--tree", tree_file, "Uniform tree JSON for the bound report");
  rates->add_option("--n-floor", n_floor, "Leaf floor for the root bounds");

  auto* analyze = app.add_subcommand("analyze", "Tree statistics and leaf-fraction curves");
  analyze->add_option("--tree", tree_file, "Tree JSON file");
  analyze->add_option("--family", family_file, "Family JSON file");
  analyze->add_option("--grid", grid, "Family sizes")->delimiter(',');
  analyze->add_option("--N", ns, "Small-subtree thresholds")->delimiter(',')->capture_default_str();

  auto* uni = app.add_subcommand("uniformize", "Make every leaf-to-root path the same length");
  uni->add_option("--tree", tree_file, "Tree JSON file")->required();
  uni->add_option("--output", out_file, "Output tree file (default <out>/uniform_tree.json)");

  auto* sim = app.add_subcommand("simulate", "Exact and Monte Carlo error probabilities");
  sim->add_option("--pair", pair_file, "Pair JSON file")->required();
  sim->add_option("--tree", tree_file, "Tree JSON file")->required();
  sim->add_option("--strategy", strategy_file, "Strategy JSON (default: simple recipe)");
  sim->add_option("--epsilon", epsilon, "Margin of the simple recipe")->capture_default_str();
  sim->add_option("--alpha", alpha, "Calibrate the root to this level (0 keeps the threshold)");
  sim->add_option("--method", method, "exact, mc or both")
      ->check(CLI::IsMember({"exact", "mc", "both"}))
      ->capture_default_str();
  sim->add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
  sim->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
  sim->add_option("--llr-step", llr_step, "Receiver LLR lattice step (0 = exact)");

  auto* fit = app.add_subcommand("fit", "Empirical error exponent over a family");
  fit->add_option("--config", config_file, "Experiment config JSON")->required();

  auto* rep = app.add_subcommand("reproduce", "Reproduce a worked example");
  rep->add_option("--example", example, "Example id")->required()->check(CLI::Range(1, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << kSchema;
    return 1;
  }
  out.timestamp = !no_timestamp;

  try {
    if (*exp) return cmd_exponent(out, pair_file, family_spec, k);
    if (*rates) return cmd_rates(out, pair_file, gamma_spec, thresholds, tree_file, n_floor);
    if (*analyze) return cmd_analyze(out, tree_file, family_file, grid, ns);
    if (*uni) return cmd_uniformize(out, tree_file, out_file);
    if (*sim) return cmd_simulate(out, pair_file, tree_file, strategy_file, epsilon, alpha, method, trials, seed, llr_step);
    if (*fit) return cmd_fit(out, config_file);
    if (*rep) return cmd_reproduce(out, example);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const Json::exception& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace treedet
