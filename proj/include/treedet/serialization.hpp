#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "treedet/channels.hpp"
#include "treedet/evaluate.hpp"
#include "treedet/exponent_fit.hpp"
#include "treedet/families.hpp"
#include "treedet/hypothesis.hpp"
#include "treedet/rates.hpp"
#include "treedet/strategy.hpp"
#include "treedet/topology.hpp"

namespace treedet {

using Json = nlohmann::json;

/// Fixed "%.10g" rendering used in every CSV.
std::string format_number(double x);

Json to_json(const DistributionPair& pair);
DistributionPair pair_from_json(const Json& j);

Json to_json(const TransmissionFunction& tf);
TransmissionFunction transmission_from_json(const Json& j);

Json to_json(const Tree& tree);
Tree tree_from_json(const Json& j);

Json to_json(const Strategy& s);
/// The tree is supplied separately; the JSON holds the rules only.
Strategy strategy_from_json(const Json& j, const Tree& tree);

/// {"kind": ..., "params": {...}}; Explicit families carry "tree" in params.
TreeFamily family_from_json(const Json& j);
Json to_json(const TreeFamily& family);

Json to_json(const TreeStats& stats);
Json to_json(const ZEstimate& z);
std::string z_estimate_csv(const ZEstimate& z);

Json to_json(const RateTable& table);
Json to_json(const ErrorEstimate& e);

std::string fit_csv(const ExponentFit& fit);
Json fit_summary(const ExponentFit& fit, double target, double tolerance);

/// Reads and parses a JSON file; throws InvalidParams on I/O or syntax errors.
Json read_json_file(const std::string& path);

}  // namespace treedet
