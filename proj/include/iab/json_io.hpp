#pragma once

#include <string>

#include <json.hpp>

#include "iab/graph.hpp"
#include "iab/metrics.hpp"
#include "iab/scenario.hpp"

namespace iab {

/// {nodes:[{id,kind,x,y,z}], edges:[{src,dst,capacity_bps}]}
nlohmann::json graph_to_json(const MeasurementsGraph& g);
MeasurementsGraph graph_from_json(const nlohmann::json& j);

/// {active:[ids], parent:{node:parent}, paths:{source_ue:[[src,dst],...]}}
nlohmann::json tree_to_json(const MeasurementsGraph& g, const IabTree& tree,
                            const std::vector<Commodity>& commodities);

/// Rebuilds a tree from its path lists; parent/active/edge_use are derived.
/// Throws std::runtime_error when a path references a missing edge or a
/// commodity source has no path entry.
IabTree tree_from_json(const MeasurementsGraph& g, const nlohmann::json& j,
                       const std::vector<Commodity>& commodities);

/// Every field optional, defaulting to the built-in values; unknown keys are
/// rejected. Throws std::runtime_error with the offending key.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

nlohmann::json capacity_report_to_json(const CapacityReport& report);

/// FNV-1a hash of the canonical config serialization, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace iab
