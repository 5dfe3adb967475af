#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "geonet/cascade.hpp"
#include "geonet/experiments.hpp"
#include "geonet/failure.hpp"
#include "geonet/graph.hpp"
#include "geonet/theory.hpp"

namespace geonet::io {

using nlohmann::json;

/// Thrown for malformed documents; the message names the offending field.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph documents: {region:{width,height,boundary}, radius, points:[[x,y],...]}.
// Adjacency is rebuilt on load and never written.
json graph_to_json(const SpatialGraph& graph);
SpatialGraph graph_from_json(const json& doc, std::vector<std::string>* warnings = nullptr);
void save_graph(const SpatialGraph& graph, const std::string& path, const json& meta = {});
SpatialGraph load_graph(const std::string& path, std::vector<std::string>* warnings = nullptr);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

json region_to_json(const Region& region);
Region region_from_json(const json& doc, const std::string& where,
                        std::vector<std::string>* warnings = nullptr);

json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const json& doc);

json estimate_to_json(const PointEstimate& e);
json cascade_record_to_json(const CascadeTrialRecord& r);
json sweep_to_json(const SweepResult& result);
/// CSV with '#' metadata lines followed by one row per grid point.
std::string sweep_to_csv(const SweepResult& result);

json cascade_state_to_json(const CascadeState& state);
json failure_outcome_to_json(const FailureOutcome& outcome, const SpatialGraph& graph);
json condition_to_json(const theory::ConditionResult& result);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// {"tool":"geonet","version":...}
json tool_meta();

}  // namespace geonet::io
