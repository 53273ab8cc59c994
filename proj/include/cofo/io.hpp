#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cofo/clustering.hpp"
#include "cofo/metrics.hpp"
#include "cofo/scenarios.hpp"
#include "cofo/solver.hpp"
#include "cofo/stats.hpp"
#include "cofo/types.hpp"

namespace cofo::io {

using json = nlohmann::ordered_json;

json to_json(const TeamSpec& team);
TeamSpec team_from_json(const json& j);

json to_json(const DemonstrationSet& demos);
DemonstrationSet demonstration_set_from_json(const json& j);

json to_json(const StrategyLibrary& lib);
StrategyLibrary library_from_json(const json& j);

json to_json(const AllocationResult& result);
AllocationResult allocation_from_json(const json& j);

json to_json(const GroundTruthScenario& scenario);
GroundTruthScenario scenario_from_json(const json& j);

json to_json(const StatTestResult& result, const std::vector<std::string>& group_names);

std::string dendrogram_csv(const std::vector<MergeStep>& steps);
std::string trace_csv(const std::vector<NodeTraceRow>& rows);

std::string results_csv(const std::vector<EvaluationRecord>& rows, bool zero_wall = false);
std::vector<EvaluationRecord> results_from_csv(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

}  // namespace cofo::io
