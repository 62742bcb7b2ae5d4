#pragma once

// JSON documents for plans, baselines, placements and verification reports.
// Export is canonical: import(export(x)) == x and re-exporting reproduces
// the same bytes.

#include <string>
#include <string_view>

#include <json.hpp>

#include "mimocc/scheme.hpp"
#include "mimocc/verifier.hpp"

namespace mimocc {

nlohmann::json config_to_json(const NetworkConfig& config);
NetworkConfig config_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const DeliveryPlan& plan);
DeliveryPlan plan_from_json(const nlohmann::json& j);
std::string export_plan(const DeliveryPlan& plan);
DeliveryPlan import_plan(std::string_view text);

nlohmann::json baseline_to_json(const BaselineMisoPlan& baseline);
BaselineMisoPlan baseline_from_json(const nlohmann::json& j);
std::string export_baseline(const BaselineMisoPlan& baseline);
BaselineMisoPlan import_baseline(std::string_view text);

nlohmann::json placement_to_json(const CachePlacement& placement);
CachePlacement placement_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const DecodabilityReport& report, const DeliveryPlan& plan);
std::string report_table(const DecodabilityReport& report, const DeliveryPlan& plan);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace mimocc
