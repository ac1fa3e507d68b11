#pragma once

#include <string>
#include <string_view>

#include "fdn/model.hpp"

namespace fdn {

/// Accepts a bare number (seconds) or a suffixed string: "500ms", "600s", "10m", "1h".
double parse_duration(std::string_view text);

/// Parses a scenario document (test_name, test_instances, policy, injections, ...).
/// Defaults: sampling interval 10 s, collection duration 1200 s.
/// Throws ValidationError.
ScenarioConfig parse_scenario(std::string_view document);

std::string serialize_scenario(const ScenarioConfig& scenario);

/// Structural checks that do not need the catalog.
void validate_scenario(const ScenarioConfig& scenario);

/// Checks an injection plan against the collection window and fail/recover ordering.
void validate_injections(const InjectionPlan& plan, double collection_duration_s);

}  // namespace fdn
