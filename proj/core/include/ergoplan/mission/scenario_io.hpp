#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ergoplan/mission/scenario.hpp"

namespace ergoplan::mission {

/// Parses and validates a scenario document (JSON). Syntax errors raise
/// ParseError with line and column; semantic errors raise InvalidScenario
/// naming the offending key.
Scenario parse_scenario(std::string_view json_text);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace ergoplan::mission
