#pragma once

#include <string>

#include "json.hpp"
#include "rsmdp/config.hpp"
#include "rsmdp/risk.hpp"

namespace rsmdp::detail {

nlohmann::json risk_to_json(const RiskSpec& spec);
RiskSpec risk_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json config_json(const ExperimentConfig& cfg);

/// Parses `text`, mapping syntax errors to ParseError with a 1-based line number.
nlohmann::json parse_json_text(const std::string& text);
std::string read_file(const std::string& path);

} // namespace rsmdp::detail
