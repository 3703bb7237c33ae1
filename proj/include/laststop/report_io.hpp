#pragma once

#include <string>

#include <json.hpp>

#include "laststop/asymptotics.hpp"
#include "laststop/goldens.hpp"
#include "laststop/rules.hpp"
#include "laststop/simulate.hpp"

namespace laststop {

// JSON encodings with stable key order; doubles serialize at full precision
// so every record re-parses to equal values.

nlohmann::ordered_json to_json(const ThresholdResult& r);
nlohmann::ordered_json to_json(const EpsilonGap& g);
nlohmann::ordered_json to_json(const SimulationReport& r);
nlohmann::ordered_json to_json(const PairedSimulation& p);
nlohmann::ordered_json to_json(const ModeCertificate& c);
nlohmann::ordered_json to_json(const TvReport& t);
nlohmann::ordered_json to_json(const GoldenOutcome& o);

ThresholdResult threshold_from_json(const nlohmann::json& j);
SimulationReport simulation_from_json(const nlohmann::json& j);

Rule rule_from_name(const std::string& name);
const char* verdict_name(ModeVerdict v);

/// RFC-4180 quoting: wraps the field in quotes when it contains a comma,
/// quote or newline, doubling embedded quotes.
std::string csv_escape(const std::string& field);

/// Fixed six decimal places, matching the reference tables.
std::string format_fixed6(double value);

}  // namespace laststop
