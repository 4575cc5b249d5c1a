#pragma once

#include <string>

#include <json.hpp>

#include "kqbh/verify.hpp"

// JSON form of a suite report:
// {schema_version, suite, seed, config{samples, tol_exact, tol_fd}, checks[...],
//  summary{total, passed, failed, flagged}, wall_time}.
// Non-finite residuals are written as null and read back as +inf.

namespace kqbh {

inline constexpr int kSchemaVersion = 1;

nlohmann::ordered_json report_to_json(const SuiteReport& rep);
SuiteReport report_from_json(const nlohmann::ordered_json& j);

std::string serialize(const SuiteReport& rep);
/// Throws std::runtime_error on malformed input or a schema version mismatch.
SuiteReport parse_report(const std::string& text);

nlohmann::ordered_json point_to_json(const PhasePoint& p);
PhasePoint point_from_json(const nlohmann::ordered_json& j);

}  // namespace kqbh
