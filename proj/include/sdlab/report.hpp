#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace sdlab::report {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Deterministic serialization: insertion-ordered keys, two-space indent, floats as %.17g
/// (always with a decimal point or exponent), non-finite floats as null.
std::string dump(const Json& value);

/// Uniform wrapper for every command result.
struct ReportEnvelope {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  Json convention;  // string or null
  Json error_estimates = Json::object();
  Json cache;       // object or null
  std::string version{kToolVersion};
};

Json to_json(const ReportEnvelope& env);
ReportEnvelope envelope_from_json(const Json& j);
std::string serialize(const ReportEnvelope& env);
/// Throws a parse error on malformed text.
ReportEnvelope parse_report(std::string_view text);

}  // namespace sdlab::report
