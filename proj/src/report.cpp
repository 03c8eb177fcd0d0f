#include "sdlab/report.hpp"

#include <cmath>
#include <cstdio>

#include "sdlab/errors.hpp"

namespace sdlab::report {

namespace {

void write_float(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  const std::string_view text(buf);
  if (text.find_first_of(".eE") == std::string_view::npos) out += ".0";
}

void write(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close_pad(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(key).dump();
        out += ": ";
        write(out, value, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write(out, value, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      write_float(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const Json& value) {
  std::string out;
  write(out, value, 0);
  out += "\n";
  return out;
}

Json to_json(const ReportEnvelope& env) {
  Json j = Json::object();
  j["command"] = env.command;
  j["inputs"] = env.inputs;
  j["results"] = env.results;
  j["convention"] = env.convention;
  j["error_estimates"] = env.error_estimates;
  j["cache"] = env.cache;
  j["version"] = env.version;
  return j;
}

ReportEnvelope envelope_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::Parse, "report is a JSON object", "report envelope must be an object");
  for (const char* key : {"command", "inputs", "results", "convention", "error_estimates", "cache", "version"})
    if (!j.contains(key)) fail(ErrorKind::Parse, "envelope field present", std::string("report lacks field '") + key + "'");
  ReportEnvelope env;
  env.command = j.at("command").get<std::string>();
  env.inputs = j.at("inputs");
  env.results = j.at("results");
  env.convention = j.at("convention");
  env.error_estimates = j.at("error_estimates");
  env.cache = j.at("cache");
  env.version = j.at("version").get<std::string>();
  return env;
}

std::string serialize(const ReportEnvelope& env) { return dump(to_json(env)); }

ReportEnvelope parse_report(std::string_view text) {
  try {
    return envelope_from_json(Json::parse(text));
  } catch (const Json::exception& e) {
    fail(ErrorKind::Parse, "well-formed report JSON", std::string("cannot parse report: ") + e.what());
  }
}

}  // namespace sdlab::report
