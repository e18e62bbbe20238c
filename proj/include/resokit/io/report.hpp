#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace resokit::io {

using json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "resokit.report/1";
inline constexpr const char* tool_version = "0.1.0";

struct Provenance {
    std::string command;
    std::optional<std::string> config_hash;
    std::vector<std::string> inputs;  // paths; content hashes are added on assembly
    std::optional<std::uint64_t> seed;
};

/// Wraps pipeline results in the versioned report envelope. The timestamp is
/// the only field that varies between identical runs and can be omitted.
json make_report(const Provenance& provenance, json results, const std::vector<std::string>& warnings,
                 bool timestamp = true);

/// JSON text with two-space indent and a trailing newline.
std::string dump_report(const json& report);

/// UTC time in ISO 8601.
std::string utc_timestamp();

}  // namespace resokit::io
