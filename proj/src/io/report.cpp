#include "resokit/io/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "resokit/io/config.hpp"
#include "resokit/io/trace_io.hpp"

namespace resokit::io {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json make_report(const Provenance& p, json results, const std::vector<std::string>& warnings, bool timestamp) {
    json r;
    r["schema"] = report_schema;
    r["tool"] = {{"name", "resokit"}, {"version", tool_version}};
    r["command"] = p.command;
    if (timestamp) r["generated_at"] = utc_timestamp();
    json prov = json::object();
    if (p.config_hash) prov["config_hash"] = *p.config_hash;
    json inputs = json::array();
    for (const auto& path : p.inputs) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(read_file(path))));
        inputs.push_back({{"path", path}, {"fnv1a64", buf}});
    }
    prov["inputs"] = inputs;
    if (p.seed) prov["seed"] = *p.seed;
    r["provenance"] = prov;
    r["results"] = std::move(results);
    r["warnings"] = warnings;
    return r;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

}  // namespace resokit::io
