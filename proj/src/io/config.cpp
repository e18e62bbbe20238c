#include "resokit/io/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"

namespace resokit::io {

namespace {

struct UnitRow {
    const char* name;
    double factor;
    Dimension dimension;
};

// Canonical SI spelling per dimension, used by the emitter.
const char* canonical_unit(Dimension d) {
    switch (d) {
        case Dimension::dimensionless: return "";
        case Dimension::frequency: return "Hz";
        case Dimension::time: return "s";
        case Dimension::length: return "m";
        case Dimension::inductance: return "H";
        case Dimension::sheet_inductance: return "H/sq";
        case Dimension::capacitance: return "F";
        case Dimension::capacitance_per_length: return "F/m";
        case Dimension::resistance: return "Ohm";
        case Dimension::sheet_resistance: return "Ohm/sq";
        case Dimension::resistivity: return "Ohm m";
        case Dimension::admittance_per_length: return "1/(Ohm m)";
        case Dimension::power: return "W";
        case Dimension::temperature: return "K";
        case Dimension::energy: return "J";
        case Dimension::angle: return "rad";
        case Dimension::kerr: return "Hz/photon";
        case Dimension::ratio_db: return "dB";
    }
    return "";
}

const std::vector<UnitRow>& unit_table() {
    using D = Dimension;
    static const std::vector<UnitRow> rows = {
        {"Hz", 1.0, D::frequency}, {"kHz", 1e3, D::frequency}, {"MHz", 1e6, D::frequency},
        {"GHz", 1e9, D::frequency},
        {"s", 1.0, D::time}, {"ms", 1e-3, D::time}, {"us", 1e-6, D::time}, {"µs", 1e-6, D::time},
        {"ns", 1e-9, D::time},
        {"m", 1.0, D::length}, {"mm", 1e-3, D::length}, {"um", 1e-6, D::length}, {"µm", 1e-6, D::length},
        {"nm", 1e-9, D::length},
        {"H", 1.0, D::inductance}, {"nH", 1e-9, D::inductance}, {"pH", 1e-12, D::inductance},
        {"H/sq", 1.0, D::sheet_inductance}, {"nH/sq", 1e-9, D::sheet_inductance},
        {"pH/sq", 1e-12, D::sheet_inductance},
        {"F", 1.0, D::capacitance}, {"pF", 1e-12, D::capacitance}, {"fF", 1e-15, D::capacitance},
        {"F/m", 1.0, D::capacitance_per_length}, {"aF/um", 1e-12, D::capacitance_per_length},
        {"aF/µm", 1e-12, D::capacitance_per_length}, {"pF/m", 1e-12, D::capacitance_per_length},
        {"Ohm", 1.0, D::resistance}, {"kOhm", 1e3, D::resistance}, {"uOhm", 1e-6, D::resistance},
        {"µΩ", 1e-6, D::resistance}, {"Ω", 1.0, D::resistance}, {"kΩ", 1e3, D::resistance},
        {"Ohm/sq", 1.0, D::sheet_resistance}, {"Ω/sq", 1.0, D::sheet_resistance},
        {"Ohm m", 1.0, D::resistivity}, {"Ω·m", 1.0, D::resistivity}, {"uOhm cm", 1e-8, D::resistivity},
        {"µΩ·cm", 1e-8, D::resistivity}, {"µΩ cm", 1e-8, D::resistivity},
        {"1/(Ohm m)", 1.0, D::admittance_per_length}, {"(Ω·m)^-1", 1.0, D::admittance_per_length},
        {"W", 1.0, D::power}, {"mW", 1e-3, D::power}, {"dBm", 1.0, D::power},
        {"K", 1.0, D::temperature}, {"mK", 1e-3, D::temperature},
        {"J", 1.0, D::energy}, {"eV", constants::e, D::energy}, {"ueV", 1e-6 * constants::e, D::energy},
        {"µeV", 1e-6 * constants::e, D::energy},
        {"rad", 1.0, D::angle}, {"deg", constants::pi / 180.0, D::angle},
        {"Hz/photon", 1.0, D::kerr}, {"kHz/photon", 1e3, D::kerr},
        {"dB", 1.0, D::ratio_db},
    };
    return rows;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Parses a leading floating-point number; returns chars consumed or 0.
std::size_t parse_number(const std::string& s, double& out) {
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return 0;
    return static_cast<std::size_t>(end - begin);
}

Value parse_value(const std::string& raw, const std::string& where) {
    Value v;
    v.raw = raw;
    // Split on commas; every item but the last must be a bare number, the last
    // may carry the unit.
    std::vector<std::string> items;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    std::vector<double> nums;
    std::string unit;
    for (std::size_t i = 0; i < items.size(); ++i) {
        double x = 0.0;
        const std::size_t used = parse_number(items[i], x);
        if (used == 0) return v;  // text value
        const std::string rest = trim(items[i].substr(used));
        if (!rest.empty()) {
            if (i + 1 != items.size()) return v;
            if (!find_unit(rest)) {
                // A number followed by an unknown token is a unit error, not text.
                throw InputError(where + ": unknown unit '" + rest + "'");
            }
            unit = rest;
        }
        nums.push_back(x);
    }
    if (!unit.empty()) {
        for (auto& x : nums) x = to_si(x, unit, &v.dimension);
    }
    v.numbers = std::move(nums);
    v.unit = unit;
    return v;
}

}  // namespace

const char* dimension_name(Dimension d) {
    switch (d) {
        case Dimension::dimensionless: return "dimensionless";
        case Dimension::frequency: return "frequency";
        case Dimension::time: return "time";
        case Dimension::length: return "length";
        case Dimension::inductance: return "inductance";
        case Dimension::sheet_inductance: return "sheet inductance";
        case Dimension::capacitance: return "capacitance";
        case Dimension::capacitance_per_length: return "capacitance per length";
        case Dimension::resistance: return "resistance";
        case Dimension::sheet_resistance: return "sheet resistance";
        case Dimension::resistivity: return "resistivity";
        case Dimension::admittance_per_length: return "admittance per length";
        case Dimension::power: return "power";
        case Dimension::temperature: return "temperature";
        case Dimension::energy: return "energy";
        case Dimension::angle: return "angle";
        case Dimension::kerr: return "Kerr coefficient";
        case Dimension::ratio_db: return "ratio in dB";
    }
    return "?";
}

std::optional<UnitInfo> find_unit(const std::string& unit) {
    for (const auto& r : unit_table())
        if (unit == r.name) return UnitInfo{r.factor, r.dimension, canonical_unit(r.dimension)};
    return std::nullopt;
}

double to_si(double value, const std::string& unit, Dimension* dimension) {
    const auto u = find_unit(unit);
    if (!u) throw InputError("unknown unit '" + unit + "'");
    if (dimension) *dimension = u->dimension;
    if (unit == "dBm") return 1e-3 * std::pow(10.0, value / 10.0);
    return value * u->factor;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config c;
    c.origin = origin;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw InputError(where + ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw InputError(where + ": empty section name");
            c.sections_[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw InputError(where + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        std::string raw = trim(t.substr(eq + 1));
        const auto hash = raw.find(" #");
        if (hash != std::string::npos) raw = trim(raw.substr(0, hash));
        if (key.empty()) throw InputError(where + ": empty key");
        if (c.sections_[section].count(key)) throw InputError(where + ": duplicate key '" + key + "'");
        c.sections_[section][key] = parse_value(raw, where);
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::string Config::emit() const {
    std::string out;
    for (const auto& [name, entries] : sections_) {
        if (!name.empty()) out += "[" + name + "]\n";
        for (const auto& [key, v] : entries) {
            out += key + " = ";
            if (v.numeric()) {
                for (std::size_t i = 0; i < v.numbers.size(); ++i) {
                    if (i) out += ", ";
                    out += format_double(v.numbers[i]);
                }
                const char* u = canonical_unit(v.dimension);
                if (*u) out += std::string(" ") + u;
            } else {
                out += v.raw;
            }
            out += "\n";
        }
        out += "\n";
    }
    return out;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

const Value& Config::value(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
        throw InputError(origin + ": missing key '" + key + "' in section [" + section + "]");
    return s->second.at(key);
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key, Dimension expected) const {
    const auto& v = value(section, key);
    const std::string where = origin + ": [" + section + "] " + key;
    if (!v.numeric()) throw InputError(where + ": expected a number, got '" + v.raw + "'");
    if (expected != Dimension::dimensionless && v.unit.empty())
        throw InputError(where + ": missing unit (expected " + dimension_name(expected) + ")");
    if (v.dimension != expected)
        throw InputError(where + ": unit mismatch, expected " + dimension_name(expected) + " but got '" + v.unit +
                         "' (" + dimension_name(v.dimension) + ")");
    return v.numbers;
}

double Config::get(const std::string& section, const std::string& key, Dimension expected) const {
    const auto list = get_list(section, key, expected);
    if (list.size() != 1)
        throw InputError(origin + ": [" + section + "] " + key + ": expected a single value, got a list");
    return list.front();
}

std::optional<double> Config::get_opt(const std::string& section, const std::string& key, Dimension expected) const {
    if (!has(section, key)) return std::nullopt;
    return get(section, key, expected);
}

double Config::get_or(const std::string& section, const std::string& key, Dimension expected, double fallback) const {
    return get_opt(section, key, expected).value_or(fallback);
}

std::string Config::get_text(const std::string& section, const std::string& key) const { return value(section, key).raw; }

std::optional<std::string> Config::get_text_opt(const std::string& section, const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return get_text(section, key);
}

void Config::set(const std::string& section, const std::string& key, Value v) { sections_[section][key] = std::move(v); }

void Config::set_number(const std::string& section, const std::string& key, double si, Dimension d) {
    Value v;
    v.numbers = {si};
    v.dimension = d;
    v.unit = canonical_unit(d);
    v.raw = format_double(si) + (v.unit.empty() ? "" : " " + v.unit);
    set(section, key, std::move(v));
}

void Config::set_text(const std::string& section, const std::string& key, const std::string& text) {
    Value v;
    v.raw = text;
    set(section, key, std::move(v));
}

std::vector<std::string> Config::sections(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [name, _] : sections_)
        if (prefix.empty() || name.rfind(prefix + ".", 0) == 0 || name == prefix) out.push_back(name);
    return out;
}

std::string Config::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(emit())));
    return buf;
}

std::optional<std::string> default_config_path() {
    const char* p = std::getenv("RESOKIT_CONFIG");
    if (p && *p) return std::string(p);
    return std::nullopt;
}

}  // namespace resokit::io
