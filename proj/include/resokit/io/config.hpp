#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

/// Key-value configuration with explicit units:
///
///   # comment
///   [device.FO23]
///   f_r = 6.04 GHz
///   temps = 0.1, 0.2, 0.3 K
///   label = some text
///
/// Numbers (or comma-separated number lists) may carry one trailing unit;
/// values are normalized to SI on parse. Anything else is kept as text.
namespace resokit::io {

enum class Dimension {
    dimensionless,
    frequency,
    time,
    length,
    inductance,
    sheet_inductance,
    capacitance,
    capacitance_per_length,
    resistance,
    sheet_resistance,
    resistivity,
    admittance_per_length,  // 1/(Ohm m)
    power,
    temperature,
    energy,
    angle,
    kerr,        // Hz/photon
    ratio_db,
};

const char* dimension_name(Dimension d);

struct UnitInfo {
    double factor = 1.0;  // SI value = factor * number (dBm handled separately)
    Dimension dimension = Dimension::dimensionless;
    const char* canonical = "";  // SI unit written by the emitter
};

/// Looks up a unit spelling ("GHz", "uOhm cm", "aF/um", ...).
std::optional<UnitInfo> find_unit(const std::string& unit);

/// Converts number + unit to SI. Throws InputError for unknown units.
double to_si(double value, const std::string& unit, Dimension* dimension = nullptr);

struct Value {
    std::string raw;               // text as written, trimmed
    std::vector<double> numbers;   // SI values; empty for text
    std::string unit;              // unit as written ("" when absent)
    Dimension dimension = Dimension::dimensionless;
    bool numeric() const { return !numbers.empty(); }
};

class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "<config>");
    static Config load(const std::string& path);

    /// Canonical SI text; parse(emit()) reproduces every value bit-exactly.
    std::string emit() const;

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const { return sections_.count(section) > 0; }
    const Value& value(const std::string& section, const std::string& key) const;

    /// Scalar in SI. Throws InputError on a missing key, a non-numeric value, a
    /// missing unit for a dimensioned quantity, or a unit of the wrong dimension.
    double get(const std::string& section, const std::string& key, Dimension expected) const;
    std::optional<double> get_opt(const std::string& section, const std::string& key, Dimension expected) const;
    double get_or(const std::string& section, const std::string& key, Dimension expected, double fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key, Dimension expected) const;
    std::string get_text(const std::string& section, const std::string& key) const;
    std::optional<std::string> get_text_opt(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, Value v);
    void set_number(const std::string& section, const std::string& key, double si, Dimension d);
    void set_text(const std::string& section, const std::string& key, const std::string& text);

    /// Sections in lexical order, optionally restricted to a "prefix." family.
    std::vector<std::string> sections(const std::string& prefix = "") const;
    const std::map<std::string, std::map<std::string, Value>>& data() const { return sections_; }

    /// FNV-1a 64 of emit(), as 16 hex digits.
    std::string hash() const;

    std::string origin;

private:
    std::map<std::string, std::map<std::string, Value>> sections_;
};

/// Path from the RESOKIT_CONFIG environment variable, if set and non-empty.
std::optional<std::string> default_config_path();

std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace resokit::io
