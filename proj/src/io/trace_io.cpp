#include "resokit/io/trace_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "resokit/errors.hpp"
#include "resokit/io/config.hpp"

namespace resokit::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_cell(const std::string& cell, const std::string& where) {
    if (cell.empty()) throw InputError(where + ": empty cell");
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') throw InputError(where + ": not a number '" + cell + "'");
    if (std::isnan(v)) throw InputError(where + ": NaN sample");
    return v;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw InputError("missing column '" + name + "'");
}

bool Table::has_column(const std::string& name) const {
    for (const auto& c : columns)
        if (c == name) return true;
    return false;
}

std::vector<double> Table::column_values(const std::string& name) const {
    const auto k = column(name);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[k]);
    return v;
}

Table parse_table(const std::string& text, const std::string& origin) {
    Table t;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        const std::string s = trim(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            const auto colon = s.find(':');
            if (colon != std::string::npos) {
                const std::string key = trim(s.substr(1, colon - 1));
                if (!key.empty()) t.metadata[key] = trim(s.substr(colon + 1));
            }
            continue;
        }
        const auto cells = split_csv(s);
        if (t.columns.empty()) {
            char* end = nullptr;
            std::strtod(cells.front().c_str(), &end);
            if (end != cells.front().c_str()) throw InputError(where + ": missing header row");
            t.columns = cells;
            continue;
        }
        if (cells.size() != t.columns.size())
            throw InputError(where + ": expected " + std::to_string(t.columns.size()) + " columns, got " +
                             std::to_string(cells.size()));
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_cell(c, where));
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) throw InputError(origin + ": missing header row");
    return t;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << bytes;
    if (!out) throw InputError("write failed for '" + path + "'");
}

Table read_table(const std::string& path) { return parse_table(read_file(path), path); }

std::string format_table(const Table& t) {
    std::string out;
    for (const auto& [k, v] : t.metadata) out += "# " + k + ": " + v + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
        out += "\n";
    }
    return out;
}

ComplexTrace parse_trace(const std::string& text, const std::string& origin) {
    const Table t = parse_table(text, origin);
    auto has = [&](const char* c) { return t.has_column(c); };
    std::vector<cdouble> values;
    ComplexTrace tr;
    try {
        if (has("freq_hz") && has("re") && has("im")) {
            const auto re = t.column_values("re"), im = t.column_values("im");
            for (std::size_t i = 0; i < re.size(); ++i) values.emplace_back(re[i], im[i]);
            tr = ComplexTrace::frequency_sweep(t.column_values("freq_hz"), std::move(values));
        } else if (has("freq_hz") && has("mag_db") && has("phase_rad")) {
            const auto mag = t.column_values("mag_db"), ph = t.column_values("phase_rad");
            for (std::size_t i = 0; i < mag.size(); ++i)
                values.push_back(std::polar(std::pow(10.0, mag[i] / 20.0), ph[i]));
            tr = ComplexTrace::frequency_sweep(t.column_values("freq_hz"), std::move(values));
        } else if (has("t_s") && has("re") && has("im")) {
            const auto re = t.column_values("re"), im = t.column_values("im");
            for (std::size_t i = 0; i < re.size(); ++i) values.emplace_back(re[i], im[i]);
            tr = ComplexTrace::time_series(t.column_values("t_s"), std::move(values));
        } else {
            throw InputError(
                "missing columns: expected freq_hz,re,im or freq_hz,mag_db,phase_rad or t_s,re,im");
        }
    } catch (const InputError& e) {
        throw InputError(origin + ": " + e.what());
    }
    auto number = [&](const std::string& key) -> std::optional<double> {
        auto it = t.metadata.find(key);
        if (it == t.metadata.end()) return std::nullopt;
        char* end = nullptr;
        const double v = std::strtod(it->second.c_str(), &end);
        if (end == it->second.c_str()) throw InputError(origin + ": metadata '" + key + "' is not a number");
        return v;
    };
    tr.metadata = t.metadata;
    if (auto p = number("power_in_w")) tr.power_in = *p;
    else if (auto d = number("power_dbm")) tr.power_in = 1e-3 * std::pow(10.0, *d / 10.0);
    if (auto v = number("temperature_k")) tr.temperature = *v;
    if (auto v = number("probe_frequency_hz")) tr.probe_frequency = *v;
    if (auto v = number("noise_sigma")) tr.noise_sigma = *v;
    return tr;
}

ComplexTrace ingest_trace(const std::string& path) { return parse_trace(read_file(path), path); }

std::string format_trace(const ComplexTrace& trace, bool mag_phase) {
    Table t;
    t.metadata = trace.metadata;
    if (trace.power_in) t.metadata["power_in_w"] = format_double(*trace.power_in);
    if (trace.temperature) t.metadata["temperature_k"] = format_double(*trace.temperature);
    if (trace.probe_frequency) t.metadata["probe_frequency_hz"] = format_double(*trace.probe_frequency);
    if (trace.noise_sigma) t.metadata["noise_sigma"] = format_double(*trace.noise_sigma);
    const auto& x = trace.abscissa();
    const auto& v = trace.values();
    if (!trace.is_frequency()) {
        t.columns = {"t_s", "re", "im"};
    } else if (mag_phase) {
        t.columns = {"freq_hz", "mag_db", "phase_rad"};
    } else {
        t.columns = {"freq_hz", "re", "im"};
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (trace.is_frequency() && mag_phase)
            t.rows.push_back({x[i], 20.0 * std::log10(std::abs(v[i])), std::arg(v[i])});
        else
            t.rows.push_back({x[i], v[i].real(), v[i].imag()});
    }
    return format_table(t);
}

void write_trace(const std::string& path, const ComplexTrace& trace, bool mag_phase) {
    write_file(path, format_trace(trace, mag_phase));
}

}  // namespace resokit::io
