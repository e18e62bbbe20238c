#pragma once

#include <map>
#include <string>
#include <vector>

#include "resokit/types.hpp"

/// Trace files are CSV with a mandatory header naming one of the layouts
///
///   freq_hz,re,im         freq_hz,mag_db,phase_rad         t_s,re,im
///
/// Lines of the form "# key: value" carry metadata. Recognized keys set trace
/// fields: power_in_w, power_dbm (converted to W), temperature_k,
/// probe_frequency_hz, noise_sigma. All other keys are kept verbatim.
namespace resokit::io {

enum class TraceFormat { re_im, mag_phase, time_re_im };

ComplexTrace parse_trace(const std::string& text, const std::string& origin = "<trace>");
ComplexTrace ingest_trace(const std::string& path);

/// Writes metadata comments, the header and one %.17g row per sample.
/// Frequency traces use freq_hz,re,im unless `mag_phase` is set.
std::string format_trace(const ComplexTrace& trace, bool mag_phase = false);
void write_trace(const std::string& path, const ComplexTrace& trace, bool mag_phase = false);

/// Generic numeric table: mandatory header, optional "# key: value" metadata.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> metadata;

    /// Column index; throws InputError naming the missing column.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;
    std::vector<double> column_values(const std::string& name) const;
};

Table parse_table(const std::string& text, const std::string& origin = "<table>");
Table read_table(const std::string& path);
std::string format_table(const Table& table);

std::string read_file(const std::string& path);
/// Writes bytes exactly; throws InputError when the file cannot be opened.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace resokit::io
