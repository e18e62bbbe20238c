#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resokit/circle_fit.hpp"
#include "resokit/io/config.hpp"
#include "resokit/io/report.hpp"
#include "resokit/synth_lab.hpp"

/// Batch pipelines behind the CLI subcommands. Each returns the "results"
/// object of a report plus tidy plot data; file output is left to the caller.
namespace resokit::io {

/// Long-format plot table: a text `series` column followed by numeric columns.
struct PlotData {
    std::vector<std::string> columns;  // numeric column names
    std::vector<std::pair<std::string, std::vector<double>>> rows;

    void add(const std::string& series, std::vector<double> values) { rows.emplace_back(series, std::move(values)); }
    std::string to_csv() const;
};

struct PipelineResult {
    json results = json::object();
    std::vector<std::string> warnings;
    std::vector<std::string> inputs;
    std::optional<std::uint64_t> seed;
    PlotData plot;
};

struct FitSettings {
    circle::FitOptions fit;
    int mc_draws = 0;
    std::uint64_t seed = 0;
    double attenuation_db = 0.0;  // subtracted from a power_dbm / power_in_w tag
};

/// Reads [fit] delay = auto|off|fixed, fixed_delay, mc_draws, seed, attenuation.
FitSettings fit_settings_from_config(const Config& cfg);

json estimate_json(double value, double sigma);
json trace_fit_json(const circle::TraceFit& fit);

PipelineResult run_fit_s21(const std::string& trace_path, const FitSettings& settings);
PipelineResult run_power_sweep(const std::vector<std::string>& trace_paths, const FitSettings& settings);
/// From [device.*] sections (f_r, l_g, c_s, l_strip, w_strip[, sigma_f_r]).
PipelineResult run_sheet_inductance(const Config& cfg);
/// From a table with columns n_sq,l_k_h[,sigma_h].
PipelineResult run_sheet_inductance_table(const std::string& path);
/// From [kerr]: k_measured or sweep (path), c_s, l_strip, w_strip, thickness,
/// l_k_strip, and p_strip or l_leads.
PipelineResult run_kerr(const Config& cfg);
PipelineResult run_loss_budget(const Config& cfg);
/// [resonator] f_r, q_int, q_c_mag, phi; [qp] alpha, x0 or (q_res with t_c or delta).
PipelineResult run_qp_burst(const std::string& trace_path, const Config& cfg);
/// Table t_k,df_hz; [tc] f_r0, alpha, fit_offset, t_c_guess.
PipelineResult run_tc_fit(const std::string& data_path, const Config& cfg);
/// [pipeline] steps = ... runs every listed pipeline from one config.
PipelineResult run_bundle(const Config& cfg);

/// Scenario from [scenario] keys; unspecified keys keep generator defaults.
synth::Scenario scenario_from_config(const Config& cfg, synth::Kind kind);
/// Generated data as CSV text (trace layout for traces and bursts, tables otherwise).
std::string simulate_csv(const synth::Scenario& scenario);

/// Resolves `path` against the directory of the config file when relative.
std::string resolve_path(const Config& cfg, const std::string& path);

}  // namespace resokit::io
