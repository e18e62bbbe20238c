#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "resokit/jja_kerr.hpp"
#include "resokit/mattis_bardeen.hpp"
#include "resokit/types.hpp"

/// Seeded synthetic measurements. Noise is drawn from PhiloxStream(seed, stream)
/// with one stream per generator kind; sample i of a complex trace takes the
/// Box-Muller pair of block i as (re, im), scalar series take one normal per
/// sample in order.
namespace resokit::synth {

enum class Kind { trace, power_sweep, burst, temp_sweep };

const char* kind_name(Kind kind);
Kind parse_kind(const std::string& name);

struct TraceSpec {
    HangerParams params{6.04e9, 1.78e6, 1.30e6, 0.1};
    std::size_t points = 801;
    double span_linewidths = 20.0;  // full span in units of f_r / Q_L
    double amplitude = 1.0;
    double phase = 0.0;             // rad
    double delay = 0.0;             // s, referenced to the span centre
    std::optional<double> power_in; // W
};

struct PowerSweepSpec {
    double f0 = 6.04e9;
    double kerr = -5.0;  // Hz/photon
    std::vector<double> photon_numbers;  // empty: 100 points linear in [1, 100]
};

struct BurstSpec {
    HangerParams params{4.60e9, 0.52e6, 400.0, 0.0};
    double alpha = 0.96;
    double tau_ss = 1.2e-3;
    double x_i = 1.2e-4;
    double r_prime = 0.9;
    double x0 = 8e-7;       // metadata only: the series carries the excess density
    double dt = 20e-6;
    double duration = 8e-3;
    double t_burst = 1e-3;  // pre-burst baseline
    std::optional<double> probe_frequency;  // defaults to f_r
};

struct TempSweepSpec {
    std::vector<double> temps;  // empty: 25 points in [0.1, 1.5] K
    double f_r0 = 4.60e9;
    double alpha = 0.96;
    double t_c = 2.15;
};

struct Scenario {
    Kind kind = Kind::trace;
    std::uint64_t seed = 0;
    double sigma = 0.0;  // per quadrature (traces) or Hz (sweeps)
    TraceSpec trace;
    PowerSweepSpec sweep;
    BurstSpec burst;
    TempSweepSpec temp;
};

/// Frequency grid of a trace scenario, centred on f_r.
std::vector<double> trace_grid(const TraceSpec& spec);

ComplexTrace gen_trace(const Scenario& scenario);
std::vector<jja::PowerPoint> gen_power_sweep(const Scenario& scenario);
ComplexTrace gen_burst(const Scenario& scenario);
std::vector<mb::TcPoint> gen_temp_sweep(const Scenario& scenario);

/// Excess QP density of the burst scenario at absolute time t.
double burst_truth(const BurstSpec& spec, double t);

/// Truth metadata ("truth.<name>" -> %.17g) written into generated traces.
std::map<std::string, std::string> truth_metadata(const Scenario& scenario);

}  // namespace resokit::synth
