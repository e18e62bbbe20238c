#include "resokit/synth_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/qp_dynamics.hpp"
#include "resokit/random.hpp"
#include "resokit/s21.hpp"

namespace resokit::synth {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_sigma(const Scenario& s, Kind expected) {
    if (s.kind != expected) throw InputError(std::string("scenario kind must be ") + kind_name(expected));
    if (!(s.sigma >= 0.0)) throw InputError("noise sigma must be non-negative");
}

std::vector<double> default_temps() {
    std::vector<double> t;
    for (int i = 0; i < 25; ++i) t.push_back(0.1 + i * (1.5 - 0.1) / 24.0);
    return t;
}

std::vector<double> default_photons() {
    std::vector<double> n;
    for (int i = 0; i < 100; ++i) n.push_back(1.0 + i);
    return n;
}

}  // namespace

const char* kind_name(Kind kind) {
    switch (kind) {
        case Kind::trace: return "trace";
        case Kind::power_sweep: return "power-sweep";
        case Kind::burst: return "burst";
        case Kind::temp_sweep: return "temp-sweep";
    }
    return "?";
}

Kind parse_kind(const std::string& name) {
    for (Kind k : {Kind::trace, Kind::power_sweep, Kind::burst, Kind::temp_sweep})
        if (name == kind_name(k)) return k;
    throw InputError("unknown scenario kind '" + name + "' (expected trace, power-sweep, burst or temp-sweep)");
}

std::vector<double> trace_grid(const TraceSpec& spec) {
    if (spec.points < 2) throw InputError("trace needs at least two points");
    const double span = spec.span_linewidths * spec.params.f_r / spec.params.q_loaded();
    std::vector<double> f(spec.points);
    for (std::size_t i = 0; i < spec.points; ++i)
        f[i] = spec.params.f_r + span * (static_cast<double>(i) / static_cast<double>(spec.points - 1) - 0.5);
    return f;
}

std::map<std::string, std::string> truth_metadata(const Scenario& s) {
    std::map<std::string, std::string> m;
    m["generator"] = kind_name(s.kind);
    m["seed"] = std::to_string(s.seed);
    m["truth.sigma"] = fmt(s.sigma);
    switch (s.kind) {
        case Kind::trace:
            m["truth.f_r"] = fmt(s.trace.params.f_r);
            m["truth.q_int"] = fmt(s.trace.params.q_int);
            m["truth.q_c_mag"] = fmt(s.trace.params.q_c_mag);
            m["truth.phi"] = fmt(s.trace.params.phi);
            m["truth.amplitude"] = fmt(s.trace.amplitude);
            m["truth.phase"] = fmt(s.trace.phase);
            m["truth.delay"] = fmt(s.trace.delay);
            break;
        case Kind::power_sweep:
            m["truth.f0"] = fmt(s.sweep.f0);
            m["truth.kerr"] = fmt(s.sweep.kerr);
            break;
        case Kind::burst:
            m["truth.f_r"] = fmt(s.burst.params.f_r);
            m["truth.q_int"] = fmt(s.burst.params.q_int);
            m["truth.q_c_mag"] = fmt(s.burst.params.q_c_mag);
            m["truth.phi"] = fmt(s.burst.params.phi);
            m["truth.alpha"] = fmt(s.burst.alpha);
            m["truth.tau_ss"] = fmt(s.burst.tau_ss);
            m["truth.x_i"] = fmt(s.burst.x_i);
            m["truth.r_prime"] = fmt(s.burst.r_prime);
            m["truth.x0"] = fmt(s.burst.x0);
            m["truth.t_burst"] = fmt(s.burst.t_burst);
            break;
        case Kind::temp_sweep:
            m["truth.f_r0"] = fmt(s.temp.f_r0);
            m["truth.alpha"] = fmt(s.temp.alpha);
            m["truth.t_c"] = fmt(s.temp.t_c);
            break;
    }
    return m;
}

ComplexTrace gen_trace(const Scenario& s) {
    check_sigma(s, Kind::trace);
    const auto& spec = s.trace;
    spec.params.validate();
    auto f = trace_grid(spec);
    const double f_mid = 0.5 * (f.front() + f.back());
    random::PhiloxStream rng(s.seed, 0);
    std::vector<cdouble> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const cdouble env = spec.amplitude * std::polar(1.0, spec.phase - 2.0 * constants::pi * spec.delay * (f[i] - f_mid));
        v[i] = env * s21::response(spec.params, f[i]);
        if (s.sigma > 0.0) {
            const double re = rng.normal(), im = rng.normal();
            v[i] += s.sigma * cdouble(re, im);
        }
    }
    auto tr = ComplexTrace::frequency_sweep(std::move(f), std::move(v));
    tr.power_in = spec.power_in;
    if (s.sigma > 0.0) tr.noise_sigma = s.sigma;
    tr.metadata = truth_metadata(s);
    return tr;
}

std::vector<jja::PowerPoint> gen_power_sweep(const Scenario& s) {
    check_sigma(s, Kind::power_sweep);
    const auto n = s.sweep.photon_numbers.empty() ? default_photons() : s.sweep.photon_numbers;
    random::PhiloxStream rng(s.seed, 1);
    std::vector<jja::PowerPoint> out;
    for (double nph : n) {
        double f = s.sweep.f0 + s.sweep.kerr * nph;
        if (s.sigma > 0.0) f += s.sigma * rng.normal();
        out.push_back({nph, f, s.sigma});
    }
    return out;
}

double burst_truth(const BurstSpec& b, double t) {
    // Grid points within rounding of the onset count as the onset sample.
    const double eps = 1e-9 * b.dt;
    if (t < b.t_burst - eps) return 0.0;
    return qp::burst_dx(std::max(0.0, t - b.t_burst), b.tau_ss, b.x_i, b.r_prime);
}

ComplexTrace gen_burst(const Scenario& s) {
    check_sigma(s, Kind::burst);
    const auto& b = s.burst;
    b.params.validate();
    if (!(b.tau_ss > 0.0) || !(b.x_i > 0.0) || b.r_prime < 0.0 || b.r_prime >= 1.0)
        throw InputError("burst parameters need tau_ss > 0, x_i > 0, r' in [0, 1)");
    if (!(b.dt > 0.0) || !(b.duration > b.dt)) throw InputError("burst sampling needs 0 < dt < duration");
    const double f_probe = b.probe_frequency.value_or(b.params.f_r);
    const auto n = static_cast<std::size_t>(std::floor(b.duration / b.dt)) + 1;
    random::PhiloxStream rng(s.seed, 2);
    std::vector<double> t(n);
    std::vector<cdouble> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = static_cast<double>(i) * b.dt;
        const double f_r = b.params.f_r * (1.0 + qp::shift_from_xqp(burst_truth(b, t[i]), b.alpha));
        v[i] = s21::response_at_detuning(b.params, f_probe / f_r - 1.0);
        if (s.sigma > 0.0) {
            const double re = rng.normal(), im = rng.normal();
            v[i] += s.sigma * cdouble(re, im);
        }
    }
    auto tr = ComplexTrace::time_series(std::move(t), std::move(v), f_probe);
    if (s.sigma > 0.0) tr.noise_sigma = s.sigma;
    tr.metadata = truth_metadata(s);
    return tr;
}

std::vector<mb::TcPoint> gen_temp_sweep(const Scenario& s) {
    check_sigma(s, Kind::temp_sweep);
    const auto temps = s.temp.temps.empty() ? default_temps() : s.temp.temps;
    const auto model = mb::freq_shift_vs_temperature(temps, s.temp.f_r0, s.temp.alpha, s.temp.t_c);
    random::PhiloxStream rng(s.seed, 3);
    std::vector<mb::TcPoint> out;
    for (const auto& p : model) {
        double df = p.df;
        if (s.sigma > 0.0) df += s.sigma * rng.normal();
        out.push_back({p.t, df});
    }
    return out;
}

}  // namespace resokit::synth
