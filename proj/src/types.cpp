#include "resokit/types.hpp"

#include <cmath>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"

namespace resokit {

ValidationError::ValidationError(std::vector<Violation> violations)
    : InputError([&] {
          std::string msg = "invalid input:";
          for (const auto& v : violations) msg += " " + v.field + " " + v.constraint + ";";
          return msg;
      }()),
      violations_(std::move(violations)) {}

namespace {

void require_positive(std::vector<Violation>& out, const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) out.push_back({field, "must be positive"});
}

}  // namespace

double HangerParams::re_inv_qc() const { return std::cos(phi) / q_c_mag; }

double HangerParams::q_loaded() const { return 1.0 / (1.0 / q_int + re_inv_qc()); }

void HangerParams::validate() const {
    std::vector<Violation> v;
    require_positive(v, "f_r", f_r);
    require_positive(v, "q_int", q_int);
    require_positive(v, "q_c_mag", q_c_mag);
    if (!(phi > -constants::pi && phi <= constants::pi)) v.push_back({"phi", "must lie in (-pi, pi]"});
    // Q_L <= Q_int requires Re[1/Q_c] >= 0.
    else if (std::cos(phi) < 0.0) v.push_back({"phi", "must satisfy |phi| <= pi/2 so that q_loaded <= q_int"});
    if (!v.empty()) throw ValidationError(std::move(v));
}

ComplexTrace ComplexTrace::frequency_sweep(std::vector<double> freqs, std::vector<cdouble> values) {
    if (freqs.size() != values.size())
        throw InputError("trace: values length must equal freqs length");
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (!std::isfinite(freqs[i])) throw InputError("trace: non-finite frequency");
        if (i > 0 && !(freqs[i] > freqs[i - 1]))
            throw InputError("frequency axis must be strictly increasing");
        if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
            throw InputError("trace: NaN or infinite sample at index " + std::to_string(i));
    }
    ComplexTrace t;
    t.axis_ = Axis::frequency;
    t.abscissa_ = std::move(freqs);
    t.values_ = std::move(values);
    return t;
}

ComplexTrace ComplexTrace::time_series(std::vector<double> timestamps, std::vector<cdouble> values,
                                       std::optional<double> probe_frequency) {
    if (timestamps.size() != values.size())
        throw InputError("trace: values length must equal timestamps length");
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        if (!std::isfinite(timestamps[i])) throw InputError("trace: non-finite timestamp");
        if (i > 0 && !(timestamps[i] > timestamps[i - 1]))
            throw InputError("time axis must be strictly increasing");
        if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
            throw InputError("trace: NaN or infinite sample at index " + std::to_string(i));
    }
    ComplexTrace t;
    t.axis_ = Axis::time;
    t.abscissa_ = std::move(timestamps);
    t.values_ = std::move(values);
    t.probe_frequency = probe_frequency;
    return t;
}

const std::vector<double>& ComplexTrace::freqs() const {
    if (axis_ != Axis::frequency) throw InputError("trace is a time series, not a frequency sweep");
    return abscissa_;
}

const std::vector<double>& ComplexTrace::timestamps() const {
    if (axis_ != Axis::time) throw InputError("trace is a frequency sweep, not a time series");
    return abscissa_;
}

FilmProperties FilmProperties::make(double rho_n, double thickness, double l_sq, double t_c,
                                    std::optional<double> delta0) {
    FilmProperties f;
    f.rho_n = rho_n;
    f.thickness = thickness;
    f.l_sq = l_sq;
    f.t_c = t_c;
    if (delta0) {
        f.delta0 = *delta0;
        f.delta_from_bcs = false;
    } else {
        f.delta0 = constants::bcs_gap_ratio * constants::k_B * t_c;
        f.delta_from_bcs = true;
    }
    return f;
}

CircuitModel CircuitModel::make(double l_g, double c_s, double l_k, double p_strip) {
    CircuitModel c;
    c.l_g = l_g;
    c.c_s = c_s;
    c.l_k = l_k;
    c.alpha = l_k / (l_k + l_g);
    c.e_c = constants::e * constants::e / (2.0 * c_s);
    c.p_strip = p_strip;
    return c;
}

DeviceBundle validate_device(const DeviceGeometry& geometry, const FilmProperties& film,
                             const CircuitModel& circuit) {
    std::vector<Violation> v;
    require_positive(v, "l_strip", geometry.l_strip);
    require_positive(v, "w_strip", geometry.w_strip);
    require_positive(v, "thickness", geometry.thickness);

    require_positive(v, "rho_n", film.rho_n);
    require_positive(v, "film.thickness", film.thickness);
    if (film.l_sq < 0.0) v.push_back({"l_sq", "must be non-negative"});
    if (film.t_c < 0.0) v.push_back({"t_c", "must be non-negative"});
    if (film.delta0 < 0.0) v.push_back({"delta0", "must be non-negative"});
    if (film.delta_from_bcs && film.t_c > 0.0) {
        const double expect = constants::bcs_gap_ratio * constants::k_B * film.t_c;
        if (std::abs(film.delta0 - expect) > 1e-12 * expect)
            v.push_back({"delta0", "flagged as BCS-derived but differs from 1.764 k_B T_c"});
    }
    if (geometry.thickness > 0.0 && film.thickness > 0.0 &&
        std::abs(geometry.thickness - film.thickness) > 1e-12 * geometry.thickness)
        v.push_back({"film.thickness", "must equal geometry thickness"});

    if (circuit.l_g < 0.0) v.push_back({"l_g", "must be non-negative"});
    require_positive(v, "c_s", circuit.c_s);
    if (circuit.l_k < 0.0) v.push_back({"l_k", "must be non-negative"});
    if (!(circuit.alpha >= 0.0 && circuit.alpha < 1.0)) v.push_back({"alpha", "must lie in [0, 1)"});
    if (!(circuit.p_strip >= 0.0 && circuit.p_strip <= 1.0)) v.push_back({"p_strip", "must lie in [0, 1]"});
    if (circuit.c_s > 0.0) {
        const double ec = constants::e * constants::e / (2.0 * circuit.c_s);
        if (std::abs(circuit.e_c - ec) > 1e-12 * ec) v.push_back({"e_c", "must equal e^2/(2 c_s)"});
    }
    if (!v.empty()) throw ValidationError(std::move(v));
    return {geometry, film, circuit};
}

const Estimate& FitReport::get(const std::string& name) const {
    for (const auto& e : estimates)
        if (e.name == name) return e;
    throw InputError("fit report has no estimate named '" + name + "'");
}

}  // namespace resokit
