#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace resokit {

using cdouble = std::complex<double>;

/// Notch-type resonance parameters. Re[1/Q_c] is taken as cos(phi)/|Q_c|.
struct HangerParams {
    double f_r = 0.0;      // Hz
    double q_int = 0.0;
    double q_c_mag = 0.0;
    double phi = 0.0;      // rad, (-pi, pi]

    double re_inv_qc() const;
    double q_loaded() const;
    /// Q_L / |Q_c|, the diameter of the resonance circle for unit background.
    double diameter() const { return q_loaded() / q_c_mag; }

    /// Throws ValidationError listing every violated invariant.
    void validate() const;
};

struct CircleGeometry {
    cdouble center;
    double radius = 0.0;
};

/// Complex transmission record, either a frequency sweep or a zero-span time series.
class ComplexTrace {
public:
    enum class Axis { frequency, time };

    ComplexTrace() = default;

    static ComplexTrace frequency_sweep(std::vector<double> freqs, std::vector<cdouble> values);
    /// `probe_frequency` is the fixed drive frequency of the zero-span record.
    static ComplexTrace time_series(std::vector<double> timestamps, std::vector<cdouble> values,
                                    std::optional<double> probe_frequency = std::nullopt);

    Axis axis() const { return axis_; }
    bool is_frequency() const { return axis_ == Axis::frequency; }
    std::size_t size() const { return values_.size(); }

    /// Frequencies (Hz) or timestamps (s), depending on axis().
    const std::vector<double>& abscissa() const { return abscissa_; }
    const std::vector<double>& freqs() const;
    const std::vector<double>& timestamps() const;
    const std::vector<cdouble>& values() const { return values_; }

    std::optional<double> power_in;         // W at the chip
    std::optional<double> temperature;      // K
    std::optional<double> probe_frequency;  // Hz, time mode only
    std::optional<double> noise_sigma;      // per-quadrature, when known
    std::map<std::string, std::string> metadata;

private:
    Axis axis_ = Axis::frequency;
    std::vector<double> abscissa_;
    std::vector<cdouble> values_;
};

struct DeviceGeometry {
    double l_strip = 0.0;    // m
    double w_strip = 0.0;    // m
    double thickness = 0.0;  // m

    double n_sq() const { return l_strip / w_strip; }
    double cross_section() const { return w_strip * thickness; }
};

struct FilmProperties {
    double rho_n = 0.0;      // Ohm m
    double thickness = 0.0;  // m
    double l_sq = 0.0;       // H/sq, 0 when unknown
    double t_c = 0.0;        // K
    double delta0 = 0.0;     // J
    bool delta_from_bcs = false;

    /// Sheet resistance rho_n / thickness (Ohm/sq).
    double r_sq() const { return rho_n / thickness; }

    /// Fills delta0 from the BCS ratio when `delta0` is not supplied.
    static FilmProperties make(double rho_n, double thickness, double l_sq, double t_c,
                               std::optional<double> delta0 = std::nullopt);
};

struct CircuitModel {
    double l_g = 0.0;      // H
    double c_s = 0.0;      // F
    double l_k = 0.0;      // H
    double alpha = 0.0;
    double e_c = 0.0;      // J
    double p_strip = 1.0;

    /// Derives alpha = L_k / (L_k + L_g) and E_c = e^2 / (2 C_s).
    static CircuitModel make(double l_g, double c_s, double l_k, double p_strip = 1.0);
};

struct DeviceBundle {
    DeviceGeometry geometry;
    FilmProperties film;
    CircuitModel circuit;
};

/// Checks every type invariant of the three records. Throws ValidationError
/// naming each offending field; returns the bundle unchanged otherwise.
DeviceBundle validate_device(const DeviceGeometry& geometry, const FilmProperties& film,
                             const CircuitModel& circuit);

struct Estimate {
    std::string name;
    double value = 0.0;
    double sigma = 0.0;
};

struct FitReport {
    std::vector<Estimate> estimates;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::optional<double> photon_number;
    std::vector<std::string> warnings;

    const Estimate& get(const std::string& name) const;
    double value(const std::string& name) const { return get(name).value; }
    double sigma(const std::string& name) const { return get(name).sigma; }
};

}  // namespace resokit
