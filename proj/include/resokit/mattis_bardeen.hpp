#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

/// BCS complex conductivity sigma = sigma1 - i sigma2 (Mattis-Bardeen), in
/// units of the normal-state conductivity. With f(E) the Fermi function and
/// hw the photon energy:
///
///   sigma1 = (2/hw) int_D^inf [f(E) - f(E+hw)] g(E) dE
///          + (1/hw) int_{D-hw}^{-D} [1 - 2 f(E+hw)] |g(E)| dE        (hw > 2D)
///   sigma2 = (1/hw) int_{max(D-hw,-D)}^{D} [1 - 2 f(E+hw)] h(E) dE
///
///   g(E) = (E^2 + D^2 + hw E) / (sqrt(E^2 - D^2) sqrt((E+hw)^2 - D^2))
///   h(E) = (E^2 + D^2 + hw E) / (sqrt(D^2 - E^2) sqrt((E+hw)^2 - D^2))
///
/// Square-root edges are removed by E = D cosh(u) (or D cos(theta)) on each
/// side of a split point, so every quadrature has a smooth integrand.
namespace resokit::mb {

struct MbSettings {
    double quad_tolerance = 1e-9;  // relative
    int max_depth = 15;            // adaptive bisection levels
    double gap_tolerance = 1e-12;  // relative, on Delta
    double frequency = 0.0;        // Hz
    double alpha = 1.0;
    double t_ref = 0.0;            // K, temperature of the zero-shift reference
    /// Zero-temperature gap (J); 1.764 k_B T_c when unset.
    std::optional<double> delta0;

    void validate() const;
};

struct GapResult {
    double delta = 0.0;  // J
    bool normal = false;
};

/// Self-consistent BCS gap from ln(D0/D) = 2 int_0^inf f(D cosh u) du.
GapResult gap_at_temperature(double t, double t_c, std::optional<double> delta0 = std::nullopt,
                             double tolerance = 1e-12);

struct Conductivity {
    double sigma1 = 0.0;  // / sigma_n
    double sigma2 = 0.0;  // / sigma_n
};

Conductivity complex_conductivity(double t, double f, double t_c, const MbSettings& settings = {});

/// Conductivity at a given gap (J) and temperature, without the gap solve.
Conductivity conductivity_at_gap(double t, double f, double delta, const MbSettings& settings = {});

struct ShiftPoint {
    double t = 0.0;
    double df = 0.0;          // Hz
    double d_inv_q = 0.0;     // change of 1/Q_cond
};

/// Thin-film response relative to t_ref: df/f = (alpha/2) dsigma2 / sigma2(t_ref),
/// d(1/Q) = alpha dsigma1 / sigma2(t_ref).
std::vector<ShiftPoint> freq_shift_vs_temperature(std::span<const double> temps, double f_r0, double alpha,
                                                  double t_c, const MbSettings& settings = {});

struct TcPoint {
    double t = 0.0;
    double df = 0.0;
};

struct TcFit {
    double t_c = 0.0;
    double sigma_t_c = 0.0;
    double offset = 0.0;  // Hz, when fitted
    double sigma_offset = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> warnings;
};

struct TcFitOptions {
    bool fit_offset = false;
    std::optional<double> t_c_guess;
    MbSettings settings;
};

/// One-parameter fit of T_c (plus an optional constant offset) to df(T).
TcFit fit_tc(std::span<const TcPoint> points, double f_r0, double alpha, const TcFitOptions& options = {});

/// Zero-temperature sheet kinetic inductance hbar R_sq / (pi Delta).
double sheet_inductance_from_gap(double r_sq, double delta);

}  // namespace resokit::mb
