#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resokit/types.hpp"

/// Quasiparticle density dynamics dx/dt = -r x^2 - s x + g and the burst
/// solution dx(t) = x_i (1 - r') / (e^{t/tau} - r') about the steady state x0.
namespace resokit::qp {

struct XqpSeries {
    std::vector<double> t;   // s
    std::vector<double> dx;  // excess QP density
    std::vector<std::size_t> dropped;  // sample indices at the singular point
};

/// Maps each zero-span sample (normalized to unit off-resonant background) to
/// a detuning on the resonance circle, then to the shift of the resonance
/// relative to `params.f_r` and dx = -(4/alpha) df/f. The probe defaults to f_r.
XqpSeries trace_to_xqp(const ComplexTrace& trace, const HangerParams& params, double alpha);

/// dx from a fractional shift df/f.
inline double xqp_from_shift(double df_over_f, double alpha) { return -4.0 / alpha * df_over_f; }
inline double shift_from_xqp(double dx, double alpha) { return -alpha / 4.0 * dx; }

struct QpBurstModel {
    double tau_ss = 0.0;  // s
    double x_i = 0.0;
    double r_prime = 0.0;
    double sigma_tau_ss = 0.0, sigma_x_i = 0.0, sigma_r_prime = 0.0;
    double t_peak = 0.0;  // s, origin of the fitted time axis
    double x0 = 0.0;
    double alpha = 0.0;
    double delta = 0.0;   // J
    bool converged = false;
    bool r_prime_at_bound = false;
    int points_used = 0;
    std::vector<std::string> warnings;
};

struct BurstFitOptions {
    double mask = 50e-6;  // s after the peak excluded from the fit
    /// Peak search window (s, on the series axis); whole series if unset.
    std::optional<double> window_start, window_end;
    std::size_t min_points = 50;
};

/// Fits tau_ss, x_i and r' with t = 0 at the peak of the series.
QpBurstModel fit_burst(const XqpSeries& series, const BurstFitOptions& options = {});

/// Closed form burst relaxation at time t after the peak.
double burst_dx(double t, double tau_ss, double x_i, double r_prime);

/// x0 = (pi / (alpha Q_res)) sqrt(hbar w / (2 Delta)).
double steady_state_xqp(double alpha, double q_res, double f_r, double delta);

struct Rates {
    double r = 0.0;       // 1/s
    double s = 0.0;       // 1/s
    double g = 0.0;       // 1/s
    double consistency = 0.0;  // |tau_ss (2 r x0 + s) - 1|
    bool negative_s = false;
    bool negative_g = false;
    std::string caveat;
};

/// Back-out of r, s, g from tau_ss, x_i, r' and the x0 bound held in `model`.
Rates rates_from_fit(const QpBurstModel& model);

/// Relaxation time 1 / (2 r x0 + s) of small deviations about x0.
double relaxation_time(double r, double s, double x0);

/// Steady state of the rate equation, the positive root of r x^2 + s x = g.
double fixed_point(double r, double s, double g);

/// Closed-form x(t) of the rate equation from x(0) = x_init.
double closed_form_x(double t, double r, double s, double g, double x_init);

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;  // 0: rel_tol times the largest of x_init and x0
};

/// Adaptive Dormand-Prince integration of the rate equation on `times`
/// (ascending, first entry is the start time). Throws FitError on step failure.
std::vector<double> integrate_qp_ode(double r, double s, double g, double x_init, std::span<const double> times,
                                     const OdeOptions& options = {});

}  // namespace resokit::qp
