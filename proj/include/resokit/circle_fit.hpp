#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resokit/types.hpp"

namespace resokit::circle {

enum class DelayMode { off, automatic, fixed };

struct FitOptions {
    DelayMode delay_mode = DelayMode::automatic;
    double fixed_delay = 0.0;       // s, used with DelayMode::fixed
    double edge_fraction = 0.10;    // share of points per edge for the delay fit
    double delay_threshold = 3.0;   // slope significance, in sigmas
    std::size_t min_points = 12;
    double min_span_linewidths = 3.0;
    int max_iterations = 200;
};

/// Off-resonant background a e^{i theta} e^{-2 pi i tau (f - f_ref)}.
struct Environment {
    double amplitude = 1.0;
    double phase = 0.0;
    double delay = 0.0;  // s
    double f_ref = 0.0;  // Hz

    cdouble at(double freq) const;
};

struct TraceFit {
    HangerParams params;
    Environment environment;
    /// Circle in the raw (delay-removed, un-normalized) plane from the algebraic fit.
    CircleGeometry circle;
    bool delay_fitted = false;
    /// Estimates carry LM-covariance uncertainties ("uncertainty_method").
    FitReport report;
    std::string uncertainty_method = "lm-covariance";
};

/// Algebraic circle fit (Taubin, via SVD of the centred moment matrix).
CircleGeometry fit_circle_algebraic(std::span<const cdouble> z);

/// RMS distance of the points from the circle.
double circle_rms_residual(std::span<const cdouble> z, const CircleGeometry& c);

struct PhaseFit {
    double theta0 = 0.0;  // rad
    double f_r = 0.0;
    double q_loaded = 0.0;
};

/// Fits arg(z - centre) = theta0 + 2 atan(2 Q_L (1 - f/f_r)) to the unwrapped phase.
PhaseFit fit_phase(std::span<const double> freqs, std::span<const cdouble> z, cdouble centre);

struct DelayEstimate {
    double delay = 0.0;  // s
    double sigma = 0.0;
    bool significant = false;
};

/// Common linear phase slope over the outer `edge_fraction` of points on each edge.
DelayEstimate estimate_cable_delay(std::span<const double> freqs, std::span<const cdouble> z,
                                   double edge_fraction, double threshold);

/// Full pipeline: optional delay removal, algebraic circle, phase fit, then a
/// weighted Levenberg-Marquardt refinement of the complete complex model.
TraceFit fit_trace(const ComplexTrace& trace, const FitOptions& options = {});

/// Evaluates the fitted model (with environment) at `freqs`.
std::vector<cdouble> model_values(const TraceFit& fit, std::span<const double> freqs);

struct MonteCarloSpread {
    double f_r = 0.0, q_int = 0.0, q_c_mag = 0.0, phi = 0.0;
    int draws = 0;
};

/// Parametric bootstrap: resamples the fitted model with Gaussian noise of the
/// residual RMS and refits. Reported separately from the LM covariance.
MonteCarloSpread monte_carlo_uncertainty(const TraceFit& fit, const ComplexTrace& trace, int draws,
                                         std::uint64_t seed, const FitOptions& options = {});

struct Histogram {
    std::vector<double> edges;  // bins + 1 entries
    std::vector<int> counts;
};

struct StabilityStats {
    std::vector<std::optional<TraceFit>> fits;  // nullopt for failed traces
    std::vector<std::size_t> failed;
    std::vector<std::string> failure_messages;
    double mean_q_int = 0.0;
    double std_q_int = 0.0;  // sample standard deviation
    Histogram histogram;
};

/// Fits every trace, flags failures instead of aborting, and summarizes Q_int.
StabilityStats fit_stability(std::span<const ComplexTrace> traces, int bins = 10, const FitOptions& options = {});

/// Equal-width histogram over [min, max] of `values`.
Histogram make_histogram(std::span<const double> values, int bins);

}  // namespace resokit::circle
