#pragma once

#include <span>

namespace resokit::numerics {

/// y = intercept + slope * x with the 2x2 parameter covariance.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double var_intercept = 0.0;
    double var_slope = 0.0;
    double cov = 0.0;
    double chi2 = 0.0;
    int n = 0;
};

/// Weighted least-squares line. With `sigma` empty the fit is unweighted and
/// the covariance is scaled by the residual variance (n > 2); with sigma given,
/// the covariance is the inverse normal matrix.
LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma = {});

}  // namespace resokit::numerics
