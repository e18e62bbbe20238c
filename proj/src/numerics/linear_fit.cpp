#include "resokit/numerics/linear_fit.hpp"

#include <cmath>

#include "resokit/errors.hpp"

namespace resokit::numerics {

LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
    if (x.size() != y.size()) throw InputError("line fit: x and y differ in length");
    if (!sigma.empty() && sigma.size() != x.size()) throw InputError("line fit: sigma length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw InputError("line fit: need at least two points");

    // Centred sums keep the normal equations well conditioned.
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
        if (!(w > 0.0) || !std::isfinite(w)) throw InputError("line fit: sigma must be positive");
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
    }
    const double xm = sx / sw;
    const double ym = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
        sxx += w * (x[i] - xm) * (x[i] - xm);
        sxy += w * (x[i] - xm) * (y[i] - ym);
    }
    if (!(sxx > 0.0)) throw InputError("line fit: rank-deficient input (all abscissae equal)");

    LineFit f;
    f.n = static_cast<int>(n);
    f.slope = sxy / sxx;
    f.intercept = ym - f.slope * xm;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
        const double res = y[i] - f.intercept - f.slope * x[i];
        f.chi2 += w * res * res;
    }
    double scale = 1.0;
    if (sigma.empty()) scale = n > 2 ? f.chi2 / static_cast<double>(n - 2) : 0.0;
    f.var_slope = scale / sxx;
    f.var_intercept = scale * (1.0 / sw + xm * xm / sxx);
    f.cov = -scale * xm / sxx;
    return f;
}

}  // namespace resokit::numerics
