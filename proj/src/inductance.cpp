#include "resokit/inductance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/numerics/linear_fit.hpp"

namespace resokit::inductance {

using constants::pi;

double alpha_from_fr(double f_r, double l_g, double c_s) {
    if (!(f_r > 0.0) || !(l_g >= 0.0) || !(c_s > 0.0))
        throw InputError("alpha_from_fr needs f_r > 0, l_g >= 0, c_s > 0");
    const double w = 2.0 * pi * f_r;
    const double alpha = 1.0 - l_g * c_s * w * w;
    if (!(alpha > 0.0))
        throw InputError("unphysical kinetic inductance fraction: the geometric resonance lies below f_r");
    return alpha;
}

double lk_from_alpha(double alpha, double l_g) {
    if (!(alpha >= 0.0) || !(alpha < 1.0)) throw InputError("alpha must lie in [0, 1)");
    return alpha * l_g / (1.0 - alpha);
}

double resonance_frequency(double l_k, double l_g, double c_s) {
    return 1.0 / (2.0 * pi * std::sqrt((l_k + l_g) * c_s));
}

double lk_sigma_from_fr(double f_r, double sigma_f_r, double c_s) {
    // L_k = 1/(w^2 C_s) - L_g, so dL_k/df = -2 / (w^2 C_s f).
    const double w = 2.0 * pi * f_r;
    return 2.0 / (w * w * c_s * f_r) * sigma_f_r;
}

SheetFit sheet_inductance_fit(std::span<const SheetPoint> points) {
    if (points.size() < 2) throw InputError("sheet_inductance_fit needs at least two points");
    std::vector<double> x, y, s;
    bool weighted = true;
    for (const auto& p : points) {
        x.push_back(p.n_sq);
        y.push_back(p.l_k);
        s.push_back(p.sigma);
        if (!(p.sigma > 0.0)) weighted = false;
    }
    const auto line = numerics::fit_line(x, y, weighted ? std::span<const double>(s) : std::span<const double>{});
    return {line.slope, line.intercept, line.var_slope, line.var_intercept, line.cov, weighted};
}

double characteristic_impedance(double l_sq, double w_strip, double c0) {
    if (!(l_sq > 0.0) || !(w_strip > 0.0) || !(c0 > 0.0))
        throw InputError("characteristic_impedance needs positive l_sq, w_strip, c0");
    return std::sqrt(l_sq / w_strip / c0);
}

C0Table::C0Table(std::vector<std::pair<double, double>> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InputError("c0 table is empty");
    std::sort(entries_.begin(), entries_.end());
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].first == entries_[i - 1].first) throw InputError("c0 table has duplicate widths");
}

double C0Table::at(double width) const {
    if (width <= entries_.front().first) return entries_.front().second;
    if (width >= entries_.back().first) return entries_.back().second;
    auto hi = std::upper_bound(entries_.begin(), entries_.end(), width,
                               [](double w, const auto& e) { return w < e.first; });
    auto lo = hi - 1;
    const double t = (width - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

C0Table C0Table::default_table() { return C0Table({{2e-6, 6.6e-12}, {10e-6, 8.4e-12}}); }

}  // namespace resokit::inductance
