#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace resokit::inductance {

/// alpha = 1 - L_g C_s w_r^2. Throws InputError when alpha <= 0.
double alpha_from_fr(double f_r, double l_g, double c_s);

/// L_k = alpha L_g / (1 - alpha). Throws for alpha outside [0, 1).
double lk_from_alpha(double alpha, double l_g);

/// Resonance of the lumped circuit, 1 / (2 pi sqrt((L_k + L_g) C_s)).
double resonance_frequency(double l_k, double l_g, double c_s);

/// 1-sigma of L_k propagated from a 1-sigma on f_r.
double lk_sigma_from_fr(double f_r, double sigma_f_r, double c_s);

struct SheetPoint {
    double n_sq = 0.0;
    double l_k = 0.0;    // H
    double sigma = 0.0;  // H, 0 for unweighted
};

struct SheetFit {
    double l_sq = 0.0;       // H/sq
    double intercept = 0.0;  // H, leads and pads
    double var_l_sq = 0.0;
    double var_intercept = 0.0;
    double cov = 0.0;
    bool weighted = false;
};

/// L_k = L_sq N_sq + intercept. Weighted when every point carries a sigma.
SheetFit sheet_inductance_fit(std::span<const SheetPoint> points);

/// Z0 = sqrt((L_sq / w) / c0).
double characteristic_impedance(double l_sq, double w_strip, double c0);

/// Capacitance per unit length versus strip width, linearly interpolated and
/// held constant outside the table.
class C0Table {
public:
    /// (width m, c0 F/m) pairs, any order; widths must be distinct.
    explicit C0Table(std::vector<std::pair<double, double>> entries);

    double at(double width) const;

    /// Endpoints quoted for coplanar grAl strips: 6.6 aF/um at 2 um, 8.4 aF/um at 10 um.
    static C0Table default_table();

private:
    std::vector<std::pair<double, double>> entries_;
};

}  // namespace resokit::inductance
