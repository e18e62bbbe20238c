#include "resokit/jja_kerr.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/numerics/linear_fit.hpp"

namespace resokit::jja {

KerrFit kerr_from_power_sweep(std::span<const PowerPoint> points) {
    if (points.size() < 3) throw InputError("power sweep needs at least three points");
    bool up = true, down = true;
    for (std::size_t i = 1; i < points.size(); ++i) {
        up = up && points[i].n_photons > points[i - 1].n_photons;
        down = down && points[i].n_photons < points[i - 1].n_photons;
    }
    if (!up && !down) throw InputError("photon numbers must be strictly monotonic");
    std::vector<double> x, y, s;
    bool weighted = true;
    double lo = points.front().n_photons, hi = lo;
    for (const auto& p : points) {
        if (!(p.n_photons > 0.0)) throw InputError("photon numbers must be positive");
        x.push_back(p.n_photons);
        y.push_back(p.f_r);
        s.push_back(p.sigma);
        weighted = weighted && p.sigma > 0.0;
        lo = std::min(lo, p.n_photons);
        hi = std::max(hi, p.n_photons);
    }
    if (hi < 10.0 * lo) throw InputError("insufficient span: photon numbers must cover at least one decade");
    // Fit about the first frequency so that Hz-level shifts survive on a GHz carrier.
    const double f_ref = y.front();
    for (auto& v : y) v -= f_ref;
    const auto line = numerics::fit_line(x, y, weighted ? std::span<const double>(s) : std::span<const double>{});
    return {line.slope, std::sqrt(line.var_slope), f_ref + line.intercept, std::sqrt(line.var_intercept)};
}

double strip_participation(double l_strip, double l_leads) {
    if (!(l_strip > 0.0) || !(l_leads >= 0.0)) throw InputError("strip participation needs l_strip > 0, l_leads >= 0");
    return l_strip / (l_strip + l_leads);
}

double strip_kerr(double k_measured, double p_strip) {
    if (!(p_strip > 0.0) || p_strip > 1.0) throw InputError("p_strip must lie in (0, 1]");
    return std::abs(k_measured) / (p_strip * p_strip);
}

double kerr_from_njj(double n_jj, double e_c) { return e_c / constants::h / (n_jj * n_jj); }

ArraySize njj_from_kerr(double k_strip, double e_c, double l_strip) {
    if (!(k_strip > 0.0)) throw InputError("k_strip must be positive");
    const double n = std::sqrt(e_c / constants::h / k_strip);
    return {n, l_strip / n};
}

JunctionChain critical_current_density(double l_k_strip, double n_jj, const DeviceGeometry& geometry) {
    if (!(n_jj >= 1.0)) throw InputError("n_jj must be at least 1");
    if (!(l_k_strip > 0.0)) throw InputError("l_k_strip must be positive");
    JunctionChain c;
    c.l_j = l_k_strip / n_jj;
    c.i_c = constants::phi0 / (2.0 * constants::pi * c.l_j);
    c.j_c = c.i_c / geometry.cross_section();
    return c;
}

JjaModel infer_array(double k_measured, double p_strip, double e_c, double l_k_strip, const DeviceGeometry& geometry) {
    JjaModel m;
    m.k_measured = k_measured;
    m.k_strip = strip_kerr(k_measured, p_strip);
    const auto size = njj_from_kerr(m.k_strip, e_c, geometry.l_strip);
    m.n_jj = size.n_jj;
    m.a_eff = size.a_eff;
    const auto chain = critical_current_density(l_k_strip, m.n_jj, geometry);
    m.l_j = chain.l_j;
    m.i_c = chain.i_c;
    m.j_c = chain.j_c;
    return m;
}

}  // namespace resokit::jja
