#include "resokit/s21.hpp"

#include <cmath>

#include "resokit/constants.hpp"

namespace resokit::s21 {

using namespace std::complex_literals;

cdouble response_at_detuning(const HangerParams& p, double x) {
    const double ql = p.q_loaded();
    return 1.0 - (ql / p.q_c_mag) * std::polar(1.0, p.phi) / (1.0 + 2.0i * ql * x);
}

cdouble response(const HangerParams& p, double freq) { return response_at_detuning(p, freq / p.f_r - 1.0); }

ComplexTrace s21_hanger(const HangerParams& p, std::span<const double> freqs) {
    p.validate();
    std::vector<double> f(freqs.begin(), freqs.end());
    std::vector<cdouble> v;
    v.reserve(f.size());
    for (double fi : f) v.push_back(response(p, fi));
    return ComplexTrace::frequency_sweep(std::move(f), std::move(v));
}

double photon_number(const HangerParams& p, double power_in) {
    if (power_in < 0.0) throw InputError("power_in must be non-negative");
    const double ql = p.q_loaded();
    const double w = 2.0 * constants::pi * p.f_r;
    return 2.0 * ql * ql / (constants::hbar * w * w * p.q_c_mag) * power_in;
}

double power_for_photon_number(const HangerParams& p, double n_photons) {
    return n_photons / photon_number(p, 1.0);
}

CircleGeometry resonance_circle(const HangerParams& p) {
    const double d = p.diameter();
    return {1.0 - 0.5 * d * std::polar(1.0, p.phi), 0.5 * d};
}

cdouble project_onto_circle(cdouble point, const HangerParams& p) {
    const auto c = resonance_circle(p);
    const cdouble rel = point - c.center;
    const double r = std::abs(rel);
    if (r < singular_tolerance * c.radius)
        throw SingularPointError("point coincides with the circle centre; no radial projection");
    return c.center + rel * (c.radius / r);
}

double detuning_from_point(cdouble point, const HangerParams& p, double tol) {
    const cdouble on_circle = project_onto_circle(point, p);
    const cdouble gap = 1.0 - on_circle;
    if (std::abs(gap) < tol)
        throw SingularPointError("point is at the off-resonant singular point 1+0i");
    const double ql = p.q_loaded();
    // 1 + 2i Q_L x = (Q_L/|Q_c|) e^{i phi} / (1 - S)
    const cdouble lhs = p.diameter() * std::polar(1.0, p.phi) / gap;
    return lhs.imag() / (2.0 * ql);
}

}  // namespace resokit::s21
