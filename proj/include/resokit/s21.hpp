#pragma once

#include <span>

#include "resokit/errors.hpp"
#include "resokit/types.hpp"

/// Forward model of the notch (hanger) transmission
///
///   S21(f) = 1 - (Q_L/|Q_c|) e^{i phi} / (1 + 2 i Q_L (f/f_r - 1))
///
/// and its inverse on the resonance circle.
namespace resokit::s21 {

class SingularPointError : public InputError {
public:
    using InputError::InputError;
};

/// Default |1 - S| below which inversion is refused.
inline constexpr double singular_tolerance = 1e-12;

/// S21 at fractional detuning x = f/f_r - 1. No validation.
cdouble response_at_detuning(const HangerParams& p, double x);

cdouble response(const HangerParams& p, double freq);

/// Evaluates the model on `freqs`. Parameters are validated.
ComplexTrace s21_hanger(const HangerParams& p, std::span<const double> freqs);

/// Mean intracavity photon number n = 2 Q_L^2 P_in / (hbar w_r^2 Q_c), with
/// Q_c taken as |Q_c|.
double photon_number(const HangerParams& p, double power_in);

/// Input power (W) that gives `n_photons`; inverse of photon_number.
double power_for_photon_number(const HangerParams& p, double n_photons);

/// Centre and radius of the resonance circle (unit off-resonant background).
CircleGeometry resonance_circle(const HangerParams& p);

/// Radial projection of `point` onto the resonance circle.
cdouble project_onto_circle(cdouble point, const HangerParams& p);

/// Fractional detuning x = f/f_r - 1 of a sample. Off-circle points are first
/// projected radially; the circle is then inverted algebraically.
/// Throws SingularPointError near the off-resonant point 1+0i.
double detuning_from_point(cdouble point, const HangerParams& p, double tol = singular_tolerance);

struct DetuningPoint {
    cdouble s_value;
    double detuning_x = 0.0;
};

}  // namespace resokit::s21
