#pragma once

#include <numbers>

namespace resokit::constants {

// CODATA 2018 exact / recommended values, SI.
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double e = 1.602176634e-19;         // C
inline constexpr double phi0 = 2.067833848e-15;      // Wb
inline constexpr double k_B = 1.380649e-23;          // J/K
inline constexpr double mu0 = 1.25663706212e-6;      // H/m
inline constexpr double pi = std::numbers::pi;
inline constexpr double h = 2.0 * pi * hbar;         // J s

/// Weak-coupling BCS ratio Delta(0) / (k_B T_c) used when the gap is not given.
inline constexpr double bcs_gap_ratio = 1.764;

}  // namespace resokit::constants
