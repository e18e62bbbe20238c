#pragma once

#include <span>

#include "resokit/types.hpp"

namespace resokit::jja {

struct PowerPoint {
    double n_photons = 0.0;
    double f_r = 0.0;    // Hz
    double sigma = 0.0;  // Hz, 0 for unweighted
};

struct KerrFit {
    double k = 0.0;        // Hz/photon, signed
    double sigma_k = 0.0;
    double f0 = 0.0;       // zero-photon frequency
    double sigma_f0 = 0.0;
};

/// Linear fit f_r(n) = f0 + K n. Photon numbers must be strictly monotone,
/// take at least three distinct values and span a decade.
KerrFit kerr_from_power_sweep(std::span<const PowerPoint> points);

/// Participation of the strip, L_strip / (L_strip + L_leads).
double strip_participation(double l_strip, double l_leads);

/// K_strip = K / p^2. Uses |K|.
double strip_kerr(double k_measured, double p_strip);

/// Self-Kerr of an array of n_jj junctions, E_c / (h N^2), in Hz/photon.
double kerr_from_njj(double n_jj, double e_c);

struct ArraySize {
    double n_jj = 0.0;
    double a_eff = 0.0;  // m
};

/// N_JJ = sqrt(E_c / h / K_strip) and a_eff = l_strip / N_JJ.
ArraySize njj_from_kerr(double k_strip, double e_c, double l_strip);

struct JunctionChain {
    double l_j = 0.0;  // H
    double i_c = 0.0;  // A
    double j_c = 0.0;  // A/m^2
};

/// L_J = L_k_strip / N, I_c = Phi0 / (2 pi L_J), J_c = I_c / (w t).
JunctionChain critical_current_density(double l_k_strip, double n_jj, const DeviceGeometry& geometry);

struct JjaModel {
    double n_jj = 0.0;
    double a_eff = 0.0;
    double l_j = 0.0;
    double i_c = 0.0;
    double j_c = 0.0;
    double k_measured = 0.0;
    double k_strip = 0.0;
};

/// Chains strip_kerr, njj_from_kerr and critical_current_density.
JjaModel infer_array(double k_measured, double p_strip, double e_c, double l_k_strip, const DeviceGeometry& geometry);

}  // namespace resokit::jja
