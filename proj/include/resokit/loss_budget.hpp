#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace resokit::loss {

struct PackageLosses {
    double gamma_ma = 0.0;    // MA-interface loss tangent
    double p_ma = 0.0;
    double gamma_cond = 0.0;  // R_s / (mu0 w lambda)
    double p_cond = 0.0;
    double y_seam = 0.0;      // 1/(Ohm m)
    double g_seam_inv = 0.0;  // Ohm m
};

/// Loss factors and participations of the four device channels and the package.
/// 1/Q_ind and 1/Q_contact are not separable from measurements; their split is
/// an annotation only and the budget uses their sum.
struct LossLedger {
    double gamma_bulk = 0.0;
    double p_bulk = 0.0;
    double gamma_surf = 0.0;
    double p_ma = 0.0, p_ms = 0.0, p_sa = 0.0;
    double q_ind_inv = 0.0;
    double q_contact_inv = 0.0;
    std::string conductor_split_note;
    PackageLosses package;

    double p_surf() const { return p_ma + p_ms + p_sa; }
    /// Throws ValidationError for negative participations or loss factors.
    void validate() const;
};

struct InternalLoss {
    double bulk = 0.0;
    double surface = 0.0;
    double inductor = 0.0;
    double contact = 0.0;
    double total = 0.0;
    double q_int() const { return 1.0 / total; }
};

InternalLoss total_internal_loss(const LossLedger& ledger);

struct ResidualLoss {
    double inv_q_res = 0.0;
    bool negative = false;  // Q_int above Q_bulk: inconsistent inputs
};

/// 1/Q_res = 1/Q_int - 1/Q_bulk, negative values flagged.
ResidualLoss residual_loss(double q_int, double q_bulk);

struct PackageLoss {
    double ma = 0.0;
    double conductor = 0.0;
    double seam = 0.0;
    double total = 0.0;
    double q_pkg() const { return 1.0 / total; }
};

PackageLoss package_loss(const PackageLosses& package);

/// R_s / (mu0 w lambda) with w = 2 pi f.
double conductor_loss_factor(double r_s, double lambda, double f);

/// R_s / (mu0 f lambda): the convention that reproduces the tabulated
/// package conductor factor (2.1e-3 for 0.61 uOhm, 50 nm, 4.60 GHz).
double conductor_loss_factor_table(double r_s, double lambda, double f);

struct TlsPoint {
    double n_photons = 0.0;
    double inv_q = 0.0;
    double sigma = 0.0;  // 0 for relative weighting
};

struct TlsFitResult {
    double q0 = 0.0;
    double tls_loss = 0.0;  // p_surf tan(delta_TLS)
    double n_c = 0.0;
    double beta = 0.0;
    double sigma_q0 = 0.0, sigma_tls_loss = 0.0, sigma_n_c = 0.0, sigma_beta = 0.0;
    double q_single_photon = 0.0;
    bool tls_resolved = true;  // false: amplitude consistent with zero, constant fit reported
    bool converged = false;
    std::vector<std::string> warnings;

    double inv_q(double n_photons) const;
};

/// 1/Q(n) = 1/Q0 + A / sqrt(1 + (n/n_c)^beta). Needs five points over two decades.
TlsFitResult tls_fit(std::span<const TlsPoint> points);

double tls_model(double n_photons, double q0, double tls_loss, double n_c, double beta);

}  // namespace resokit::loss
