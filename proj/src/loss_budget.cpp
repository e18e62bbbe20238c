#include "resokit/loss_budget.hpp"

#include <algorithm>
#include <cmath>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/numerics/levenberg_marquardt.hpp"

namespace resokit::loss {

void LossLedger::validate() const {
    std::vector<Violation> v;
    auto nonneg = [&](const char* name, double x) {
        if (!(x >= 0.0)) v.push_back({name, "must be non-negative"});
    };
    nonneg("gamma_bulk", gamma_bulk);
    nonneg("p_bulk", p_bulk);
    nonneg("gamma_surf", gamma_surf);
    nonneg("p_ma", p_ma);
    nonneg("p_ms", p_ms);
    nonneg("p_sa", p_sa);
    nonneg("q_ind_inv", q_ind_inv);
    nonneg("q_contact_inv", q_contact_inv);
    nonneg("package.gamma_ma", package.gamma_ma);
    nonneg("package.p_ma", package.p_ma);
    nonneg("package.gamma_cond", package.gamma_cond);
    nonneg("package.p_cond", package.p_cond);
    nonneg("package.y_seam", package.y_seam);
    nonneg("package.g_seam_inv", package.g_seam_inv);
    if (!v.empty()) throw ValidationError(std::move(v));
}

InternalLoss total_internal_loss(const LossLedger& ledger) {
    ledger.validate();
    InternalLoss l;
    l.bulk = ledger.p_bulk * ledger.gamma_bulk;
    l.surface = ledger.p_surf() * ledger.gamma_surf;
    l.inductor = ledger.q_ind_inv;
    l.contact = ledger.q_contact_inv;
    l.total = l.bulk + l.surface + l.inductor + l.contact;
    return l;
}

ResidualLoss residual_loss(double q_int, double q_bulk) {
    if (!(q_int > 0.0) || !(q_bulk > 0.0)) throw InputError("residual_loss needs positive q_int and q_bulk");
    const double r = 1.0 / q_int - 1.0 / q_bulk;
    return {r, r < 0.0};
}

PackageLoss package_loss(const PackageLosses& p) {
    PackageLoss l;
    l.ma = p.p_ma * p.gamma_ma;
    l.conductor = p.p_cond * p.gamma_cond;
    l.seam = p.y_seam * p.g_seam_inv;
    l.total = l.ma + l.conductor + l.seam;
    return l;
}

double conductor_loss_factor(double r_s, double lambda, double f) {
    return r_s / (constants::mu0 * 2.0 * constants::pi * f * lambda);
}

double conductor_loss_factor_table(double r_s, double lambda, double f) {
    return r_s / (constants::mu0 * f * lambda);
}

double tls_model(double n, double q0, double a, double n_c, double beta) {
    return 1.0 / q0 + a / std::sqrt(1.0 + std::pow(n / n_c, beta));
}

double TlsFitResult::inv_q(double n) const {
    if (!tls_resolved) return 1.0 / q0;
    return tls_model(n, q0, tls_loss, n_c, beta);
}

TlsFitResult tls_fit(std::span<const TlsPoint> points) {
    if (points.size() < 5) throw InputError("tls_fit needs at least five points");
    std::vector<TlsPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.n_photons < b.n_photons; });
    for (const auto& p : pts)
        if (!(p.n_photons > 0.0) || !(p.inv_q > 0.0)) throw InputError("tls_fit needs positive n and 1/Q");
    if (pts.back().n_photons < 100.0 * pts.front().n_photons)
        throw InputError("insufficient span: photon numbers must cover two decades");
    const bool weighted = std::all_of(pts.begin(), pts.end(), [](auto& p) { return p.sigma > 0.0; });
    const auto n = static_cast<Eigen::Index>(pts.size());

    // Initial values: Q0 from the highest-power point, amplitude from the
    // low-minus-high loss, n_c at the geometric mean of the sweep, beta = 1.
    const double y_hi = pts.back().inv_q, y_lo = pts.front().inv_q;
    const double scale = std::max(y_hi, y_lo);
    const double a0 = std::max(y_lo - y_hi, 1e-3 * scale);
    const double nc0 = std::sqrt(pts.front().n_photons * pts.back().n_photons);

    // p = [1/Q0, A, ln n_c, beta] with losses in units of `scale`.
    auto model = [&](const numerics::Vector& p, double nph) {
        return p[0] + p[1] / std::sqrt(1.0 + std::pow(nph / std::exp(p[2]), p[3]));
    };
    auto residuals = [&](const numerics::Vector& p) {
        numerics::Vector r(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& q = pts[static_cast<std::size_t>(i)];
            const double m = model(p, q.n_photons) * scale;
            r[i] = weighted ? (m - q.inv_q) / q.sigma : (m - q.inv_q) / q.inv_q;
        }
        return r;
    };
    numerics::Vector p0(4);
    p0 << std::max(y_hi / scale, 1e-6), a0 / scale, std::log(nc0), 1.0;
    numerics::Bounds b{numerics::Vector(4), numerics::Vector(4)};
    b.lower << 0.0, 0.0, std::log(pts.front().n_photons) - 10.0, 0.05;
    b.upper << 10.0, 10.0, std::log(pts.back().n_photons) + 10.0, 4.0;
    const auto lm = numerics::levenberg_marquardt(residuals, p0, {}, {}, b);
    const numerics::Matrix cov = weighted ? lm.jtj_inverse : lm.covariance();

    TlsFitResult out;
    out.converged = lm.converged;
    if (!lm.converged) out.warnings.push_back("tls fit did not converge: " + lm.message);
    const double inv_q0 = lm.x[0] * scale, amp = lm.x[1] * scale;
    const double s_inv_q0 = std::sqrt(std::max(0.0, cov(0, 0))) * scale;
    const double s_amp = std::sqrt(std::max(0.0, cov(1, 1))) * scale;

    if (!(amp > 2.0 * s_amp) || !(inv_q0 > 0.0)) {
        // Flat data: the amplitude is consistent with zero, report Q0 only.
        double sw = 0.0, sy = 0.0;
        for (const auto& q : pts) {
            const double w = weighted ? 1.0 / (q.sigma * q.sigma) : 1.0;
            sw += w;
            sy += w * q.inv_q;
        }
        out.tls_resolved = false;
        out.q0 = sw / sy;
        out.q_single_photon = out.q0;
        out.converged = true;
        out.warnings.push_back("tls amplitude consistent with zero; constant loss reported");
        return out;
    }
    out.q0 = 1.0 / inv_q0;
    out.sigma_q0 = s_inv_q0 / (inv_q0 * inv_q0);
    out.tls_loss = amp;
    out.sigma_tls_loss = s_amp;
    out.n_c = std::exp(lm.x[2]);
    out.sigma_n_c = out.n_c * std::sqrt(std::max(0.0, cov(2, 2)));
    out.beta = lm.x[3];
    out.sigma_beta = std::sqrt(std::max(0.0, cov(3, 3)));
    if (out.beta <= b.lower[3] * 1.0001 || out.beta >= b.upper[3] * 0.9999)
        out.warnings.push_back("beta pinned at its bound");
    out.q_single_photon = 1.0 / out.inv_q(1.0);
    return out;
}

}  // namespace resokit::loss
