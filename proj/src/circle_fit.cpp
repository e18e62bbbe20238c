#include "resokit/circle_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/numerics/levenberg_marquardt.hpp"
#include "resokit/numerics/linear_fit.hpp"
#include "resokit/parallel.hpp"
#include "resokit/random.hpp"
#include "resokit/s21.hpp"

namespace resokit::circle {

using namespace std::complex_literals;
using constants::pi;
using numerics::Matrix;
using numerics::Vector;

cdouble Environment::at(double freq) const {
    return amplitude * std::polar(1.0, phase - 2.0 * pi * delay * (freq - f_ref));
}

CircleGeometry fit_circle_algebraic(std::span<const cdouble> z) {
    const auto n = static_cast<Eigen::Index>(z.size());
    if (n < 3) throw InputError("circle fit needs at least three points");
    cdouble mean = std::accumulate(z.begin(), z.end(), cdouble{}) / static_cast<double>(n);

    Eigen::VectorXd xs(n), ys(n), zz(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        xs[i] = z[i].real() - mean.real();
        ys[i] = z[i].imag() - mean.imag();
        zz[i] = xs[i] * xs[i] + ys[i] * ys[i];
    }
    const double zmean = zz.mean();
    if (!(zmean > 0.0)) throw FitError("degenerate circle: all points coincide");
    const double zscale = 2.0 * std::sqrt(zmean);

    Eigen::MatrixXd m(n, 3);
    m.col(0) = (zz.array() - zmean) / zscale;
    m.col(1) = xs;
    m.col(2) = ys;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    Eigen::Vector3d a = svd.matrixV().col(2);
    const double a0 = a[0] / zscale;
    const double a3 = -zmean * a0;
    if (std::abs(a0) < 1e-14 * std::hypot(a[1], a[2]))
        throw FitError("degenerate circle: points are collinear");

    CircleGeometry c;
    c.center = cdouble(-a[1] / (2.0 * a0), -a[2] / (2.0 * a0)) + mean;
    c.radius = std::sqrt(a[1] * a[1] + a[2] * a[2] - 4.0 * a0 * a3) / (2.0 * std::abs(a0));
    return c;
}

double circle_rms_residual(std::span<const cdouble> z, const CircleGeometry& c) {
    double acc = 0.0;
    for (auto zi : z) {
        const double d = std::abs(zi - c.center) - c.radius;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(z.size()));
}

namespace {

std::vector<double> unwrapped_angles(std::span<const cdouble> z, cdouble centre) {
    std::vector<double> th(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        th[i] = std::arg(z[i] - centre);
        if (i > 0) {
            while (th[i] - th[i - 1] > pi) th[i] -= 2.0 * pi;
            while (th[i] - th[i - 1] < -pi) th[i] += 2.0 * pi;
        }
    }
    return th;
}

// Frequency at which the (monotone on average) sequence th crosses `level`,
// by linear interpolation at the first crossing; nullopt if never crossed.
std::optional<double> crossing(std::span<const double> f, std::span<const double> th, double level) {
    for (std::size_t i = 1; i < th.size(); ++i) {
        const double a = th[i - 1] - level, b = th[i] - level;
        if ((a >= 0.0 && b <= 0.0) || (a <= 0.0 && b >= 0.0)) {
            if (a == b) return f[i];
            return f[i - 1] + (f[i] - f[i - 1]) * a / (a - b);
        }
    }
    return std::nullopt;
}

}  // namespace

PhaseFit fit_phase(std::span<const double> freqs, std::span<const cdouble> z, cdouble centre) {
    const auto th = unwrapped_angles(z, centre);
    const std::size_t n = th.size();

    PhaseFit init;
    init.theta0 = 0.5 * (th.front() + th.back());
    const double span = th.front() - th.back();
    init.f_r = crossing(freqs, th, init.theta0).value_or(0.5 * (freqs.front() + freqs.back()));
    // FWHM from the +-pi/2 crossings; otherwise from the mid slope d theta/df = -4 Q_L / f_r.
    auto lo = crossing(freqs, th, init.theta0 + 0.5 * pi);
    auto hi = crossing(freqs, th, init.theta0 - 0.5 * pi);
    if (lo && hi && *hi > *lo && span > pi) {
        init.q_loaded = init.f_r / (*hi - *lo);
    } else {
        std::size_t k = 1;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(freqs[i] - init.f_r) < std::abs(freqs[k] - init.f_r)) k = i;
        const std::size_t a = k > 0 ? k - 1 : 0, b = std::min(k + 1, n - 1);
        const double slope = (th[b] - th[a]) / (freqs[b] - freqs[a]);
        init.q_loaded = std::max(std::abs(slope) * init.f_r / 4.0, 1.0);
    }

    const double f0 = init.f_r, q0 = init.q_loaded;
    auto residuals = [&](const Vector& p) {
        const double fr = f0 * (1.0 + p[2] / q0);
        const double ql = std::exp(p[1]);
        Vector r(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            r[static_cast<Eigen::Index>(i)] = th[i] - (p[0] + 2.0 * std::atan(2.0 * ql * (1.0 - freqs[i] / fr)));
        return r;
    };
    Vector p0(3);
    p0 << init.theta0, std::log(q0), 0.0;
    const auto lm = numerics::levenberg_marquardt(residuals, p0);
    PhaseFit out;
    out.theta0 = lm.x[0];
    out.q_loaded = std::exp(lm.x[1]);
    out.f_r = f0 * (1.0 + lm.x[2] / q0);
    if (!std::isfinite(out.f_r) || !std::isfinite(out.q_loaded)) return init;
    return out;
}

DelayEstimate estimate_cable_delay(std::span<const double> freqs, std::span<const cdouble> z,
                                   double edge_fraction, double threshold) {
    const std::size_t n = z.size();
    const std::size_t k = std::max<std::size_t>(3, static_cast<std::size_t>(edge_fraction * static_cast<double>(n)));
    DelayEstimate out;
    if (2 * k > n) return out;

    // Common slope, separate intercepts: centre each edge and pool.
    std::vector<double> ph(n);
    for (std::size_t i = 0; i < n; ++i) {
        ph[i] = std::arg(z[i]);
        if (i > 0) {
            while (ph[i] - ph[i - 1] > pi) ph[i] -= 2.0 * pi;
            while (ph[i] - ph[i - 1] < -pi) ph[i] += 2.0 * pi;
        }
    }
    std::vector<double> x, y;
    for (int edge = 0; edge < 2; ++edge) {
        const std::size_t start = edge == 0 ? 0 : n - k;
        double fm = 0.0, pm = 0.0;
        for (std::size_t i = start; i < start + k; ++i) {
            fm += freqs[i];
            pm += ph[i];
        }
        fm /= static_cast<double>(k);
        pm /= static_cast<double>(k);
        for (std::size_t i = start; i < start + k; ++i) {
            x.push_back(freqs[i] - fm);
            y.push_back(ph[i] - pm);
        }
    }
    const auto line = numerics::fit_line(x, y);
    // Two intercepts were removed by centring; correct the dof.
    const double dof_fix = static_cast<double>(x.size() - 2) / static_cast<double>(x.size() - 3);
    const double sigma = std::sqrt(line.var_slope * dof_fix);
    out.delay = -line.slope / (2.0 * pi);
    out.sigma = sigma / (2.0 * pi);
    // The absolute floor keeps numerically exact traces from flagging round-off.
    const double range = freqs.back() - freqs.front();
    out.significant = std::abs(line.slope) > threshold * sigma && std::abs(line.slope) * range > 1e-10;
    return out;
}

namespace {

// LM parameter layout. Frequency and Q_L are scaled so that all parameters
// are O(1) near the optimum.
struct Layout {
    bool with_delay = false;
    double f_ref = 0.0;   // frequency origin of the delay term and f_r offset
    double q_ref = 1.0;   // scale of the f_r offset
    double span = 1.0;    // 1 / sweep width; delay = p * span

    Eigen::Index size() const { return with_delay ? 7 : 6; }
    Eigen::Index i_amp() const { return 0; }
    Eigen::Index i_phase() const { return 1; }
    Eigen::Index i_fr() const { return 2; }
    Eigen::Index i_lnql() const { return 3; }
    Eigen::Index i_diam() const { return 4; }
    Eigen::Index i_phi() const { return 5; }
    Eigen::Index i_delay() const { return 6; }

    double f_r(const Vector& p) const { return f_ref * (1.0 + p[i_fr()] / q_ref); }
    double delay(const Vector& p) const { return with_delay ? p[i_delay()] * span : 0.0; }
};

cdouble model_point(const Layout& L, const Vector& p, double f) {
    const double fr = L.f_r(p);
    const double ql = std::exp(p[L.i_lnql()]);
    const cdouble env = p[L.i_amp()] * std::polar(1.0, p[L.i_phase()] - 2.0 * pi * L.delay(p) * (f - L.f_ref));
    const cdouble g = 1.0 + 2.0i * ql * (f / fr - 1.0);
    return env * (1.0 - p[L.i_diam()] * std::polar(1.0, p[L.i_phi()]) / g);
}

// Steps 2-5 of the pipeline at a given delay. With fit_delay the delay is
// a free parameter initialised at delay0; otherwise it is held at delay0.
TraceFit refine(const ComplexTrace& trace, double delay0, bool fit_delay, const FitOptions& options) {
    const auto& f = trace.freqs();
    const auto& raw = trace.values();
    const std::size_t n = raw.size();
    TraceFit out;
    const double f_mid = 0.5 * (f.front() + f.back());

    std::vector<cdouble> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = raw[i] * std::polar(1.0, 2.0 * pi * delay0 * (f[i] - f_mid));

    // 2. algebraic circle
    const CircleGeometry circ = fit_circle_algebraic(z);
    const double rms = circle_rms_residual(z, circ);
    if (circ.radius < 2.0 * rms || !std::isfinite(circ.radius))
        throw FitError("degenerate circle: radius below noise floor");
    out.circle = circ;

    // 3. phase vs frequency about the centre
    const auto th = unwrapped_angles(z, circ.center);
    if (std::abs(th.front() - th.back()) < 0.5 * pi)
        throw FitError("insufficient span: the sweep covers less than a quarter of the resonance circle");
    const PhaseFit ph = fit_phase(f, z, circ.center);

    // 4. translate to model parameters through the off-resonant point
    const cdouble off = circ.center - circ.radius * std::polar(1.0, ph.theta0);
    const cdouble c_norm = circ.center / off;
    const double diam0 = 2.0 * circ.radius / std::abs(off);
    const double phi0 = std::arg(1.0 - c_norm);

    // 5. weighted LM refinement of the full complex model
    Layout L;
    L.with_delay = fit_delay;
    L.f_ref = f_mid;
    L.q_ref = ph.q_loaded;
    L.span = 1.0 / (f.back() - f.front());
    Vector p0(L.size());
    p0[L.i_amp()] = std::abs(off);
    p0[L.i_phase()] = std::arg(off);
    p0[L.i_fr()] = (ph.f_r / f_mid - 1.0) * L.q_ref;
    p0[L.i_lnql()] = std::log(ph.q_loaded);
    p0[L.i_diam()] = diam0;
    p0[L.i_phi()] = phi0;
    if (fit_delay) p0[L.i_delay()] = delay0 / L.span;

    const double w = trace.noise_sigma && *trace.noise_sigma > 0.0 ? 1.0 / *trace.noise_sigma : 1.0;
    // The phase-fit pre-rotation by delay0 is folded back: the model carries the
    // full delay when it is fitted, and delay0 is fixed otherwise.
    const double fixed_delay = fit_delay ? 0.0 : delay0;
    auto residuals = [&](const Vector& p) {
        Vector r(2 * static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const cdouble m = model_point(L, p, f[i]) * std::polar(1.0, -2.0 * pi * fixed_delay * (f[i] - f_mid));
            const cdouble d = (m - raw[i]) * w;
            r[2 * static_cast<Eigen::Index>(i)] = d.real();
            r[2 * static_cast<Eigen::Index>(i) + 1] = d.imag();
        }
        return r;
    };
    auto jacobian = [&](const Vector& p) {
        Matrix J(2 * static_cast<Eigen::Index>(n), L.size());
        const double fr = L.f_r(p);
        const double ql = std::exp(p[L.i_lnql()]);
        const double amp = p[L.i_amp()];
        const double diam = p[L.i_diam()];
        const cdouble eph = std::polar(1.0, p[L.i_phi()]);
        for (std::size_t i = 0; i < n; ++i) {
            const double df = f[i] - L.f_ref;
            const cdouble env = amp * std::polar(1.0, p[L.i_phase()] - 2.0 * pi * (L.delay(p) + fixed_delay) * df);
            const double x = f[i] / fr - 1.0;
            const cdouble g = 1.0 + 2.0i * ql * x;
            const cdouble res = 1.0 - diam * eph / g;
            const cdouble s = env * res;
            const cdouble k = env * diam * eph / (g * g);  // d S / d g times -1
            cdouble d[7];
            d[0] = env / amp * res;
            d[1] = 1.0i * s;
            d[2] = k * 2.0i * ql * (-f[i] / (fr * fr)) * (L.f_ref / L.q_ref);
            d[3] = k * 2.0i * ql * x;
            d[4] = -env * eph / g;
            d[5] = -env * diam * 1.0i * eph / g;
            d[6] = -2.0i * pi * df * s * L.span;
            for (Eigen::Index j = 0; j < L.size(); ++j) {
                J(2 * static_cast<Eigen::Index>(i), j) = d[j].real() * w;
                J(2 * static_cast<Eigen::Index>(i) + 1, j) = d[j].imag() * w;
            }
        }
        return J;
    };

    numerics::LmOptions lmo;
    lmo.max_iterations = options.max_iterations;
    const auto lm = numerics::levenberg_marquardt(residuals, p0, lmo, jacobian);
    const Vector& p = lm.x;
    if (!p.allFinite()) throw FitError("fit_trace: refinement produced non-finite parameters");

    const Matrix cov = trace.noise_sigma ? lm.jtj_inverse : lm.covariance();

    double phi = std::remainder(p[L.i_phi()], 2.0 * pi);
    if (phi <= -pi) phi += 2.0 * pi;
    const double ql = std::exp(p[L.i_lnql()]);
    const double diam = p[L.i_diam()];
    const double one_minus = 1.0 - diam * std::cos(phi);
    out.params.f_r = L.f_r(p);
    out.params.q_c_mag = ql / diam;
    out.params.q_int = ql / one_minus;
    out.params.phi = phi;
    out.environment = {p[L.i_amp()], p[L.i_phase()], L.delay(p) + fixed_delay, f_mid};
    out.delay_fitted = fit_delay;

    // Covariance propagation to derived parameters.
    auto propagate = [&](const Vector& grad) { return std::sqrt(std::max(0.0, grad.dot(cov * grad))); };
    Vector g_fr = Vector::Zero(L.size()), g_qi = g_fr, g_qc = g_fr, g_phi = g_fr, g_ql = g_fr;
    g_fr[L.i_fr()] = L.f_ref / L.q_ref;
    g_ql[L.i_lnql()] = ql;
    g_qc[L.i_lnql()] = ql / diam;
    g_qc[L.i_diam()] = -ql / (diam * diam);
    g_qi[L.i_lnql()] = ql / one_minus;
    g_qi[L.i_diam()] = ql * std::cos(phi) / (one_minus * one_minus);
    g_qi[L.i_phi()] = -ql * diam * std::sin(phi) / (one_minus * one_minus);
    g_phi[L.i_phi()] = 1.0;

    auto& rep = out.report;
    rep.estimates = {
        {"f_r", out.params.f_r, propagate(g_fr)},
        {"q_int", out.params.q_int, propagate(g_qi)},
        {"q_c_mag", out.params.q_c_mag, propagate(g_qc)},
        {"phi", phi, propagate(g_phi)},
        {"q_loaded", ql, propagate(g_ql)},
        {"amplitude", p[L.i_amp()], std::sqrt(std::max(0.0, cov(L.i_amp(), L.i_amp())))},
        {"phase", p[L.i_phase()], std::sqrt(std::max(0.0, cov(L.i_phase(), L.i_phase())))},
        {"delay", out.environment.delay,
         fit_delay ? std::sqrt(std::max(0.0, cov(L.i_delay(), L.i_delay()))) * L.span : 0.0},
    };
    rep.residual_norm = std::sqrt(lm.cost) / w;
    rep.iterations = lm.iterations;
    rep.converged = lm.converged;
    if (!lm.converged) rep.warnings.push_back("refinement did not converge: " + lm.message);
    if (!(out.params.q_int > 0.0)) {
        rep.warnings.push_back("non-physical internal quality factor (negative internal loss)");
        rep.converged = false;
    }
    const double span_lw = (f.back() - f.front()) * ql / out.params.f_r;
    // Arc swept by the fitted model; a delay cannot stand in for missing arc.
    const double arc = 2.0 * (std::atan(2.0 * ql * (f.back() / out.params.f_r - 1.0)) -
                              std::atan(2.0 * ql * (f.front() / out.params.f_r - 1.0)));
    if (std::abs(arc) < 0.5 * pi)
        throw FitError("insufficient span: the sweep covers less than a quarter of the resonance circle");
    if (span_lw < options.min_span_linewidths)
        rep.warnings.push_back("sweep spans only " + std::to_string(span_lw) + " linewidths");
    if (trace.power_in && out.params.q_int > 0.0) rep.photon_number = s21::photon_number(out.params, *trace.power_in);
    return out;
}

}  // namespace

TraceFit fit_trace(const ComplexTrace& trace, const FitOptions& options) {
    if (!trace.is_frequency()) throw InputError("fit_trace needs a frequency sweep");
    const auto& f = trace.freqs();
    const auto& raw = trace.values();
    if (raw.size() < options.min_points)
        throw InputError("fit_trace needs at least " + std::to_string(options.min_points) + " points, got " +
                         std::to_string(raw.size()));

    if (options.delay_mode == DelayMode::off) return refine(trace, 0.0, false, options);
    if (options.delay_mode == DelayMode::fixed) return refine(trace, options.fixed_delay, false, options);

    // Automatic: the edge slope is measured on the residual phase arg(S / model),
    // which removes the resonance's own contribution. Iteration starts from zero
    // delay and, when the raw edges show a slope, also from the raw estimate; the
    // start with the clearly smaller final residual wins.
    auto iterate = [&](double start) -> std::optional<TraceFit> {
        double delay = start;
        TraceFit fit;
        try {
            fit = refine(trace, delay, false, options);
        } catch (const FitError&) {
            return std::nullopt;
        }
        bool corrected = delay != 0.0;
        for (int pass = 0; pass < 8; ++pass) {
            const auto model = model_values(fit, f);
            std::vector<cdouble> ratio(raw.size());
            for (std::size_t i = 0; i < raw.size(); ++i) ratio[i] = raw[i] / model[i];
            const auto est = estimate_cable_delay(f, ratio, options.edge_fraction, options.delay_threshold);
            if (!est.significant) break;
            const double next = fit.environment.delay + est.delay;
            try {
                fit = refine(trace, next, false, options);
            } catch (const FitError&) {
                break;
            }
            delay = next;
            corrected = true;
        }
        if (!corrected) return fit;
        try {
            return refine(trace, delay, true, options);
        } catch (const FitError&) {
            return fit;
        }
    };

    // A delay is only identifiable when the sweep reaches well off resonance.
    auto identifiable = [&](const std::optional<TraceFit>& t) {
        if (!t || t->environment.delay == 0.0) return t;
        const double span_lw = (f.back() - f.front()) * t->params.q_loaded() / t->params.f_r;
        return span_lw >= options.min_span_linewidths ? t : std::nullopt;
    };
    std::optional<TraceFit> best = identifiable(iterate(0.0));
    const auto raw_est = estimate_cable_delay(f, raw, options.edge_fraction, options.delay_threshold);
    if (raw_est.significant) {
        auto alt = identifiable(iterate(raw_est.delay));
        // The alternative must beat the zero start clearly, not by one extra parameter's worth.
        auto cost = [](const TraceFit& t) { return t.report.residual_norm * t.report.residual_norm; };
        if (alt && (!best || cost(*alt) < 0.99 * cost(*best))) best = std::move(alt);
    }
    if (!best) return refine(trace, 0.0, false, options);  // rethrows the diagnostic FitError
    return *best;
}

std::vector<cdouble> model_values(const TraceFit& fit, std::span<const double> freqs) {
    std::vector<cdouble> v;
    v.reserve(freqs.size());
    for (double fi : freqs) v.push_back(fit.environment.at(fi) * s21::response(fit.params, fi));
    return v;
}

MonteCarloSpread monte_carlo_uncertainty(const TraceFit& fit, const ComplexTrace& trace, int draws,
                                         std::uint64_t seed, const FitOptions& options) {
    const auto& f = trace.freqs();
    const auto clean = model_values(fit, f);
    const double sigma = fit.report.residual_norm / std::sqrt(2.0 * static_cast<double>(f.size()));
    std::vector<std::array<double, 4>> samples(static_cast<std::size_t>(draws));
    std::vector<char> ok(static_cast<std::size_t>(draws), 0);
    parallel_for(static_cast<std::size_t>(draws), [&](std::size_t d) {
        random::PhiloxStream rng(seed, d);
        std::vector<cdouble> v(clean.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double re = rng.normal(), im = rng.normal();
            v[i] = clean[i] + sigma * cdouble(re, im);
        }
        try {
            const auto refit = fit_trace(ComplexTrace::frequency_sweep(f, std::move(v)), options);
            samples[d] = {refit.params.f_r, refit.params.q_int, refit.params.q_c_mag, refit.params.phi};
            ok[d] = 1;
        } catch (const std::exception&) {
        }
    });
    MonteCarloSpread out;
    std::array<double, 4> mean{}, sq{};
    for (std::size_t d = 0; d < samples.size(); ++d) {
        if (!ok[d]) continue;
        ++out.draws;
        for (int k = 0; k < 4; ++k) mean[k] += samples[d][k];
    }
    if (out.draws < 2) return out;
    for (auto& m : mean) m /= out.draws;
    for (std::size_t d = 0; d < samples.size(); ++d) {
        if (!ok[d]) continue;
        for (int k = 0; k < 4; ++k) sq[k] += (samples[d][k] - mean[k]) * (samples[d][k] - mean[k]);
    }
    auto sd = [&](int k) { return std::sqrt(sq[k] / (out.draws - 1)); };
    out.f_r = sd(0);
    out.q_int = sd(1);
    out.q_c_mag = sd(2);
    out.phi = sd(3);
    return out;
}

Histogram make_histogram(std::span<const double> values, int bins) {
    if (bins < 1) throw InputError("histogram needs at least one bin");
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    if (values.empty()) return h;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    const double width = hi > lo ? (hi - lo) / bins : 1.0;
    for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + b * width);
    for (double v : values) {
        auto b = static_cast<int>((v - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

StabilityStats fit_stability(std::span<const ComplexTrace> traces, int bins, const FitOptions& options) {
    if (traces.size() < 2) throw InputError("fit_stability needs at least two traces");
    StabilityStats st;
    st.fits.resize(traces.size());
    std::vector<std::string> errors(traces.size());
    parallel_for(traces.size(), [&](std::size_t i) {
        try {
            auto fit = fit_trace(traces[i], options);
            if (!fit.report.converged) {
                errors[i] = fit.report.warnings.empty() ? "not converged" : fit.report.warnings.front();
                return;
            }
            st.fits[i] = std::move(fit);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    std::vector<double> q;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        if (st.fits[i]) {
            q.push_back(st.fits[i]->params.q_int);
        } else {
            st.failed.push_back(i);
            st.failure_messages.push_back(errors[i]);
        }
    }
    if (!q.empty()) {
        st.mean_q_int = std::accumulate(q.begin(), q.end(), 0.0) / static_cast<double>(q.size());
        double acc = 0.0;
        for (double v : q) acc += (v - st.mean_q_int) * (v - st.mean_q_int);
        st.std_q_int = q.size() > 1 ? std::sqrt(acc / static_cast<double>(q.size() - 1)) : 0.0;
    }
    st.histogram = make_histogram(q, bins);
    return st;
}

}  // namespace resokit::circle
