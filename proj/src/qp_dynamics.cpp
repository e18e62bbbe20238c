#include "resokit/qp_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/numerics/levenberg_marquardt.hpp"
#include "resokit/s21.hpp"

namespace resokit::qp {

XqpSeries trace_to_xqp(const ComplexTrace& trace, const HangerParams& params, double alpha) {
    if (trace.is_frequency()) throw InputError("trace_to_xqp needs a time-mode trace");
    if (!(alpha > 0.0) || alpha > 1.0) throw InputError("alpha must lie in (0, 1]");
    params.validate();
    const double f_probe = trace.probe_frequency.value_or(params.f_r);
    XqpSeries out;
    const auto& t = trace.timestamps();
    const auto& v = trace.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        try {
            // x = f_probe / f_r(t) - 1 on the shifted circle.
            const double x = s21::detuning_from_point(v[i], params);
            const double df_over_f = f_probe / (params.f_r * (1.0 + x)) - 1.0;
            out.t.push_back(t[i]);
            out.dx.push_back(xqp_from_shift(df_over_f, alpha));
        } catch (const s21::SingularPointError&) {
            out.dropped.push_back(i);
        }
    }
    return out;
}

double burst_dx(double t, double tau_ss, double x_i, double r_prime) {
    return x_i * (1.0 - r_prime) / (std::exp(t / tau_ss) - r_prime);
}

QpBurstModel fit_burst(const XqpSeries& series, const BurstFitOptions& options) {
    const std::size_t n_all = series.t.size();
    if (n_all != series.dx.size()) throw InputError("burst series: t and dx differ in length");
    if (n_all == 0) throw InputError("burst series is empty");

    std::size_t peak = n_all;
    for (std::size_t i = 0; i < n_all; ++i) {
        if (options.window_start && series.t[i] < *options.window_start) continue;
        if (options.window_end && series.t[i] > *options.window_end) continue;
        if (peak == n_all || series.dx[i] > series.dx[peak]) peak = i;
    }
    if (peak == n_all) throw InputError("no samples inside the peak search window");
    const double t0 = series.t[peak];

    std::vector<double> t, y;
    for (std::size_t i = peak; i < n_all; ++i) {
        const double tt = series.t[i] - t0;
        if (tt < options.mask) continue;
        t.push_back(tt);
        y.push_back(series.dx[i]);
    }
    if (t.size() < options.min_points)
        throw InputError("burst fit needs at least " + std::to_string(options.min_points) +
                         " points after the mask, got " + std::to_string(t.size()));
    const double scale = series.dx[peak] > 0.0 ? series.dx[peak] : 1.0;
    const auto n = static_cast<Eigen::Index>(t.size());
    const double duration = t.back();

    // p = [ln tau, ln x_i, r']
    auto residuals = [&](const numerics::Vector& p) {
        const double tau = std::exp(p[0]), xi = std::exp(p[1]);
        numerics::Vector r(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            r[i] = (burst_dx(t[k], tau, xi, p[2]) - y[k]) / scale;
        }
        return r;
    };
    auto jacobian = [&](const numerics::Vector& p) {
        const double tau = std::exp(p[0]), xi = std::exp(p[1]), rp = p[2];
        numerics::Matrix J(n, 3);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double tt = t[static_cast<std::size_t>(i)];
            const double e = std::exp(tt / tau);
            const double den = e - rp;
            const double m = xi * (1.0 - rp) / den;
            J(i, 0) = m * e * (tt / tau) / den / scale;  // d/d ln tau
            J(i, 1) = m / scale;
            J(i, 2) = xi * (-den + (1.0 - rp)) / (den * den) / scale;
        }
        return J;
    };
    numerics::Bounds bounds{numerics::Vector(3), numerics::Vector(3)};
    bounds.lower << std::log(duration) - 15.0, std::log(scale) - 15.0, 0.0;
    bounds.upper << std::log(duration) + 10.0, std::log(scale) + 15.0, 1.0 - 1e-9;

    numerics::LmResult best;
    bool have = false;
    for (double tau_frac : {0.05, 0.15, 0.4, 1.0}) {
        for (double rp : {0.0, 0.5, 0.9, 0.99}) {
            numerics::Vector p0(3);
            p0 << std::log(tau_frac * duration), std::log(scale), rp;
            numerics::LmOptions lo;
            lo.max_iterations = 300;
            auto lm = numerics::levenberg_marquardt(residuals, p0, lo, jacobian, bounds);
            if (!lm.x.allFinite()) continue;
            if (!have || lm.cost < best.cost) {
                best = std::move(lm);
                have = true;
            }
        }
    }
    if (!have) throw FitError("burst fit failed to produce finite parameters");

    QpBurstModel m;
    const numerics::Matrix cov = best.covariance();
    m.tau_ss = std::exp(best.x[0]);
    m.x_i = std::exp(best.x[1]);
    m.r_prime = best.x[2];
    m.sigma_tau_ss = m.tau_ss * std::sqrt(std::max(0.0, cov(0, 0)));
    m.sigma_x_i = m.x_i * std::sqrt(std::max(0.0, cov(1, 1)));
    m.sigma_r_prime = std::sqrt(std::max(0.0, cov(2, 2)));
    m.t_peak = t0;
    m.converged = best.converged;
    m.points_used = static_cast<int>(t.size());
    if (!best.converged) m.warnings.push_back("burst fit did not converge: " + best.message);
    if (m.r_prime <= 1e-12 || m.r_prime >= 1.0 - 1e-6) {
        m.r_prime_at_bound = true;
        m.warnings.push_back("r_prime pinned at a bound of [0, 1)");
    }
    if (duration < 3.0 * m.tau_ss) m.warnings.push_back("series covers less than three decay times");
    return m;
}

double steady_state_xqp(double alpha, double q_res, double f_r, double delta) {
    if (!(alpha > 0.0) || !(q_res > 0.0) || !(f_r > 0.0) || !(delta > 0.0))
        throw InputError("steady_state_xqp needs positive inputs");
    const double w = 2.0 * constants::pi * f_r;
    return constants::pi / (alpha * q_res) * std::sqrt(constants::hbar * w / (2.0 * delta));
}

Rates rates_from_fit(const QpBurstModel& m) {
    if (!(m.tau_ss > 0.0) || !(m.x_i > 0.0) || m.r_prime < 0.0 || m.r_prime >= 1.0)
        throw InputError("rates_from_fit needs tau_ss > 0, x_i > 0, r' in [0, 1)");
    Rates out;
    const double q = m.r_prime / (1.0 - m.r_prime);
    out.r = q / (m.tau_ss * m.x_i);
    out.s = (1.0 - 2.0 * q * m.x0 / m.x_i) / m.tau_ss;
    out.g = m.x0 / m.tau_ss * (1.0 - q * m.x0 / m.x_i);
    out.consistency = std::abs(m.tau_ss * (2.0 * out.r * m.x0 + out.s) - 1.0);
    out.negative_s = out.s < 0.0;
    out.negative_g = out.g < 0.0;
    out.caveat = "x0 is an upper bound; s and g inherit its uncertainty";
    return out;
}

double relaxation_time(double r, double s, double x0) { return 1.0 / (2.0 * r * x0 + s); }

double fixed_point(double r, double s, double g) {
    // Written without the r -> 0 cancellation of (-s + sqrt(s^2 + 4rg)) / 2r.
    const double root = std::sqrt(s * s + 4.0 * r * g);
    if (!(s + root > 0.0)) throw InputError("rate equation has no positive fixed point");
    return 2.0 * g / (s + root);
}

double closed_form_x(double t, double r, double s, double g, double x_init) {
    const double x0 = fixed_point(r, s, g);
    const double k = std::sqrt(s * s + 4.0 * r * g);  // 1 / tau_ss = 2 r x0 + s
    const double d = x_init - x0;
    // d k e^{-kt} / (k + r d (1 - e^{-kt})), stable for large t.
    const double e = std::exp(-k * t);
    return x0 + d * k * e / (k + r * d * (1.0 - e));
}

std::vector<double> integrate_qp_ode(double r, double s, double g, double x_init, std::span<const double> times,
                                     const OdeOptions& options) {
    namespace ode = boost::numeric::odeint;
    if (r < 0.0 || s < 0.0 || g < 0.0 || x_init < 0.0) throw InputError("rates and x_init must be non-negative");
    if (times.empty()) return {};
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw InputError("time grid must be strictly increasing");

    const double x0 = (s > 0.0 || r > 0.0) ? fixed_point(r, s, g) : 0.0;
    const double abs_tol = options.abs_tol > 0.0 ? options.abs_tol : options.rel_tol * std::max(x_init, x0) * 1e-3;
    using State = std::array<double, 1>;
    auto rhs = [&](const State& x, State& dxdt, double) { dxdt[0] = -r * x[0] * x[0] - s * x[0] + g; };
    auto stepper = ode::make_dense_output(abs_tol, options.rel_tol, ode::runge_kutta_dopri5<State>());

    std::vector<double> out;
    out.reserve(times.size());
    State x{x_init};
    const double span = times.back() - times.front();
    const double rate = std::max({s, 2.0 * r * std::max(x_init, x0), span > 0.0 ? 1.0 / span : 1.0});
    try {
        ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-3 / rate,
                             [&](const State& st, double) { out.push_back(st[0]); });
    } catch (const std::exception& e) {
        throw FitError(std::string("qp rate-equation integration failed: ") + e.what());
    }
    if (out.size() != times.size()) throw FitError("qp rate-equation integration stopped early");
    return out;
}

}  // namespace resokit::qp
