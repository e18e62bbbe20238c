#include "resokit/mattis_bardeen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/numerics/levenberg_marquardt.hpp"
#include "resokit/parallel.hpp"

namespace resokit::mb {

using constants::k_B;
using constants::pi;

void MbSettings::validate() const {
    if (!(quad_tolerance > 0.0) || !(gap_tolerance > 0.0) || max_depth < 1)
        throw InputError("Mattis-Bardeen tolerances must be positive");
}

namespace {

// Fermi function, safe for T = 0 and large arguments.
double fermi(double e, double kt) {
    if (kt <= 0.0) return e < 0.0 ? 1.0 : (e > 0.0 ? 0.0 : 0.5);
    const double x = e / kt;
    if (x > 700.0) return 0.0;
    if (x < -700.0) return 1.0;
    return 1.0 / (std::exp(x) + 1.0);
}

// 1 - 2 f(E) = tanh(E / 2kT)
double one_minus_2f(double e, double kt) {
    if (kt <= 0.0) return e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
    return std::tanh(e / (2.0 * kt));
}

template <class F>
double integrate(F f, double a, double b, const MbSettings& s) {
    if (!(b > a)) return 0.0;
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, static_cast<unsigned>(s.max_depth), s.quad_tolerance, &err);
    if (!std::isfinite(v)) throw FitError("Mattis-Bardeen quadrature produced a non-finite value");
    const double scale = std::abs(v) + 1e-300;
    if (err > 1e3 * s.quad_tolerance * scale && err > 1e-14)
        throw FitError("Mattis-Bardeen quadrature did not converge");
    return v;
}

// Upper limit in u = acosh(E/D) beyond which thermal factors are below e^-45.
double thermal_cutoff(double delta, double kt, double extra) {
    return std::acosh(std::max(1.0, (45.0 * kt + extra) / delta + 1.0)) + 1.0;
}

}  // namespace

GapResult gap_at_temperature(double t, double t_c, std::optional<double> delta0, double tolerance) {
    if (!(t_c > 0.0) || t < 0.0) throw InputError("gap_at_temperature needs t >= 0 and t_c > 0");
    const double d0 = delta0.value_or(constants::bcs_gap_ratio * k_B * t_c);
    if (t >= t_c) return {0.0, true};
    if (t == 0.0) return {d0, false};
    const double kt = k_B * t;
    MbSettings s;
    s.quad_tolerance = std::min(1e-12, tolerance);
    auto thermal = [&](double d) {
        const double um = thermal_cutoff(d, kt, 0.0);
        return 2.0 * integrate([&](double u) { return fermi(d * std::cosh(u), kt); }, 0.0, um, s);
    };
    auto equation = [&](double d) { return std::log(d0 / d) - thermal(d); };
    double lo = d0 * 1e-10;
    const double hi = d0;
    if (equation(lo) <= 0.0) return {0.0, true};
    if (equation(hi) >= 0.0) return {d0, false};
    std::uintmax_t iters = 200;
    auto tol = [&](double a, double b) { return std::abs(b - a) <= tolerance * std::abs(b); };
    const auto r = boost::math::tools::toms748_solve(equation, lo, hi, tol, iters);
    return {0.5 * (r.first + r.second), false};
}

Conductivity conductivity_at_gap(double t, double f, double delta, const MbSettings& settings) {
    settings.validate();
    if (!(f > 0.0)) throw InputError("frequency must be positive");
    if (!(delta > 0.0)) return {1.0, 0.0};
    const double hw = constants::hbar * 2.0 * pi * f;
    const double kt = k_B * t;
    const double d = delta, d2 = delta * delta;
    auto num = [&](double e) { return e * e + d2 + hw * e; };

    Conductivity c;
    // Thermal quasiparticle term, E = D cosh u.
    if (kt > 0.0) {
        const double um = thermal_cutoff(d, kt, 0.0);
        c.sigma1 = 2.0 / hw * integrate(
            [&](double u) {
                const double e = d * std::cosh(u);
                const double occ = fermi(e, kt) - fermi(e + hw, kt);
                return occ * num(e) / std::sqrt((e + hw) * (e + hw) - d2);
            },
            0.0, um, settings);
    }

    if (hw < 2.0 * d) {
        // sigma2 over [D - hw, D], split at the midpoint.
        const double mid = d - 0.5 * hw;
        const double theta_m = std::acos(mid / d);
        const double upper = integrate(
            [&](double th) {
                const double e = d * std::cos(th);
                return one_minus_2f(e + hw, kt) * num(e) / std::sqrt((e + hw) * (e + hw) - d2);
            },
            0.0, theta_m, settings);
        const double u_m = std::acosh((mid + hw) / d);
        const double lower = integrate(
            [&](double u) {
                const double ep = d * std::cosh(u);  // E + hw
                const double e = ep - hw;
                return one_minus_2f(ep, kt) * num(e) / std::sqrt(d2 - e * e);
            },
            0.0, u_m, settings);
        c.sigma2 = (upper + lower) / hw;
    } else {
        // Pair-breaking branch. sigma1 gains the term over [D - hw, -D].
        const double mid = 0.5 * ((d - hw) + (-d));
        const double u_up = std::acosh(-mid / d);
        const double near_minus_d = integrate(
            [&](double u) {
                const double e = -d * std::cosh(u);
                return one_minus_2f(e + hw, kt) * std::abs(num(e)) / std::sqrt((e + hw) * (e + hw) - d2);
            },
            0.0, u_up, settings);
        const double u_lo = std::acosh((mid + hw) / d);
        const double near_d_minus_hw = integrate(
            [&](double u) {
                const double ep = d * std::cosh(u);
                const double e = ep - hw;
                return one_minus_2f(ep, kt) * std::abs(num(e)) / std::sqrt(e * e - d2);
            },
            0.0, u_lo, settings);
        c.sigma1 += (near_minus_d + near_d_minus_hw) / hw;
        c.sigma2 = integrate(
                       [&](double th) {
                           const double e = d * std::cos(th);
                           return one_minus_2f(e + hw, kt) * num(e) / std::sqrt((e + hw) * (e + hw) - d2);
                       },
                       0.0, pi, settings) /
                   hw;
    }
    return c;
}

Conductivity complex_conductivity(double t, double f, double t_c, const MbSettings& settings) {
    settings.validate();
    if (t >= t_c) return {1.0, 0.0};
    const auto gap = gap_at_temperature(t, t_c, settings.delta0, settings.gap_tolerance);
    if (gap.normal) return {1.0, 0.0};
    return conductivity_at_gap(t, f, gap.delta, settings);
}

std::vector<ShiftPoint> freq_shift_vs_temperature(std::span<const double> temps, double f_r0, double alpha,
                                                  double t_c, const MbSettings& settings) {
    if (!(alpha > 0.0) || alpha > 1.0) throw InputError("alpha must lie in (0, 1]");
    if (!(f_r0 > 0.0) || !(t_c > 0.0)) throw InputError("f_r0 and t_c must be positive");
    const auto ref = complex_conductivity(settings.t_ref, f_r0, t_c, settings);
    if (!(ref.sigma2 > 0.0)) throw InputError("reference temperature must lie below t_c");
    std::vector<ShiftPoint> out(temps.size());
    parallel_for(temps.size(), [&](std::size_t i) {
        const auto c = complex_conductivity(temps[i], f_r0, t_c, settings);
        out[i].t = temps[i];
        out[i].df = f_r0 * 0.5 * alpha * (c.sigma2 - ref.sigma2) / ref.sigma2;
        out[i].d_inv_q = alpha * (c.sigma1 - ref.sigma1) / ref.sigma2;
    });
    return out;
}

TcFit fit_tc(std::span<const TcPoint> points, double f_r0, double alpha, const TcFitOptions& options) {
    if (points.size() < 5) throw InputError("fit_tc needs at least five points");
    double t_min = points.front().t, t_max = t_min;
    for (const auto& p : points) {
        t_min = std::min(t_min, p.t);
        t_max = std::max(t_max, p.t);
    }
    std::vector<double> temps;
    for (const auto& p : points) temps.push_back(p.t);
    const auto n = static_cast<Eigen::Index>(points.size());
    const int np = options.fit_offset ? 2 : 1;

    double yscale = 0.0;
    for (const auto& p : points) yscale = std::max(yscale, std::abs(p.df));
    if (!(yscale > 0.0)) yscale = 1.0;

    auto residuals = [&](const numerics::Vector& p) {
        numerics::Vector r(n);
        const double tc = p[0];
        const double off = np == 2 ? p[1] * yscale : 0.0;
        const auto model = freq_shift_vs_temperature(temps, f_r0, alpha, tc, options.settings);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            r[i] = (model[k].df + off - points[k].df) / yscale;
        }
        return r;
    };

    // Coarse scan over T_c above the warmest point, then LM from the best.
    double t_c0 = options.t_c_guess.value_or(0.0);
    if (!options.t_c_guess) {
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 24; ++k) {
            const double tc = t_max * (1.02 + 4.0 * std::pow(k / 23.0, 2.0));
            numerics::Vector p(np);
            p[0] = tc;
            if (np == 2) p[1] = 0.0;
            double c = residuals(p).squaredNorm();
            if (np == 2) {
                // The offset is linear: profile it out for the scan.
                const auto r = residuals(p);
                c = (r.array() - r.mean()).matrix().squaredNorm();
            }
            if (c < best) {
                best = c;
                t_c0 = tc;
            }
        }
    }
    if (t_max - t_min < 0.3 * t_c0) throw InputError("insufficient span: temperatures must cover 0.3 T_c");

    numerics::Vector p0(np);
    p0[0] = t_c0;
    if (np == 2) {
        numerics::Vector q(2);
        q << t_c0, 0.0;
        p0[1] = -residuals(q).mean();
    }
    numerics::Bounds b{numerics::Vector(np), numerics::Vector(np)};
    b.lower[0] = t_max * (1.0 + 1e-6);
    b.upper[0] = 1e3 * t_max;
    if (np == 2) {
        b.lower[1] = -1e6;
        b.upper[1] = 1e6;
    }
    numerics::LmOptions lo;
    lo.diff_step = 1e-6;
    lo.xtol = 1e-12;
    const auto lm = numerics::levenberg_marquardt(residuals, p0, lo, {}, b);

    TcFit out;
    out.t_c = lm.x[0];
    const auto cov = lm.covariance();
    out.sigma_t_c = std::sqrt(std::max(0.0, cov(0, 0)));
    if (np == 2) {
        out.offset = lm.x[1] * yscale;
        out.sigma_offset = std::sqrt(std::max(0.0, cov(1, 1))) * yscale;
    }
    out.iterations = lm.iterations;
    out.converged = lm.converged;
    if (!lm.converged) out.warnings.push_back("T_c fit did not converge: " + lm.message);
    return out;
}

double sheet_inductance_from_gap(double r_sq, double delta) {
    if (!(r_sq > 0.0) || !(delta > 0.0)) throw InputError("sheet_inductance_from_gap needs positive inputs");
    return constants::hbar * r_sq / (pi * delta);
}

}  // namespace resokit::mb
