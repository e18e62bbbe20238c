#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "resokit/constants.hpp"
#include "resokit/mattis_bardeen.hpp"

using namespace resokit;
using namespace resokit::mb;
using constants::hbar;
using constants::k_B;
using constants::pi;

namespace {

double fermi(double e, double kt) { return 1.0 / (std::exp(e / kt) + 1.0); }

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Independent gap oracle: bisection on a dense trapezoid grid.
double gap_oracle(double t, double t_c) {
    const double d0 = constants::bcs_gap_ratio * k_B * t_c;
    const double kt = k_B * t;
    auto residual = [&](double d) {
        const int n = 200000;
        const double umax = std::acosh(std::max(1.0, 60 * kt / d + 1.0)) + 1.0;
        const double h = umax / n;
        double s = 0.5 * (fermi(d, kt) + fermi(d * std::cosh(umax), kt));
        for (int i = 1; i < n; ++i) s += fermi(d * std::cosh(i * h), kt);
        return std::log(d0 / d) - 2 * s * h;
    };
    double lo = 1e-6 * d0, hi = d0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("gap matches the bisection oracle") {
    for (double frac : {0.2, 0.5, 0.8, 0.95}) {
        const auto g = gap_at_temperature(frac * 2.15, 2.15);
        CHECK_FALSE(g.normal);
        CHECK(g.delta == doctest::Approx(gap_oracle(frac * 2.15, 2.15)).epsilon(1e-7));
    }
    const double d0 = constants::bcs_gap_ratio * k_B * 2.15;
    CHECK(gap_at_temperature(2.15 / 2, 2.15).delta / d0 == doctest::Approx(0.956898).epsilon(1e-5));
    CHECK(gap_at_temperature(0.0, 2.15).delta == doctest::Approx(d0).epsilon(1e-12));
    CHECK(gap_at_temperature(2.2, 2.15).normal);
}

TEST_CASE("gap decreases monotonically with temperature") {
    double prev = 1.0;
    for (int i = 1; i < 40; ++i) {
        const double d = gap_at_temperature(2.15 * i / 40.0, 2.15).delta;
        // Flat to double precision well below T_c, strictly decreasing above.
        if (i > 12) CHECK(d < prev);
        else CHECK(d <= prev);
        prev = d;
    }
}

TEST_CASE("conductivity matches a Simpson oracle") {
    const double t = 0.3, f = 4.6e9, t_c = 2.15;
    const double d = gap_at_temperature(t, t_c).delta;
    const double kt = k_B * t, hw = 2 * pi * hbar * f;
    const int n = 1000000;
    // sigma1: E = D cosh u removes the edge singularity.
    const double umax = std::acosh(1 + 60 * kt / d);
    const double s1 = 2 / hw * simpson([&](double u) {
        const double e = d * std::cosh(u);
        return (fermi(e, kt) - fermi(e + hw, kt)) * (e * e + d * d + hw * e) / std::sqrt((e + hw) * (e + hw) - d * d);
    }, 0.0, umax, n);
    // sigma2: square-root substitutions at both edges, split at the midpoint.
    auto h_int = [&](double e) {
        return std::tanh((e + hw) / (2 * kt)) * (e * e + d * d + hw * e);
    };
    const double mid = d - hw / 2;
    const double a = std::sqrt(d - mid);
    const double upper = simpson([&](double s) {
        const double e = d - s * s;
        return h_int(e) * 2 / (std::sqrt(d + e) * std::sqrt((e + hw) * (e + hw) - d * d));
    }, 0.0, a, n);
    const double lower = simpson([&](double s) {
        const double e = d - hw + s * s;
        return h_int(e) * 2 / (std::sqrt((d - e) * (d + e)) * std::sqrt(e + hw + d));
    }, 0.0, a, n);
    const double s2 = (upper + lower) / hw;
    MbSettings st;
    const auto c = conductivity_at_gap(t, f, d, st);
    CHECK(c.sigma1 == doctest::Approx(s1).epsilon(1e-6));
    CHECK(c.sigma2 == doctest::Approx(s2).epsilon(1e-6));
}

TEST_CASE("low-temperature sigma2 approaches pi Delta / hbar w") {
    for (double f : {2e9, 4e9}) {
        const double d = constants::bcs_gap_ratio * k_B * 2.15;
        const auto c = complex_conductivity(0.0, f, 2.15);
        CHECK(c.sigma2 == doctest::Approx(pi * d / (2 * pi * hbar * f)).epsilon(1e-3));
        CHECK(c.sigma1 == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("pair breaking above the gap frequency") {
    const double d = constants::bcs_gap_ratio * k_B * 2.15;
    const double f = 3 * d / (2 * pi * hbar);
    const auto c = complex_conductivity(0.0, f, 2.15);
    CHECK(c.sigma1 > 0.0);
    CHECK(c.sigma1 < 1.0);
}

TEST_CASE("frequency shift is zero at the reference and decreasing") {
    std::vector<double> temps{0.0, 0.5, 1.0, 1.5};
    const auto s = freq_shift_vs_temperature(temps, 4.6e9, 0.96, 2.15);
    CHECK(s[0].df == doctest::Approx(0.0).scale(1.0));
    for (int i = 1; i < 4; ++i) {
        CHECK(s[i].df < s[i - 1].df);
        CHECK(s[i].d_inv_q > s[i - 1].d_inv_q);
    }
}

TEST_CASE("T_c fit on synthetic data") {
    std::vector<double> temps;
    for (int i = 0; i < 25; ++i) temps.push_back(0.1 + 1.4 * i / 24.0);
    const auto model = freq_shift_vs_temperature(temps, 4.6e9, 0.96, 2.15);
    std::vector<TcPoint> pts;
    for (const auto& m : model) pts.push_back({m.t, m.df});
    const auto fit = fit_tc(pts, 4.6e9, 0.96);
    CHECK(fit.converged);
    CHECK(fit.t_c == doctest::Approx(2.15).epsilon(1e-5));
    for (auto& p : pts) p.df += 5e3;
    TcFitOptions o;
    o.fit_offset = true;
    const auto off = fit_tc(pts, 4.6e9, 0.96, o);
    CHECK(off.t_c == doctest::Approx(2.15).epsilon(1e-4));
    CHECK(off.offset == doctest::Approx(5e3).epsilon(1e-2));
}

TEST_CASE("sheet inductance from the gap") {
    const double d = 1.764 * k_B * 2.0;
    CHECK(sheet_inductance_from_gap(1000, d) == doctest::Approx(hbar * 1000 / (pi * d)));
}
