#include <doctest.h>

#include <cmath>
#include <vector>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/qp_dynamics.hpp"
#include "resokit/random.hpp"
#include "resokit/s21.hpp"
#include "resokit/synth_lab.hpp"

using namespace resokit;
using namespace resokit::qp;

TEST_CASE("fixed point solves the rate equation") {
    const double r = 1 / 16e-9, s = 1 / 1.3e-3, g = 1e-3;
    const double x = fixed_point(r, s, g);
    CHECK(std::abs(-r * x * x - s * x + g) < 1e-12 * g);
}

TEST_CASE("relaxation time identity") {
    CHECK(relaxation_time(1 / 16e-9, 1 / 1.3e-3, 8e-7) == doctest::Approx(1.1504e-3).epsilon(1e-4));
}

TEST_CASE("closed form matches the ODE") {
    random::PhiloxStream rng(21, 0);
    for (int k = 0; k < 20; ++k) {
        const double r = std::pow(10.0, 6 + 2 * rng.uniform());
        const double s = std::pow(10.0, 2 + 2 * rng.uniform());
        const double x0 = std::pow(10.0, -7 + 1.5 * rng.uniform());
        const double g = r * x0 * x0 + s * x0;
        const double xi = x0 * (1 + std::pow(10.0, 3 * rng.uniform()));
        const double tau = relaxation_time(r, s, x0);
        std::vector<double> t;
        for (int i = 0; i <= 50; ++i) t.push_back(5 * tau * i / 50.0);
        const auto num = integrate_qp_ode(r, s, g, xi, t);
        for (std::size_t i = 0; i < t.size(); ++i)
            CHECK(num[i] == doctest::Approx(closed_form_x(t[i], r, s, g, xi)).epsilon(1e-6));
    }
}

TEST_CASE("burst form equals the closed form about x0") {
    const double r = 1 / 16e-9, s = 1 / 1.3e-3, x0 = 8e-7, g = r * x0 * x0 + s * x0;
    const double tau = relaxation_time(r, s, x0);
    const double xi = 1.2e-4;
    // With r' = r x_i / (r x_i + 1/tau) the excess follows dx = x - x0.
    const double rp = r * xi * tau / (1 + r * xi * tau);
    for (double t : {0.0, 1e-5, 1e-4, 1e-3, 4e-3})
        CHECK(burst_dx(t, tau, xi, rp) == doctest::Approx(closed_form_x(t, r, s, g, x0 + xi) - x0).epsilon(1e-9));
}

TEST_CASE("steady-state density bound") {
    const double delta = constants::bcs_gap_ratio * constants::k_B * 2.15;
    const double w = 2 * constants::pi * 4.6e9;
    const double x0 = steady_state_xqp(0.96, 1e7, 4.6e9, delta);
    CHECK(x0 == doctest::Approx(constants::pi / (0.96 * 1e7) * std::sqrt(constants::hbar * w / (2 * delta))));
}

TEST_CASE("xqp conversion is the exact inverse of the forward shift") {
    const HangerParams p{4.6e9, 0.52e6, 400, 0.0};
    std::vector<double> t;
    std::vector<cdouble> z;
    for (int i = 0; i < 20; ++i) {
        const double dx = 1e-6 * i;
        const double f_shift = p.f_r * (1 + shift_from_xqp(dx, 0.96));
        HangerParams q = p;
        q.f_r = f_shift;
        t.push_back(i * 1e-6);
        z.push_back(s21::response(q, p.f_r));
    }
    const auto s = trace_to_xqp(ComplexTrace::time_series(t, z), p, 0.96);
    for (int i = 0; i < 20; ++i) CHECK(s.dx[i] == doctest::Approx(1e-6 * i).scale(1e-6).epsilon(1e-8));
}

TEST_CASE("burst fit on noiseless synthetic data") {
    synth::Scenario sc;
    sc.kind = synth::Kind::burst;
    const auto tr = synth::gen_burst(sc);
    const auto series = trace_to_xqp(tr, sc.burst.params, sc.burst.alpha);
    auto m = fit_burst(series);
    CHECK(m.converged);
    CHECK(m.tau_ss == doctest::Approx(1.2e-3).epsilon(1e-6));
    CHECK(m.x_i == doctest::Approx(1.2e-4).epsilon(1e-4));
    CHECK(m.r_prime == doctest::Approx(0.9).epsilon(1e-5));
    m.x0 = 8e-7;
    const auto r = rates_from_fit(m);
    CHECK(r.consistency < 1e-12);
    CHECK_FALSE(r.negative_s);
    CHECK(relaxation_time(r.r, r.s, 8e-7) == doctest::Approx(m.tau_ss).epsilon(1e-12));
}

TEST_CASE("burst fit rejects short series") {
    XqpSeries s;
    for (int i = 0; i < 10; ++i) {
        s.t.push_back(i * 1e-5);
        s.dx.push_back(1e-5 * std::exp(-i * 0.1));
    }
    CHECK_THROWS(fit_burst(s));
}
