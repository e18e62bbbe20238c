#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "resokit/circle_fit.hpp"
#include "resokit/errors.hpp"
#include "resokit/s21.hpp"
#include "resokit/synth_lab.hpp"

using namespace resokit;

namespace {

synth::Scenario fo23_scenario(std::uint64_t seed, double sigma) {
    synth::Scenario s;
    s.kind = synth::Kind::trace;
    s.seed = seed;
    s.sigma = sigma;
    return s;
}

}  // namespace

TEST_CASE("algebraic circle fit is exact on a noiseless circle") {
    std::vector<cdouble> z;
    for (int i = 0; i < 40; ++i) z.push_back(cdouble(0.3, -0.2) + 0.7 * std::polar(1.0, 0.05 + 0.1 * i));
    const auto c = circle::fit_circle_algebraic(z);
    CHECK(std::abs(c.center - cdouble(0.3, -0.2)) < 1e-12);
    CHECK(c.radius == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(circle::circle_rms_residual(z, c) < 1e-12);
}

TEST_CASE("noiseless trace is recovered exactly") {
    const auto tr = synth::gen_trace(fo23_scenario(0, 0.0));
    const auto fit = circle::fit_trace(tr);
    CHECK(fit.params.f_r == doctest::Approx(6.04e9).epsilon(1e-12));
    CHECK(fit.params.q_int == doctest::Approx(1.78e6).epsilon(1e-7));
    CHECK(fit.params.q_c_mag == doctest::Approx(1.30e6).epsilon(1e-7));
    CHECK(fit.params.phi == doctest::Approx(0.1).epsilon(1e-7));
    CHECK_FALSE(fit.delay_fitted);
}

TEST_CASE("environment amplitude, phase and cable delay are removed") {
    for (double delay : {50e-9, 1e-6}) {
        auto s = fo23_scenario(0, 0.0);
        s.trace.amplitude = 0.37;
        s.trace.phase = 2.1;
        s.trace.delay = delay;
        const auto fit = circle::fit_trace(synth::gen_trace(s));
        CHECK(fit.delay_fitted);
        CHECK(fit.environment.delay == doctest::Approx(delay).epsilon(1e-6));
        CHECK(fit.environment.amplitude == doctest::Approx(0.37).epsilon(1e-8));
        CHECK(fit.params.q_int == doctest::Approx(1.78e6).epsilon(1e-6));
        CHECK(fit.params.phi == doctest::Approx(0.1).epsilon(1e-6));
    }
}

TEST_CASE("fixed and disabled delay modes") {
    auto s = fo23_scenario(0, 0.0);
    s.trace.delay = 80e-9;
    const auto tr = synth::gen_trace(s);
    circle::FitOptions o;
    o.delay_mode = circle::DelayMode::fixed;
    o.fixed_delay = 80e-9;
    const auto fit = circle::fit_trace(tr, o);
    CHECK(fit.params.q_int == doctest::Approx(1.78e6).epsilon(1e-6));
    o.delay_mode = circle::DelayMode::off;
    const auto raw = circle::fit_trace(synth::gen_trace(fo23_scenario(0, 0.0)), o);
    CHECK(raw.environment.delay == 0.0);
}

TEST_CASE("quality factors are invariant under the environment phase") {
    // Property: rotating the whole measured trace changes only the fitted environment.
    const auto tr = synth::gen_trace(fo23_scenario(5, 0.005));
    const auto base = circle::fit_trace(tr);
    for (double phase : {-2.5, 0.7, 3.0}) {
        auto z = tr.values();
        for (auto& v : z) v *= std::polar(1.0, phase);
        const auto fit = circle::fit_trace(ComplexTrace::frequency_sweep(tr.freqs(), z));
        CHECK(std::abs(std::polar(1.0, fit.environment.phase) - std::polar(1.0, base.environment.phase + phase)) < 1e-6);
        CHECK(fit.params.q_int == doctest::Approx(base.params.q_int).epsilon(1e-6));
        CHECK(fit.params.phi == doctest::Approx(base.params.phi).epsilon(1e-5));
    }
}

TEST_CASE("uncertainty is consistent with scatter over seeds") {
    std::vector<double> q;
    double sigma_sum = 0;
    const int n = 40;
    for (int seed = 0; seed < n; ++seed) {
        const auto fit = circle::fit_trace(synth::gen_trace(fo23_scenario(seed, 0.01)));
        q.push_back(fit.params.q_int);
        sigma_sum += fit.report.sigma("q_int");
    }
    double m = 0, v = 0;
    for (double x : q) m += x;
    m /= n;
    for (double x : q) v += (x - m) * (x - m);
    const double sd = std::sqrt(v / (n - 1));
    const double mean_sigma = sigma_sum / n;
    CHECK(mean_sigma / sd > 0.6);
    CHECK(mean_sigma / sd < 1.6);
}

TEST_CASE("monte carlo spread is labeled separately and is deterministic") {
    const auto tr = synth::gen_trace(fo23_scenario(1, 0.01));
    const auto fit = circle::fit_trace(tr);
    const auto a = circle::monte_carlo_uncertainty(fit, tr, 30, 9);
    const auto b = circle::monte_carlo_uncertainty(fit, tr, 30, 9);
    CHECK(a.q_int == b.q_int);
    CHECK(a.draws == 30);
    CHECK(a.q_int / fit.report.sigma("q_int") > 0.5);
    CHECK(a.q_int / fit.report.sigma("q_int") < 2.0);
    CHECK(fit.uncertainty_method == "lm-covariance");
}

TEST_CASE("insufficient span and degenerate traces fail") {
    auto s = fo23_scenario(0, 0.0);
    s.trace.span_linewidths = 0.3;
    CHECK_THROWS_AS(circle::fit_trace(synth::gen_trace(s)), FitError);
    std::vector<double> f(100);
    std::vector<cdouble> z(100, cdouble(1.0, 0.0));
    for (int i = 0; i < 100; ++i) f[i] = 6e9 + i * 1e3;
    CHECK_THROWS_AS(circle::fit_trace(ComplexTrace::frequency_sweep(f, z)), FitError);
}

TEST_CASE("stability study flags failures and summarizes") {
    std::vector<ComplexTrace> traces;
    for (int seed = 0; seed < 6; ++seed) traces.push_back(synth::gen_trace(fo23_scenario(seed, 0.01)));
    std::vector<double> f(50);
    for (int i = 0; i < 50; ++i) f[i] = 6e9 + i;
    traces.push_back(ComplexTrace::frequency_sweep(f, std::vector<cdouble>(50, 1.0)));
    const auto st = circle::fit_stability(traces, 5);
    REQUIRE(st.failed.size() == 1);
    CHECK(st.failed[0] == 6);
    CHECK(st.mean_q_int == doctest::Approx(1.78e6).epsilon(0.03));
    int total = 0;
    for (int c : st.histogram.counts) total += c;
    CHECK(total == 6);
}

TEST_CASE("histogram bins cover the range") {
    const std::vector<double> v{0, 1, 2, 3, 4};
    const auto h = circle::make_histogram(v, 2);
    REQUIRE(h.edges.size() == 3);
    CHECK(h.counts[0] + h.counts[1] == 5);
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == 4.0);
}
