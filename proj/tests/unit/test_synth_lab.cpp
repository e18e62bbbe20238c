#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "resokit/errors.hpp"
#include "resokit/s21.hpp"
#include "resokit/synth_lab.hpp"

using namespace resokit;
using namespace resokit::synth;

TEST_CASE("noiseless trace equals the forward model") {
    Scenario s;
    const auto tr = gen_trace(s);
    REQUIRE(tr.size() == 801);
    for (std::size_t i = 0; i < tr.size(); i += 50)
        CHECK(std::abs(tr.values()[i] - s21::response(s.trace.params, tr.freqs()[i])) < 1e-15);
    CHECK(tr.freqs()[400] == doctest::Approx(6.04e9).epsilon(1e-15));
}

TEST_CASE("generators are deterministic per seed") {
    for (Kind k : {Kind::trace, Kind::burst}) {
        Scenario s;
        s.kind = k;
        s.seed = 7;
        s.sigma = 1e-3;
        const auto a = k == Kind::trace ? gen_trace(s) : gen_burst(s);
        const auto b = k == Kind::trace ? gen_trace(s) : gen_burst(s);
        CHECK(a.values() == b.values());
        s.seed = 8;
        const auto c = k == Kind::trace ? gen_trace(s) : gen_burst(s);
        CHECK(a.values() != c.values());
    }
    Scenario s;
    s.kind = Kind::power_sweep;
    s.sigma = 1.0;
    const auto p = gen_power_sweep(s);
    CHECK(p.size() == 100);
    CHECK(p[0].f_r == gen_power_sweep(s)[0].f_r);
}

TEST_CASE("noise has the requested width") {
    Scenario s;
    s.sigma = 0.01;
    s.seed = 3;
    const auto a = gen_trace(s);
    Scenario clean;
    const auto b = gen_trace(clean);
    double v = 0;
    for (std::size_t i = 0; i < a.size(); ++i) v += std::norm(a.values()[i] - b.values()[i]);
    CHECK(std::sqrt(v / (2.0 * a.size())) == doctest::Approx(0.01).epsilon(0.08));
    CHECK(a.noise_sigma.value() == 0.01);
}

TEST_CASE("truth metadata round trips to full precision") {
    Scenario s;
    s.seed = 5;
    const auto m = truth_metadata(s);
    CHECK(std::strtod(m.at("truth.q_int").c_str(), nullptr) == s.trace.params.q_int);
    CHECK(std::strtod(m.at("truth.phi").c_str(), nullptr) == s.trace.params.phi);
    CHECK(m.at("seed") == "5");
}

TEST_CASE("burst truth has a clean baseline") {
    const BurstSpec b;
    CHECK(burst_truth(b, 0.5e-3) == 0.0);
    CHECK(burst_truth(b, b.t_burst) == doctest::Approx(b.x_i));
}

TEST_CASE("kind names") {
    CHECK(parse_kind("temp-sweep") == Kind::temp_sweep);
    CHECK(std::string(kind_name(Kind::power_sweep)) == "power-sweep");
    CHECK_THROWS_AS(parse_kind("nope"), InputError);
}
