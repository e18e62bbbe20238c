#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/s21.hpp"

using namespace resokit;

namespace {
const HangerParams fo23{6.04e9, 1.78e6, 1.30e6, 0.1};
}

TEST_CASE("loaded Q follows the real part of 1/Q_c") {
    const double inv = 1.0 / 1.78e6 + std::cos(0.1) / 1.30e6;
    CHECK(fo23.q_loaded() == doctest::Approx(1.0 / inv).epsilon(1e-14));
}

TEST_CASE("S21 on resonance") {
    const auto z = s21::response(fo23, fo23.f_r);
    const auto expect = 1.0 - fo23.diameter() * std::polar(1.0, 0.1);
    CHECK(std::abs(z - expect) < 1e-14);
    // |S21| at resonance for phi = 0 is Q_c/(Q_int+Q_c)
    const HangerParams p0{6.04e9, 1.78e6, 1.30e6, 0.0};
    CHECK(std::abs(s21::response(p0, p0.f_r)) == doctest::Approx(1.30 / (1.78 + 1.30)).epsilon(1e-12));
}

TEST_CASE("far off resonance S21 tends to 1") {
    CHECK(std::abs(s21::response(fo23, 2 * fo23.f_r) - 1.0) < 1e-5);
}

TEST_CASE("model points lie on the resonance circle") {
    const auto c = s21::resonance_circle(fo23);
    for (double x : {-1e-4, -1e-6, 0.0, 3e-7, 1e-5}) {
        const auto z = s21::response_at_detuning(fo23, x);
        CHECK(std::abs(std::abs(z - c.center) - c.radius) < 1e-13);
    }
}

TEST_CASE("detuning inversion round trip") {
    for (double x : {-3e-6, -4e-7, 0.0, 1e-7, 2e-6}) {
        const auto z = s21::response_at_detuning(fo23, x);
        CHECK(s21::detuning_from_point(z, fo23) == doctest::Approx(x).epsilon(1e-9).scale(1e-12));
    }
    // off-circle points are projected radially first
    const auto c = s21::resonance_circle(fo23);
    const auto z = s21::response_at_detuning(fo23, 5e-7);
    const auto off = c.center + (z - c.center) * 1.01;
    CHECK(s21::detuning_from_point(off, fo23) == doctest::Approx(5e-7).epsilon(1e-9));
    CHECK_THROWS_AS(s21::detuning_from_point({1.0, 0.0}, fo23), s21::SingularPointError);
}

TEST_CASE("photon number and its inverse") {
    const double p = 1e-17;
    const double n = s21::photon_number(fo23, p);
    const double w = 2 * constants::pi * fo23.f_r;
    const double ql = fo23.q_loaded();
    CHECK(n == doctest::Approx(2 * ql * ql * p / (constants::hbar * w * w * fo23.q_c_mag)).epsilon(1e-14));
    CHECK(s21::power_for_photon_number(fo23, n) == doctest::Approx(p).epsilon(1e-14));
}

TEST_CASE("invalid parameters are rejected") {
    HangerParams bad{-1.0, 0.0, 1e5, 4.0};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    std::vector<double> f{1e9, 2e9};
    CHECK_THROWS_AS(s21::s21_hanger(bad, f), ValidationError);
}
