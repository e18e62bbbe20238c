#include <doctest.h>

#include <cmath>
#include <vector>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/inductance.hpp"
#include "resokit/random.hpp"

using namespace resokit;
using namespace resokit::inductance;

TEST_CASE("alpha and L_k round trip through the resonance frequency") {
    const double l_g = 1.2e-9, c_s = 90e-15, l_k = 14e-9;
    const double f = resonance_frequency(l_k, l_g, c_s);
    const double a = alpha_from_fr(f, l_g, c_s);
    CHECK(a == doctest::Approx(l_k / (l_k + l_g)).epsilon(1e-12));
    CHECK(lk_from_alpha(a, l_g) == doctest::Approx(l_k).epsilon(1e-12));
}

TEST_CASE("alpha of 0.952381 for L_k = 20 L_g") {
    CHECK(lk_from_alpha(20.0 / 21.0, 1e-9) == doctest::Approx(20e-9).epsilon(1e-12));
}

TEST_CASE("non-physical alpha is rejected") {
    CHECK_THROWS_AS(alpha_from_fr(20e9, 1e-9, 90e-15), InputError);
    CHECK_THROWS_AS(lk_from_alpha(1.0, 1e-9), InputError);
    CHECK_THROWS_AS(lk_from_alpha(-0.1, 1e-9), InputError);
}

TEST_CASE("L_k sigma matches a numerical derivative") {
    const double l_g = 1.2e-9, c_s = 90e-15, f = 5e9, df = 1e3;
    auto lk = [&](double ff) { return lk_from_alpha(alpha_from_fr(ff, l_g, c_s), l_g); };
    const double num = std::abs(lk(f + 1e2) - lk(f - 1e2)) / 2e2 * df;
    CHECK(lk_sigma_from_fr(f, df, c_s) == doctest::Approx(num).epsilon(1e-6));
}

TEST_CASE("sheet fit is exact on noiseless data") {
    std::vector<SheetPoint> pts;
    for (double n : {30.0, 75.0, 150.0, 240.0}) pts.push_back({n, 320e-12 * n + 0.4e-9, 0.0});
    const auto f = sheet_inductance_fit(pts);
    CHECK(f.l_sq == doctest::Approx(320e-12).epsilon(1e-10));
    CHECK(f.intercept == doctest::Approx(0.4e-9).epsilon(1e-8));
    CHECK_FALSE(f.weighted);
}

TEST_CASE("sheet fit uncertainty covers the truth") {
    // Property: the pull distribution of L_sq over seeds has unit width.
    random::PhiloxStream rng(11, 0);
    const int trials = 400;
    double pull2 = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<SheetPoint> pts;
        for (double n : {30.0, 60.0, 120.0, 240.0, 480.0}) {
            const double s = 0.05e-9;
            pts.push_back({n, 50e-12 * n + 0.3e-9 + s * rng.normal(), s});
        }
        const auto f = sheet_inductance_fit(pts);
        CHECK(f.weighted);
        pull2 += std::pow((f.l_sq - 50e-12) / std::sqrt(f.var_l_sq), 2);
    }
    CHECK(std::sqrt(pull2 / trials) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("characteristic impedance of a 2 um strip") {
    CHECK(characteristic_impedance(320e-12, 2e-6, 6.6e-12) == doctest::Approx(4923.66).epsilon(1e-5));
    CHECK(characteristic_impedance(50e-12, 10e-6, 8.4e-12) == doctest::Approx(std::sqrt(5e-6 / 8.4e-12)).epsilon(1e-14));
}

TEST_CASE("c0 table interpolates and clamps") {
    const auto t = C0Table::default_table();
    CHECK(t.at(2e-6) == doctest::Approx(6.6e-12));
    CHECK(t.at(10e-6) == doctest::Approx(8.4e-12));
    CHECK(t.at(6e-6) == doctest::Approx(7.5e-12));
    CHECK(t.at(1e-6) == doctest::Approx(6.6e-12));
    CHECK(t.at(20e-6) == doctest::Approx(8.4e-12));
}
