#include <doctest.h>

#include <cmath>
#include <vector>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/jja_kerr.hpp"
#include "resokit/random.hpp"

using namespace resokit;
using namespace resokit::jja;

namespace {
double e_c(double c) { return constants::e * constants::e / (2 * c); }
}

TEST_CASE("charging energy of a 90 fF shunt") {
    CHECK(e_c(90e-15) / constants::h == doctest::Approx(215.2248e6).epsilon(1e-6));
}

TEST_CASE("array size from the strip Kerr") {
    const double ec = e_c(90e-15);
    const double k = ec / constants::h / 1e8;  // exactly N = 1e4
    const auto a = njj_from_kerr(k, ec, 150e-6);
    CHECK(a.n_jj == doctest::Approx(1e4).epsilon(1e-12));
    CHECK(a.a_eff == doctest::Approx(15e-9).epsilon(1e-12));
    CHECK(kerr_from_njj(a.n_jj, ec) == doctest::Approx(k).epsilon(1e-12));
}

TEST_CASE("strip participation corrects the measured Kerr") {
    const double p = strip_participation(9e-9, 1e-9);
    CHECK(p == doctest::Approx(0.9));
    CHECK(strip_kerr(-2.0, p) == doctest::Approx(2.0 / 0.81));
}

TEST_CASE("critical current chain") {
    const DeviceGeometry g{150e-6, 3e-6, 91e-9};
    const auto c = critical_current_density(10e-9, 1e4, g);
    const double l_j = 1e-12;
    const double i_c = constants::phi0 / (2 * constants::pi * l_j);
    CHECK(c.l_j == doctest::Approx(l_j).epsilon(1e-14));
    CHECK(c.i_c == doctest::Approx(i_c).epsilon(1e-14));
    CHECK(c.j_c == doctest::Approx(i_c / (3e-6 * 91e-9)).epsilon(1e-14));
}

TEST_CASE("kerr fit on a synthetic sweep") {
    random::PhiloxStream rng(3, 1);
    std::vector<PowerPoint> pts;
    for (int i = 1; i <= 50; ++i) {
        const double n = 2.0 * i;
        pts.push_back({n, 6.04e9 - 5.0 * n + 2.0 * rng.normal(), 2.0});
    }
    const auto k = kerr_from_power_sweep(pts);
    CHECK(std::abs(k.k + 5.0) < 4 * k.sigma_k);
    CHECK(std::abs(k.f0 - 6.04e9) < 4 * k.sigma_f0);
}

TEST_CASE("kerr fit preconditions") {
    std::vector<PowerPoint> two{{1, 6e9, 0}, {100, 6e9, 0}};
    CHECK_THROWS_AS(kerr_from_power_sweep(two), InputError);
    std::vector<PowerPoint> narrow{{1, 6e9, 0}, {2, 6e9, 0}, {3, 6e9, 0}};
    CHECK_THROWS_AS(kerr_from_power_sweep(narrow), InputError);
    std::vector<PowerPoint> unordered{{1, 6e9, 0}, {50, 6e9, 0}, {20, 6e9, 0}};
    CHECK_THROWS_AS(kerr_from_power_sweep(unordered), InputError);
}

TEST_CASE("inferred array reproduces its own Kerr") {
    // Property: K_strip -> N_JJ -> K_strip is the identity.
    random::PhiloxStream rng(5, 0);
    for (int i = 0; i < 50; ++i) {
        const double k = 0.2 * std::pow(100.0, rng.uniform());
        const double c = 50e-15 + 100e-15 * rng.uniform();
        const auto m = infer_array(k, 1.0, e_c(c), 5e-9, {100e-6, 2e-6, 40e-9});
        CHECK(kerr_from_njj(m.n_jj, e_c(c)) == doctest::Approx(k).epsilon(1e-12));
    }
}
