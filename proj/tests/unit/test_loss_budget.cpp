#include <doctest.h>

#include <cmath>
#include <vector>

#include "resokit/constants.hpp"
#include "resokit/errors.hpp"
#include "resokit/loss_budget.hpp"
#include "resokit/random.hpp"

using namespace resokit;
using namespace resokit::loss;

TEST_CASE("internal loss is the sum of its channels") {
    LossLedger l;
    l.gamma_bulk = 2e-7;
    l.p_bulk = 0.9;
    l.gamma_surf = 1e-3;
    l.p_ma = 1e-5;
    l.p_ms = 2e-5;
    l.p_sa = 3e-5;
    l.q_ind_inv = 1e-7;
    l.q_contact_inv = 5e-8;
    const auto r = total_internal_loss(l);
    CHECK(r.bulk == doctest::Approx(1.8e-7));
    CHECK(r.surface == doctest::Approx(6e-8));
    CHECK(r.total == doctest::Approx(1.8e-7 + 6e-8 + 1e-7 + 5e-8));
    CHECK(r.q_int() == doctest::Approx(1.0 / r.total));
}

TEST_CASE("negative participations are rejected") {
    LossLedger l;
    l.p_ma = -1e-5;
    CHECK_THROWS_AS(l.validate(), ValidationError);
}

TEST_CASE("residual loss and its sign flag") {
    CHECK(residual_loss(2.67e6, 4.5e6).inv_q_res == doctest::Approx(1 / 2.67e6 - 1 / 4.5e6).epsilon(1e-14));
    CHECK(residual_loss(5e6, 4.5e6).negative);
}

TEST_CASE("package loss terms") {
    PackageLosses p{4.1e-2, 5e-9, 2.1e-3, 1.7e-6, 1.9e-6, 4.75e-3};
    const auto r = package_loss(p);
    CHECK(r.ma == doctest::Approx(2.05e-10));
    CHECK(r.conductor == doctest::Approx(3.57e-9));
    CHECK(r.seam == doctest::Approx(9.025e-9));
    CHECK(r.total == doctest::Approx(r.ma + r.conductor + r.seam));
}

TEST_CASE("conductor loss factor conventions differ by 2 pi") {
    const double w = conductor_loss_factor(0.61e-6, 50e-9, 4.6e9);
    const double f = conductor_loss_factor_table(0.61e-6, 50e-9, 4.6e9);
    CHECK(w == doctest::Approx(0.61e-6 / (constants::mu0 * 2 * constants::pi * 4.6e9 * 50e-9)).epsilon(1e-14));
    CHECK(f / w == doctest::Approx(2 * constants::pi).epsilon(1e-14));
}

TEST_CASE("TLS fit recovers a saturating model") {
    std::vector<TlsPoint> pts;
    random::PhiloxStream rng(2, 0);
    for (int i = 0; i <= 30; ++i) {
        const double n = std::pow(10.0, -1.0 + 7.0 * i / 30.0);
        const double v = tls_model(n, 2e6, 4e-7, 30.0, 0.8);
        pts.push_back({n, v * (1 + 0.002 * rng.normal()), 0.0});
    }
    const auto r = tls_fit(pts);
    CHECK(r.tls_resolved);
    CHECK(r.q0 == doctest::Approx(2e6).epsilon(0.02));
    CHECK(r.tls_loss == doctest::Approx(4e-7).epsilon(0.05));
    CHECK(r.beta == doctest::Approx(0.8).epsilon(0.1));
    CHECK(r.q_single_photon == doctest::Approx(1.0 / r.inv_q(1.0)));
}

TEST_CASE("flat TLS data falls back to a constant") {
    std::vector<TlsPoint> pts;
    random::PhiloxStream rng(4, 0);
    for (int i = 0; i <= 20; ++i) pts.push_back({std::pow(10.0, i * 0.3), 5e-7 * (1 + 0.01 * rng.normal()), 0.0});
    const auto r = tls_fit(pts);
    CHECK_FALSE(r.tls_resolved);
    CHECK(r.q0 == doctest::Approx(2e6).epsilon(0.01));
}

TEST_CASE("TLS fit needs enough dynamic range") {
    std::vector<TlsPoint> pts{{1, 1e-6, 0}, {2, 1e-6, 0}, {3, 1e-6, 0}, {4, 1e-6, 0}, {5, 1e-6, 0}};
    CHECK_THROWS_AS(tls_fit(pts), InputError);
}
