#include <doctest.h>

#include <cmath>
#include <vector>

#include "resokit/numerics/levenberg_marquardt.hpp"
#include "resokit/numerics/linear_fit.hpp"
#include "resokit/random.hpp"

using namespace resokit::numerics;

TEST_CASE("LM recovers an exponential decay") {
    std::vector<double> t(60), y(60);
    for (int i = 0; i < 60; ++i) {
        t[i] = 0.1 * i;
        y[i] = 2.5 * std::exp(-t[i] / 1.7) + 0.3;
    }
    auto res = [&](const Vector& p) {
        Vector r(60);
        for (int i = 0; i < 60; ++i) r[i] = p[0] * std::exp(-t[i] / p[1]) + p[2] - y[i];
        return r;
    };
    Vector x0(3);
    x0 << 1.0, 1.0, 0.0;
    const auto r = levenberg_marquardt(res, x0);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(2.5).epsilon(1e-8));
    CHECK(r.x[1] == doctest::Approx(1.7).epsilon(1e-8));
    CHECK(r.x[2] == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("LM respects bounds") {
    auto res = [](const Vector& p) {
        Vector r(1);
        r[0] = p[0] - 5.0;
        return r;
    };
    Vector x0(1), lo(1), hi(1);
    x0 << 0.0;
    lo << -1.0;
    hi << 2.0;
    const auto r = levenberg_marquardt(res, x0, {}, {}, Bounds{lo, hi});
    CHECK(r.x[0] == doctest::Approx(2.0));
}

TEST_CASE("weighted line fit matches the normal equations") {
    const std::vector<double> x{0, 1, 2, 3, 4}, y{1.1, 2.9, 5.2, 6.8, 9.1}, s{0.1, 0.2, 0.1, 0.3, 0.2};
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 5; ++i) {
        const double w = 1 / (s[i] * s[i]);
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
        sxx += w * x[i] * x[i];
        sxy += w * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    const auto f = fit_line(x, y, s);
    CHECK(f.slope == doctest::Approx((sw * sxy - sx * sy) / det).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx((sxx * sy - sx * sxy) / det).epsilon(1e-12));
    CHECK(f.var_slope == doctest::Approx(sw / det).epsilon(1e-12));
    CHECK(f.var_intercept == doctest::Approx(sxx / det).epsilon(1e-12));
    CHECK(f.cov == doctest::Approx(-sx / det).epsilon(1e-12));
}
