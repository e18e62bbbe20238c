#include <doctest.h>

#include <cmath>

#include "resokit/random.hpp"

using namespace resokit::random;

TEST_CASE("philox4x32-10 known-answer vectors") {
    auto b = philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(b == Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    b = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(b == Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    b = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(b == Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and independent") {
    PhiloxStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        CHECK(x != c.normal());
        CHECK(x != d.normal());
    }
}

TEST_CASE("uniforms lie in the open unit interval") {
    CHECK(to_unit(0, 0) > 0.0);
    CHECK(to_unit(0xffffffffu, 0xffffffffu) < 1.0);
    CHECK(1.0 - to_unit(0xffffffffu, 0xffffffffu) == doctest::Approx(std::ldexp(1.0, -53)));
}

TEST_CASE("normal moments") {
    PhiloxStream s(7, 3);
    const int n = 200000;
    double m = 0, v = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        m += x;
        v += x * x;
    }
    m /= n;
    v = v / n - m * m;
    CHECK(std::abs(m) < 5.0 / std::sqrt(n));
    CHECK(std::abs(v - 1.0) < 0.02);
}
