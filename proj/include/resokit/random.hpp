#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

/// Counter-based Philox4x32-10 generator (Salmon et al., Random123) and the
/// fixed stream layout used for all synthetic data:
///
///   key     = {seed & 0xffffffff, seed >> 32}
///   counter = {block & 0xffffffff, block >> 32, stream & 0xffffffff, stream >> 32}
///
/// Each block yields four 32-bit words w0..w3. Uniforms in (0, 1) are built
/// from word pairs as (((w_a >> 6) * 2^26 + (w_b >> 6)) + 0.5) / 2^52, with
/// pairs (w0, w1) and (w2, w3). Gaussian pairs use Box-Muller on the two
/// uniforms u1, u2 of one block: sqrt(-2 ln u1) * {cos, sin}(2 pi u2).
namespace resokit::random {

using Block = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline Block philox4x32_10(Block ctr, Key key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += w0;
            key[1] += w1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

inline double to_unit(std::uint32_t a, std::uint32_t b) {
    // 52 bits keep the largest value, 1 - 2^-53, strictly below one.
    const std::uint64_t k = (static_cast<std::uint64_t>(a >> 6) << 26) + (b >> 6);
    return (static_cast<double>(k) + 0.5) / 4503599627370496.0;
}

/// Sequential view of one (seed, stream) pair.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    Block block(std::uint64_t index) const {
        const Block ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        const Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
        return philox4x32_10(ctr, key);
    }

    /// Next uniform in (0, 1); consumes half a block.
    double uniform() {
        if (!have_uniform_) {
            cached_ = block(next_block_++);
            have_uniform_ = true;
            return to_unit(cached_[0], cached_[1]);
        }
        have_uniform_ = false;
        return to_unit(cached_[2], cached_[3]);
    }

    /// Next standard normal; each block supplies one Box-Muller pair.
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return spare_normal_;
        }
        const Block b = block(next_block_++);
        const double u1 = to_unit(b[0], b[1]);
        const double u2 = to_unit(b[2], b[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_normal_ = r * std::sin(angle);
        have_normal_ = true;
        return r * std::cos(angle);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t next_block_ = 0;
    Block cached_{};
    bool have_uniform_ = false;
    double spare_normal_ = 0.0;
    bool have_normal_ = false;
};

}  // namespace resokit::random
