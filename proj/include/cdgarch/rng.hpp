#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace cdgarch {

// Philox4x64-10 counter-based generator (Salmon et al., SC'11).
// The keyed bijection maps a 256-bit counter to 256 bits of output; we key
// it with (seed, stream) so substreams are independent by construction and
// any draw is reproducible without sequential state. Raw blocks match
// numpy.random.Philox for the same key/counter.
struct Philox4x64 {
    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
        const __uint128_t p = static_cast<__uint128_t>(a) * b;
        hi = static_cast<std::uint64_t>(p >> 64);
        lo = static_cast<std::uint64_t>(p);
    }

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                              std::uint64_t key0, std::uint64_t key1) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key0 += kWeyl0;
                key1 += kWeyl1;
            }
            std::uint64_t hi0, lo0, hi1, lo1;
            mulhilo(kMul0, ctr[0], hi0, lo0);
            mulhilo(kMul1, ctr[2], hi1, lo1);
            ctr = {hi1 ^ ctr[1] ^ key0, lo1, hi0 ^ ctr[3] ^ key1, lo0};
        }
        return ctr;
    }
};

// Seedable stream of doubles on top of Philox. One instance per (seed,
// stream); ensembles derive one stream per path index, so results do not
// depend on scheduling order.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            buf_ = Philox4x64::block({counter_++, 0, 0, 0}, seed_, stream_);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe argument for log().
    double uniform01_open_low() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return mean + stddev * radius * std::cos(angle);
    }

    double exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
        return -std::log(uniform01_open_low()) / rate;
    }

    // Exact Poisson draw; Knuth's product method, with halving for large
    // means to keep the running product away from underflow.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        if (mean > 500.0) {
            const std::uint64_t half = poisson(mean / 2.0);
            return half + poisson(mean - mean / 2.0);
        }
        const double limit = std::exp(-mean);
        std::uint64_t count = 0;
        double product = uniform01();
        while (product > limit) {
            ++count;
            product *= uniform01();
        }
        return count;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace cdgarch
