#pragma once

#include <cmath>
#include <cstdint>

namespace fdc {

// Splittable counter-style generator built on SplitMix64
// (Steele, Lea, Flood 2014; the finalizer is Stafford's Mix13).
// State evolution and output are fixed integer arithmetic, so streams
// are bit-reproducible across platforms and compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derive an independent stream keyed by (seed, key...); used for
    // per-repetition and per-cell substreams.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t key) {
        Rng r(seed ^ mix(key + 0x9e3779b97f4a7c15ull));
        return r.next_u64();
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform on [0,1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [-1/2, 1/2].
    double next_uniform_half() { return next_unit() - 0.5; }

    // Standard normal via Box-Muller; one spare cached per pair.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        while (u1 <= 0.0) u1 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Fisher-Yates helper: uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // rejection sampling keeps the draw exactly uniform
        const std::uint64_t limit = ~0ull - ~0ull % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fdc
