#pragma once

#include <cstdint>
#include <cmath>

namespace bmspec {

// Counter-based splittable generator. Every draw is a pure function of
// (seed, stream, counter), so trials can run in any order or in parallel
// and still replay bit-identically.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream))) {}

    std::uint64_t next_u64() {
        return mix(key_ + counter_++ * 0x9e3779b97f4a7c15ULL);
    }

    // uniform in [0, 1) with 53 random bits
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; second value of each pair is cached
    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // u in (0,1] so the log is finite
        double u = 1.0 - next_double();
        double v = next_double();
        double radius = std::sqrt(-2.0 * std::log(u));
        double angle = 6.283185307179586476925286766559 * v;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// Derived stream id for trial i of a stream family; feeds CounterRng's
// stream argument so parallel trials get independent sequences.
inline std::uint64_t substream(std::uint64_t base, std::uint64_t i) {
    return base * 0x9e3779b97f4a7c15ULL + i + 1;
}

} // namespace bmspec
