#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace olp {

// Deterministic RNG used everywhere in the library. All bounded draws are
// implemented on top of the raw 64-bit stream so that results do not depend
// on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n). Rejection sampling, unbiased.
    std::size_t below(std::size_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return static_cast<std::size_t>(x % n);
    }

    // Uniform real in [0, 1) with 53-bit resolution.
    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return real() < p; }

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[below(i)]);
    }

    // Stable seed derivation for independent sub-streams (splitmix64 steps).
    static std::uint64_t mix(std::uint64_t seed, std::initializer_list<std::uint64_t> salts) {
        auto step = [](std::uint64_t& s) {
            s += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        };
        std::uint64_t state = seed;
        std::uint64_t out = step(state);
        for (std::uint64_t salt : salts) {
            state ^= salt + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
            out = step(state);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace olp
