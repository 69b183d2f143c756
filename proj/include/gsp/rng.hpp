#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>

namespace gsp {

// Seedable, splittable random stream. Every sampling site in the library
// takes an explicit stream (or a seed from which one is derived), so runs
// are bit-reproducible for a fixed master seed. Substreams are derived by
// mixing labels/indices into the parent seed with splitmix64, which keeps
// streams statistically independent of each other.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    // Uniform double in [0, 1); built from raw bits so the mapping does not
    // depend on the standard library's distribution implementation.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // +1 or -1 with equal probability.
    int rademacher() { return (engine_() & 1u) ? 1 : -1; }

    std::uint64_t next_u64() { return engine_(); }

    // Standard normal via Box-Muller.
    double gauss() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Derive an independent child stream; deterministic in (seed, index).
    RngStream split(std::uint64_t index) const {
        return RngStream(derive(seed_, index));
    }

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Fold a sequence of components (indices, encoded floats) into a seed.
    template <typename... Ts>
    static std::uint64_t derive(std::uint64_t seed, Ts... components) {
        std::uint64_t h = mix(seed);
        ((h = mix(h ^ static_cast<std::uint64_t>(components))), ...);
        return h;
    }

    static std::uint64_t encode_double(double v) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        return bits;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace gsp
