#pragma once

// Seeded counter-based RNG (splitmix64 finalizer + Box-Muller). Deterministic
// and platform-independent, unlike std::normal_distribution; identical seeds
// give bit-identical streams.

#include <cmath>
#include <cstdint>

namespace fluxsim {

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    // Uniform in (0, 1), indexed by counter.
    double uniform(std::uint64_t counter) const {
        const std::uint64_t bits = mix(seed_ ^ mix(counter + 0x9e3779b97f4a7c15ull));
        return (double(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);  // 2^53
    }

    // Standard normal, indexed by counter.
    double gaussian(std::uint64_t counter) const {
        const double u1 = uniform(2 * counter);
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Derive an independent stream (per-task splitting from a root seed).
    CounterRng split(std::uint64_t stream) const { return CounterRng(mix(seed_ ^ mix(~stream))); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

}  // namespace fluxsim
