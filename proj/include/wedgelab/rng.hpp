#pragma once

#include <cstdint>
#include <random>

namespace wedgelab {

// Deterministic RNG wrapper. uniform_below avoids std::uniform_int_distribution,
// whose output is implementation-defined; the same seed must reproduce the same
// stream on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Unbiased uniform draw from [0, n) by rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Stream for worker `index`, derived from a master seed by counter.
    static Rng for_worker(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(splitmix(master_seed + 0x9e3779b97f4a7c15ull * (index + 1)));
    }

  private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace wedgelab
