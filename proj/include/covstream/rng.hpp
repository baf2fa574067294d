#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace covstream {

// Reproducibility contract: identical Seed + identical parameters produce a
// bit-identical result within this implementation. All distribution code is
// written out below (bounded draws, unit doubles, shuffles) instead of going
// through <random> distributions, whose output is not pinned by the standard.
struct Seed {
    std::uint64_t value = 0;

    // Derives an independent per-task seed (splitmix64 finalizer).
    Seed derive(std::uint64_t salt) const {
        std::uint64_t z = value + 0x9e3779b97f4a7c15ULL * (salt + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Seed{z ^ (z >> 31)};
    }

    bool operator==(const Seed&) const = default;
};

class Rng {
public:
    explicit Rng(Seed s) : eng_(s.value) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, bound), bound >= 1. Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return unit() < p;
    }

    bool coin() { return eng_() & 1u; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace covstream
