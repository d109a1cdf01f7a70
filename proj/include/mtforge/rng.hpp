#pragma once

#include <cstdint>
#include <vector>

namespace mtforge {

// splitmix64: tiny, well-mixed generator. Implemented here (rather than
// std::mt19937 + distributions) because distribution output is
// implementation-defined and seeds must reproduce byte-identical datasets
// across platforms.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + (salt << 6) + (salt >> 2));
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // [0, n); n > 0
    std::uint64_t bounded(std::uint64_t n) { return n <= 1 ? 0 : next_u64() % n; }

    // [lo, hi] inclusive
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<std::int64_t>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // [0, 1)
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    Rng fork(std::uint64_t salt) const { return Rng(mix_seed(seed_, salt)); }

    std::uint64_t seed() const { return seed_; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace mtforge
