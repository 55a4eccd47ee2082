#pragma once

#include <cstdint>
#include <vector>

namespace ocf {

// Deterministic PRNG used everywhere randomness appears (folds, subsampling,
// instance generation). xoshiro256** seeded through splitmix64, with our own
// bounded-draw and shuffle so results are identical across standard libraries
// and platforms. std::uniform_int_distribution is implementation-defined and
// must not be used anywhere seeded output is compared byte-for-byte.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix64(x);
    }

    // Independent stream k of a master seed; stream identity is stable, so
    // iteration k draws the same sample no matter how many streams exist.
    static Rng stream(std::uint64_t master_seed, std::uint64_t k) {
        std::uint64_t x = master_seed;
        std::uint64_t a = splitmix64(x);
        std::uint64_t mixed = a ^ (k * 0x9e3779b97f4a7c15ULL);
        return Rng(splitmix64(mixed));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased draw from [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);
    // k indices from [0, n), independent draws.
    std::vector<std::size_t> sample_with_replacement(std::size_t n, std::size_t k);

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace ocf
