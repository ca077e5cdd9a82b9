#pragma once

#include <cstdint>
#include <string_view>

namespace imscale {

// SplitMix64 step. Used for seeding and as the mixing function of the
// labelled seed derivation below.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna). Self-contained so that results never
// depend on the standard library's engine or distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_)
            word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound), unbiased (Lemire's multiply-shift rejection).
    std::uint64_t uniform_int(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform in [lo, hi] inclusive.
    std::uint64_t uniform_int_inclusive(std::uint64_t lo, std::uint64_t hi) {
        return lo + uniform_int(hi - lo + 1);
    }

    template <typename T>
    void shuffle(T& seq) {
        for (std::size_t i = seq.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(seq[i - 1], seq[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

inline std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
    for (const char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Labelled seed derivation: stage and per-task seeds are fanned out from a
// master seed through an order-sensitive mix, so every stream is independent
// and reproducible in isolation.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t part) {
    std::uint64_t s = base ^ (part + 0x9e3779b97f4a7c15ULL + (base << 6) + (base >> 2));
    return splitmix64_next(s);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(base, a, b), c);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
    return derive_seed(base, hash_label(label));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t a) {
    return derive_seed(derive_seed(base, hash_label(label)), a);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t a,
                                 std::uint64_t b) {
    return derive_seed(derive_seed(base, hash_label(label)), a, b);
}

}  // namespace imscale
