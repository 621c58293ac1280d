#pragma once

// Reproducible random numbers. std::mt19937_64 is fully specified by the
// standard, but the <random> distributions are not, so the samplers below
// are written out explicitly.

#include <cmath>
#include <cstdint>
#include <random>

namespace hda {

/// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of iteration j: splitmix64(master + (j + 1) * golden).
constexpr std::uint64_t iteration_seed(std::uint64_t master, std::uint64_t j) {
    return splitmix64(master + (j + 1) * 0x9E3779B97F4A7C15ULL);
}

// Sub-stream tags so the request stream and the Random placement policy never share draws.
inline constexpr std::uint64_t kRequestStreamTag = 0x5245515354524D31ULL;  // "REQSTRM1"
inline constexpr std::uint64_t kPlacementStreamTag = 0x504C4143454D4E31ULL; // "PLACEMN1"

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ tag);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0,1), 53-bit resolution.
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double mean) { return -mean * std::log(uniform_open()); }

    /// Uniform integer in [0, n) by rejection, n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 engine_;
};

// FNV-1a, 64-bit.
class Fnv1a {
public:
    void add_bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 0x100000001B3ULL;
        }
    }
    template <class T>
    void add(const T& v) {
        add_bytes(&v, sizeof(T));
    }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

}  // namespace hda
