#pragma once

#include <cstdint>
#include <vector>

#include "maniplab/core.hpp"

namespace maniplab::core {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// All randomness in the library flows through this splitmix64 stream so that
// identical seeds give bit-identical results on every platform. Never use
// std::uniform_*_distribution here; those are implementation-defined.
class Rng {
  public:
    explicit Rng(Seed seed) : state_(seed) {}

    std::uint64_t next_u64() { return mix64(state_ += 0x9E3779B97F4A7C15ULL); }

    // Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t bound);

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    // Fisher-Yates using this stream.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    // Uniform random permutation of 0..m-1 as a ballot.
    Ballot next_ballot(int m);

  private:
    std::uint64_t state_;
};

// Deterministic per-trial seed derivation: three chained splitmix64 rounds over
// (base, a, b, c). Documented so experiment rows can be reproduced one trial at
// a time.
constexpr Seed derive_seed(Seed base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    Seed h = base;
    h = mix64(h + 0x9E3779B97F4A7C15ULL + a);
    h = mix64(h + 0x6A09E667F3BCC909ULL + b);
    h = mix64(h + 0xB7E151628AED2A6BULL + c);
    return h;
}

}  // namespace maniplab::core
