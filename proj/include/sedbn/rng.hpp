#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sedbn {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a. Stable across platforms and runs, unlike std::hash.
constexpr std::uint64_t hash_string(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class SeedSequence {
public:
    explicit SeedSequence(std::uint64_t seed) : state_(mix64(seed)) {}

    SeedSequence& add(std::uint64_t v) {
        state_ = mix64(state_ ^ mix64(v));
        return *this;
    }
    SeedSequence& add(std::string_view s) { return add(hash_string(s)); }

    std::uint64_t value() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

// Dirichlet(1, ..., 1) over k components: normalized unit exponentials.
std::vector<double> sample_flat_dirichlet(std::size_t k, Rng& rng);

// Uniform double in [0, 1).
double uniform01(Rng& rng);

// Index drawn from an (unnormalized is fine) discrete distribution.
std::size_t sample_categorical(const std::vector<double>& probs, Rng& rng);

}  // namespace sedbn
