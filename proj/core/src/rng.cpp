#include "tzl/rng.hpp"

#include "tzl/numeric.hpp"

#include <cmath>

namespace tzl {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

} // namespace

std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt) noexcept {
    return splitmix64_mix(master_seed ^ splitmix64_mix(salt + 1));
}

Xoshiro256ss::Xoshiro256ss(std::uint64_t seed) noexcept {
    std::uint64_t state = seed;
    for (auto& word : s_) {
        state += kGolden;
        word = splitmix64_mix(state);
    }
}

std::uint64_t Xoshiro256ss::next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256ss::uniform_open0() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

TrialStream::TrialStream(std::uint64_t master_seed, std::uint64_t trial_index) noexcept
    : gen_(splitmix64_mix(master_seed ^ trial_index)) {}

std::complex<double> TrialStream::complex_gaussian() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    // (xi1 + i xi2)/sqrt 2 with Box-Muller radius sqrt(-2 log u1).
    return std::polar(std::sqrt(-std::log(u1)), 2.0 * kPi * u2);
}

std::complex<double> sample_complex_gaussian(TrialStream& stream) noexcept {
    return stream.complex_gaussian();
}

} // namespace tzl
