#pragma once

// Counter-based seeding for reproducible Monte Carlo.
//
// Each trial owns an independent stream:
//   trial_seed = splitmix64_mix(master_seed ^ trial_index)
//   state      = four successive SplitMix64 outputs from trial_seed
//   generator  = xoshiro256**
// SplitMix64 increment 0x9e3779b97f4a7c15, finalizer multipliers
// 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb (shifts 30, 27, 31).
// Outputs therefore depend only on (master_seed, trial_index).

#include <complex>
#include <cstdint>

namespace tzl {

/// SplitMix64 finalizer (a bijective 64-bit mixer).
std::uint64_t splitmix64_mix(std::uint64_t x) noexcept;

/// Independent master seed for a labelled sub-experiment (e.g. one p in a
/// sweep): splitmix64_mix(master ^ splitmix64_mix(salt + 1)).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt) noexcept;

class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;
    /// Uniform in (0, 1], 53-bit resolution.
    double uniform_open0() noexcept;

private:
    std::uint64_t s_[4];
};

/// Stream for one trial of a seeded experiment.
class TrialStream {
public:
    TrialStream(std::uint64_t master_seed, std::uint64_t trial_index) noexcept;

    double uniform() noexcept { return gen_.uniform_open0(); }
    /// Standard complex Gaussian: (xi1 + i xi2)/sqrt(2), xi standard normal,
    /// drawn by Box-Muller, so E|eta|^2 = 1 and E[eta^2] = 0.
    std::complex<double> complex_gaussian() noexcept;

private:
    Xoshiro256ss gen_;
};

std::complex<double> sample_complex_gaussian(TrialStream& stream) noexcept;

} // namespace tzl
