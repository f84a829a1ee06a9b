// rng.hpp
//
// Deterministic streamed random number generation. Every Monte Carlo trial
// gets its own stream derived from (seed, stream words), so results are
// bit-identical no matter how trials are scheduled across threads and no
// matter which standard library is in use. Core generator is xoshiro256++
// seeded through splitmix64; Gaussians come from an explicit Box-Muller
// transform rather than std::normal_distribution (whose output is
// implementation-defined).

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace freemimo {

// splitmix64 step (Vigna); used only for stream seeding.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with a per-stream state derived from a base seed plus up to
// three stream identifier words (e.g. sweep index, trial index, purpose tag).
class StreamRng {
  public:
    explicit StreamRng(std::uint64_t seed, std::uint64_t id0 = 0, std::uint64_t id1 = 0,
                       std::uint64_t id2 = 0) {
        std::uint64_t sm = seed;
        sm ^= 0xA0761D6478BD642FULL * (id0 + 1);
        (void)splitmix64(sm);
        sm ^= 0xE7037ED1A0B428DBULL * (id1 + 1);
        (void)splitmix64(sm);
        sm ^= 0x8EBC6AF09C88C6E3ULL * (id2 + 1);
        for (auto& word : state_) word = splitmix64(sm);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next() {
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

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1]; safe as a log() argument.
    double uniform_pos() { return 1.0 - uniform(); }

    // Standard complex Gaussian with E|X|^2 = 1 (real and imaginary parts are
    // independent N(0, 1/2)): X = sqrt(-ln U1) * exp(2*pi*i*U2).
    std::complex<double> cgauss() {
        const double radius = std::sqrt(-std::log(uniform_pos()));
        const double angle = 2.0 * kPi * uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    // Uniform phase factor exp(i*phi), phi ~ U[0, 2*pi).
    std::complex<double> phase() {
        const double angle = 2.0 * kPi * uniform();
        return {std::cos(angle), std::sin(angle)};
    }

  private:
    static constexpr double kPi = 3.141592653589793238462643383279502884;
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace freemimo
