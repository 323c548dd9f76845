#pragma once

#include <cstdint>
#include <vector>

#include "evolop/common.hpp"

namespace evolop {

/// Deterministic counter-based 64-bit generator used for every random draw
/// in the library (sketching, inducing-point sampling, noise generation).
///
/// The state advances along a fixed Weyl sequence (state += 0x9E3779B97F4A7C15)
/// and each output is a bijective scramble of the state (SplitMix64 constants).
/// Because the k-th output is a pure function of (seed, k), streams are
/// reproducible across platforms; no std::random distribution is used
/// anywhere (their outputs are implementation-defined).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; used where log(u) must stay finite.
    double uniform_open() { return 1.0 - uniform(); }

    /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
    double normal();

    /// Unbiased uniform integer in [0, bound) (Lemire rejection method).
    std::uint64_t uniform_below(std::uint64_t bound);

    /// k distinct indices drawn uniformly from {0, ..., n-1}, returned sorted
    /// ascending (so k == n yields the identity index set).
    std::vector<Index> sample_without_replacement(Index n, Index k);

    /// n-by-k matrix of independent standard normals, column-major fill order.
    Matrix normal_matrix(Index rows, Index cols);

private:
    std::uint64_t state_;
};

}  // namespace evolop
