#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kuramoto/types.hpp"

namespace kuramoto {

/// xoshiro256** seeded through splitmix64. Bit-identical streams on every
/// platform, unlike the standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound), bound > 0, without modulo bias.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t s_[4];
};

/// Row-major threshold matrix: A(m, l) = 1 when z > p for a fresh uniform z.
/// p <= 0 gives the complete matrix and p >= 1 the empty one.
[[nodiscard]] CouplingGraph random_threshold_matrix(std::size_t size, double threshold, std::uint64_t seed);

/// Matrix with a block structure: entry (m, l) with m in block i and l in
/// block j is one when z > thresholds[i * blocks + j].
[[nodiscard]] CouplingGraph block_threshold_matrix(std::span<const std::size_t> block_sizes,
                                                   std::span<const double> thresholds, std::uint64_t seed);

struct PlantedInstance {
    CouplingGraph adjacency;   // B with flipped coefficients
    CouplingGraph blocks;      // B, all-ones diagonal blocks
    BlockPartition partition;  // true communities, largest first
};

/// Diagonal all-ones blocks of the given sizes; every coefficient is flipped
/// independently when z < p_flip. With `symmetric`, flips are drawn for l >= m
/// only and mirrored.
[[nodiscard]] PlantedInstance planted_block_matrix(std::span<const std::size_t> block_sizes, double p_flip,
                                                   std::uint64_t seed, bool symmetric = false);

/// Four blocks of sizes 4s, 3s, 2s, s (M = 10 s).
[[nodiscard]] PlantedInstance planted_block_matrix(std::size_t s, double p_flip, std::uint64_t seed,
                                                   bool symmetric = false);

/// Four blocks in ratio 4:3:2:1 for an arbitrary total (largest remainder rounding).
[[nodiscard]] std::vector<std::size_t> planted_block_sizes(std::size_t total);

/// omega_m = 1 + omega0 (2m - M - 1)/(M - 1) with 1-based m. Needs M >= 2.
[[nodiscard]] NaturalFrequencies default_frequencies(std::size_t size, double omega0);
/// theta_m(0) = 2 pi m / M with 1-based m, at time 0.
[[nodiscard]] PhaseState default_initial_phases(std::size_t size);
/// Independent uniform phases on [0, 2 pi), at time 0.
[[nodiscard]] PhaseState random_phases(std::size_t size, std::uint64_t seed);

/// Uniformly random bijection of [0, size) (Fisher-Yates).
[[nodiscard]] std::vector<Index> random_permutation(std::size_t size, std::uint64_t seed);

}  // namespace kuramoto
