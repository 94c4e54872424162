#include "kuramoto/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "kuramoto/error.hpp"

namespace kuramoto {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
    for (auto& word : s_) word = splitmix64(seed);
}

std::uint64_t Rng::next_u64() {
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

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t x = next_u64();
        if (x >= limit) return x % bound;
    }
}

CouplingGraph random_threshold_matrix(std::size_t size, double threshold, std::uint64_t seed) {
    if (threshold <= 0.0) return CouplingGraph::complete(size);
    if (threshold >= 1.0) return CouplingGraph::empty(size);
    Rng rng(seed);
    std::vector<std::vector<Index>> rows(size);
    for (std::size_t m = 0; m < size; ++m) {
        for (std::size_t l = 0; l < size; ++l) {
            if (rng.uniform() > threshold) rows[m].push_back(static_cast<Index>(l));
        }
    }
    return CouplingGraph::from_nonzeros(size, std::move(rows));
}

namespace {

std::vector<Index> block_index(std::span<const std::size_t> block_sizes) {
    std::vector<Index> block;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) block.insert(block.end(), block_sizes[b], static_cast<Index>(b));
    return block;
}

}  // namespace

CouplingGraph block_threshold_matrix(std::span<const std::size_t> block_sizes, std::span<const double> thresholds,
                                     std::uint64_t seed) {
    const std::size_t nb = block_sizes.size();
    if (thresholds.size() != nb * nb) {
        throw DimensionError(fmt::format("{} blocks need {} thresholds, got {}", nb, nb * nb, thresholds.size()));
    }
    const auto block = block_index(block_sizes);
    const std::size_t size = block.size();
    Rng rng(seed);
    std::vector<std::vector<Index>> rows(size);
    for (std::size_t m = 0; m < size; ++m) {
        for (std::size_t l = 0; l < size; ++l) {
            const double p = thresholds[block[m] * nb + block[l]];
            const double z = rng.uniform();
            const bool one = p <= 0.0 ? true : (p >= 1.0 ? false : z > p);
            if (one) rows[m].push_back(static_cast<Index>(l));
        }
    }
    return CouplingGraph::from_nonzeros(size, std::move(rows));
}

PlantedInstance planted_block_matrix(std::span<const std::size_t> block_sizes, double p_flip, std::uint64_t seed,
                                     bool symmetric) {
    const auto block = block_index(block_sizes);
    const std::size_t size = block.size();
    std::vector<std::uint8_t> planted(size * size, 0);
    for (std::size_t m = 0; m < size; ++m) {
        for (std::size_t l = 0; l < size; ++l) planted[m * size + l] = block[m] == block[l] ? 1 : 0;
    }
    std::vector<std::uint8_t> flipped = planted;
    Rng rng(seed);
    for (std::size_t m = 0; m < size; ++m) {
        for (std::size_t l = symmetric ? m : 0; l < size; ++l) {
            if (rng.uniform() < p_flip) {
                flipped[m * size + l] ^= 1U;
                if (symmetric && l != m) flipped[l * size + m] ^= 1U;
            }
        }
    }
    return {CouplingGraph::from_dense(size, flipped), CouplingGraph::from_dense(size, planted),
            BlockPartition::from_sizes(block_sizes)};
}

PlantedInstance planted_block_matrix(std::size_t s, double p_flip, std::uint64_t seed, bool symmetric) {
    if (s == 0) throw ConfigError("planted block scale s must be positive");
    const std::size_t sizes[] = {4 * s, 3 * s, 2 * s, s};
    return planted_block_matrix(sizes, p_flip, seed, symmetric);
}

std::vector<std::size_t> planted_block_sizes(std::size_t total) {
    std::vector<std::size_t> sizes(4);
    std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder, block)
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t weighted = total * (4 - k);
        sizes[k] = weighted / 10;
        assigned += sizes[k];
        remainders.emplace_back(weighted % 10, k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++sizes[remainders[i].second];
    return sizes;
}

NaturalFrequencies default_frequencies(std::size_t size, double omega0) {
    if (size < 2) throw ConfigError("default frequencies need at least two oscillators");
    NaturalFrequencies freq;
    freq.omega.resize(size);
    const double denom = static_cast<double>(size - 1);
    for (std::size_t k = 0; k < size; ++k) {
        const double m = static_cast<double>(k + 1);
        freq.omega[k] = 1.0 + omega0 * (2.0 * m - static_cast<double>(size) - 1.0) / denom;
    }
    return freq;
}

PhaseState default_initial_phases(std::size_t size) {
    PhaseState state;
    state.phases.resize(size);
    for (std::size_t k = 0; k < size; ++k) {
        state.phases[k] = 2.0 * std::numbers::pi * static_cast<double>(k + 1) / static_cast<double>(size);
    }
    return state;
}

PhaseState random_phases(std::size_t size, std::uint64_t seed) {
    Rng rng(seed);
    PhaseState state;
    state.phases.resize(size);
    for (double& t : state.phases) t = 2.0 * std::numbers::pi * rng.uniform();
    return state;
}

std::vector<Index> random_permutation(std::size_t size, std::uint64_t seed) {
    std::vector<Index> perm(size);
    std::iota(perm.begin(), perm.end(), Index{0});
    Rng rng(seed);
    for (std::size_t i = size; i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

}  // namespace kuramoto
