#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kuramoto/types.hpp"

namespace kuramoto {

/// Q = -sum over ordered pairs (m, l), diagonal included, with equal labels of
/// (A(m, l) - p). Lower is better. Throws DimensionError on a label-count mismatch.
[[nodiscard]] double modularity_objective(const CouplingGraph& graph, std::span<const Index> labels, double density);

/// Ones over M^2 (ordered pairs, diagonal included).
[[nodiscard]] double mean_edge_density(const CouplingGraph& graph);

struct DetectionResult {
    BlockPartition partition;
    double objective = 0.0;  // modularity_objective(graph, partition.labels(), density)
    double density = 0.0;    // edge density used in the objective
    std::size_t passes = 0;  // node sweeps over all aggregation levels
    std::uint64_t seed = 0;
};

/// Greedy multilevel minimisation of the modularity objective with p set to
/// the mean edge density (clamped to [1/(2M^2), 1 - 1/(2M^2)] so complete and
/// empty graphs are well posed).
///
/// Starting from singletons, nodes are visited in a seeded random order and
/// moved to the neighbouring (or a fresh) community with the most negative
/// change of Q. When a sweep moves nothing the communities are collapsed into
/// super-nodes and the procedure repeats, until a level makes no move or
/// `max_passes` sweeps have run. Moves use the exact pair weights
/// A(m, l) + A(l, m), so directed graphs are handled without thresholding.
///
/// Communities are returned by decreasing size, ties broken by smallest member.
[[nodiscard]] DetectionResult detect_communities(const CouplingGraph& graph, std::uint64_t seed,
                                                 std::size_t max_passes = 100);

/// Relabels the graph so position k holds original node order[k]:
/// result(k, j) = A(order[k], order[j]).
[[nodiscard]] CouplingGraph permute_graph(const CouplingGraph& graph, std::span<const Index> order);
[[nodiscard]] CouplingGraph permute_graph(const CouplingGraph& graph, const BlockPartition& partition);

/// Inverse of a permutation given as order[k] = original index.
[[nodiscard]] std::vector<Index> inverse_permutation(std::span<const Index> order);

[[nodiscard]] PhaseState permute_state(const PhaseState& state, std::span<const Index> order);
[[nodiscard]] NaturalFrequencies permute_frequencies(const NaturalFrequencies& freq, std::span<const Index> order);
/// Undo permute_state: result.phases[order[k]] = state.phases[k].
[[nodiscard]] PhaseState unpermute_state(const PhaseState& state, std::span<const Index> order);
/// Un-permutes every stored state; diagnostics are permutation invariant.
[[nodiscard]] Trajectory unpermute_trajectory(const Trajectory& traj, std::span<const Index> order);

/// All-ones diagonal blocks of the community sizes, in community order.
[[nodiscard]] CouplingGraph block_indicator(const BlockPartition& partition);

/// sum|A~ - B~| - sum|A - B|. Non-positive when the detected blocking
/// explains at least as many coefficients as the planted one.
[[nodiscard]] long long detection_score(const CouplingGraph& adjacency, const CouplingGraph& planted_blocks,
                                        const CouplingGraph& detected_adjacency,
                                        const CouplingGraph& detected_blocks);

/// Number of coefficients in which two equally sized 0/1 matrices differ.
[[nodiscard]] std::size_t mismatch_count(const CouplingGraph& a, const CouplingGraph& b);

}  // namespace kuramoto
