#include "kuramoto/community.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "kuramoto/error.hpp"
#include "kuramoto/generators.hpp"

namespace kuramoto {

double modularity_objective(const CouplingGraph& graph, std::span<const Index> labels, double density) {
    const std::size_t size = graph.size();
    if (labels.size() != size) {
        throw DimensionError(fmt::format("{} labels for a graph with {} nodes", labels.size(), size));
    }
    double inside = 0.0;
    for (std::size_t m = 0; m < size; ++m) {
        const Index own = labels[m];
        graph.for_each_nonzero(m, [&](Index l) {
            if (labels[l] == own) inside += 1.0;
        });
    }
    Index max_label = 0;
    for (Index l : labels) max_label = std::max(max_label, l);
    std::vector<double> counts(size == 0 ? 0 : max_label + 1, 0.0);
    for (Index l : labels) counts[l] += 1.0;
    double pairs = 0.0;
    for (double n : counts) pairs += n * n;
    return -(inside - density * pairs);
}

double mean_edge_density(const CouplingGraph& graph) {
    if (graph.size() == 0) return 0.0;
    const double size = static_cast<double>(graph.size());
    return static_cast<double>(graph.ones()) / (size * size);
}

namespace {

/// Symmetric weighted graph on super-nodes; self pairs are not stored.
struct LevelGraph {
    std::vector<std::size_t> offsets;
    std::vector<Index> neighbors;
    std::vector<double> weights;
    std::vector<double> node_size;

    [[nodiscard]] std::size_t size() const { return node_size.size(); }
};

LevelGraph base_level(const CouplingGraph& graph) {
    const std::size_t size = graph.size();
    // Out-lists are the nonzero columns; in-lists come from a counting transpose.
    std::vector<std::size_t> in_offsets(size + 1, 0);
    for (std::size_t m = 0; m < size; ++m) {
        graph.for_each_nonzero(m, [&](Index l) { ++in_offsets[l + 1]; });
    }
    std::partial_sum(in_offsets.begin(), in_offsets.end(), in_offsets.begin());
    std::vector<Index> in_lists(in_offsets.back());
    {
        std::vector<std::size_t> fill(in_offsets.begin(), in_offsets.end() - 1);
        for (std::size_t m = 0; m < size; ++m) {
            graph.for_each_nonzero(m, [&](Index l) { in_lists[fill[l]++] = static_cast<Index>(m); });
        }
    }

    LevelGraph level;
    level.node_size.assign(size, 1.0);
    level.offsets.reserve(size + 1);
    level.offsets.push_back(0);
    std::vector<Index> out;
    for (std::size_t m = 0; m < size; ++m) {
        out.clear();
        graph.for_each_nonzero(m, [&](Index l) { out.push_back(l); });
        auto a = out.begin();
        auto b = in_lists.begin() + static_cast<std::ptrdiff_t>(in_offsets[m]);
        const auto b_end = in_lists.begin() + static_cast<std::ptrdiff_t>(in_offsets[m + 1]);
        while (a != out.end() || b != b_end) {
            Index l;
            double w = 0.0;
            if (b == b_end || (a != out.end() && *a < *b)) {
                l = *a++;
                w = 1.0;
            } else if (a == out.end() || *b < *a) {
                l = *b++;
                w = 1.0;
            } else {
                l = *a;
                ++a;
                ++b;
                w = 2.0;
            }
            if (l == m) continue;
            level.neighbors.push_back(l);
            level.weights.push_back(w);
        }
        level.offsets.push_back(level.neighbors.size());
    }
    return level;
}

struct LocalMoveOutcome {
    std::vector<Index> community;  // per super-node, compacted to [0, count)
    std::size_t count = 0;
    std::size_t sweeps = 0;
    bool moved = false;
};

LocalMoveOutcome local_moves(const LevelGraph& g, double density, Rng& rng, std::size_t max_sweeps) {
    const std::size_t n = g.size();
    LocalMoveOutcome result;
    std::vector<Index> community(n);
    std::iota(community.begin(), community.end(), Index{0});
    std::vector<double> community_size = g.node_size;
    std::vector<Index> empty_ids;

    std::vector<double> link(n, 0.0);
    std::vector<Index> touched;
    std::vector<Index> visit(n);
    std::iota(visit.begin(), visit.end(), Index{0});

    const double tolerance = 1e-10;
    while (result.sweeps < max_sweeps) {
        ++result.sweeps;
        for (std::size_t i = n; i > 1; --i) std::swap(visit[i - 1], visit[rng.below(i)]);
        bool moved_in_sweep = false;
        for (Index v : visit) {
            const Index own = community[v];
            const double s = g.node_size[v];
            touched.clear();
            for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                const Index c = community[g.neighbors[e]];
                if (link[c] == 0.0) touched.push_back(c);
                link[c] += g.weights[e];
            }
            const double own_link = link[own];
            const double own_rest = community_size[own] - s;
            Index best = own;
            double best_gain = -tolerance;
            for (Index c : touched) {
                if (c == own) continue;
                const double gain = own_link - link[c] + 2.0 * density * s * (community_size[c] - own_rest);
                if (gain < best_gain || (gain == best_gain && best != own && c < best)) {
                    best_gain = gain;
                    best = c;
                }
            }
            if (own_rest > 0.0 && !empty_ids.empty()) {
                const double gain = own_link - 2.0 * density * s * own_rest;
                if (gain < best_gain) {
                    best_gain = gain;
                    best = empty_ids.back();
                }
            }
            for (Index c : touched) link[c] = 0.0;

            if (best != own) {
                if (!empty_ids.empty() && best == empty_ids.back()) empty_ids.pop_back();
                community_size[own] -= s;
                community_size[best] += s;
                community[v] = best;
                if (community_size[own] == 0.0) empty_ids.push_back(own);
                moved_in_sweep = true;
                result.moved = true;
            }
        }
        if (!moved_in_sweep) break;
    }

    std::vector<Index> compact(n, std::numeric_limits<Index>::max());
    for (std::size_t v = 0; v < n; ++v) {
        Index& id = compact[community[v]];
        if (id == std::numeric_limits<Index>::max()) id = static_cast<Index>(result.count++);
        community[v] = id;
    }
    result.community = std::move(community);
    return result;
}

LevelGraph aggregate(const LevelGraph& g, std::span<const Index> community, std::size_t count) {
    std::vector<std::vector<Index>> members(count);
    for (std::size_t v = 0; v < g.size(); ++v) members[community[v]].push_back(static_cast<Index>(v));

    LevelGraph next;
    next.node_size.assign(count, 0.0);
    next.offsets.reserve(count + 1);
    next.offsets.push_back(0);
    std::vector<double> acc(count, 0.0);
    std::vector<Index> touched;
    for (std::size_t c = 0; c < count; ++c) {
        touched.clear();
        for (Index v : members[c]) {
            next.node_size[c] += g.node_size[v];
            for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                const Index d = community[g.neighbors[e]];
                if (d == c) continue;
                if (acc[d] == 0.0) touched.push_back(d);
                acc[d] += g.weights[e];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (Index d : touched) {
            next.neighbors.push_back(d);
            next.weights.push_back(acc[d]);
            acc[d] = 0.0;
        }
        next.offsets.push_back(next.neighbors.size());
    }
    return next;
}

}  // namespace

DetectionResult detect_communities(const CouplingGraph& graph, std::uint64_t seed, std::size_t max_passes) {
    const std::size_t size = graph.size();
    DetectionResult result;
    result.seed = seed;
    if (size == 0) return result;

    const double squared = static_cast<double>(size) * static_cast<double>(size);
    const double floor = 0.5 / squared;
    result.density = std::clamp(mean_edge_density(graph), floor, 1.0 - floor);

    Rng rng(seed);
    std::vector<Index> labels(size);
    std::iota(labels.begin(), labels.end(), Index{0});
    LevelGraph level = base_level(graph);
    while (result.passes < max_passes) {
        LocalMoveOutcome outcome = local_moves(level, result.density, rng, max_passes - result.passes);
        result.passes += outcome.sweeps;
        for (Index& label : labels) label = outcome.community[label];
        if (!outcome.moved || outcome.count == level.size() || outcome.count == 1) break;
        level = aggregate(level, outcome.community, outcome.count);
    }

    std::vector<std::vector<Index>> communities;
    {
        Index max_label = 0;
        for (Index l : labels) max_label = std::max(max_label, l);
        communities.resize(max_label + 1);
        for (std::size_t v = 0; v < size; ++v) communities[labels[v]].push_back(static_cast<Index>(v));
        std::erase_if(communities, [](const auto& c) { return c.empty(); });
    }
    std::sort(communities.begin(), communities.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    result.partition = BlockPartition::from_communities(size, std::move(communities));
    const auto final_labels = result.partition.labels();
    result.objective = modularity_objective(graph, final_labels, result.density);
    return result;
}

CouplingGraph permute_graph(const CouplingGraph& graph, std::span<const Index> order) {
    const std::size_t size = graph.size();
    if (order.size() != size) {
        throw ValidationError(fmt::format("permutation of length {} for a graph with {} nodes", order.size(), size));
    }
    const auto position = inverse_permutation(order);
    std::vector<std::vector<Index>> rows(size);
    for (std::size_t k = 0; k < size; ++k) {
        auto& row = rows[k];
        row.reserve(graph.degree(order[k]));
        graph.for_each_nonzero(order[k], [&](Index l) { row.push_back(position[l]); });
    }
    return CouplingGraph::from_nonzeros(size, std::move(rows));
}

CouplingGraph permute_graph(const CouplingGraph& graph, const BlockPartition& partition) {
    return permute_graph(graph, partition.order());
}

std::vector<Index> inverse_permutation(std::span<const Index> order) {
    std::vector<Index> position(order.size(), std::numeric_limits<Index>::max());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (order[k] >= order.size() || position[order[k]] != std::numeric_limits<Index>::max()) {
            throw ValidationError("sequence is not a permutation");
        }
        position[order[k]] = static_cast<Index>(k);
    }
    return position;
}

namespace {

void require_order(std::size_t size, std::span<const Index> order) {
    if (size != order.size()) {
        throw DimensionError(fmt::format("permutation of length {} applied to {} values", order.size(), size));
    }
}

}  // namespace

PhaseState permute_state(const PhaseState& state, std::span<const Index> order) {
    require_order(state.size(), order);
    PhaseState out{std::vector<double>(state.size()), state.time};
    for (std::size_t k = 0; k < order.size(); ++k) out.phases[k] = state.phases[order[k]];
    return out;
}

NaturalFrequencies permute_frequencies(const NaturalFrequencies& freq, std::span<const Index> order) {
    require_order(freq.size(), order);
    NaturalFrequencies out{std::vector<double>(freq.size())};
    for (std::size_t k = 0; k < order.size(); ++k) out.omega[k] = freq.omega[order[k]];
    return out;
}

PhaseState unpermute_state(const PhaseState& state, std::span<const Index> order) {
    require_order(state.size(), order);
    PhaseState out{std::vector<double>(state.size()), state.time};
    for (std::size_t k = 0; k < order.size(); ++k) out.phases[order[k]] = state.phases[k];
    return out;
}

Trajectory unpermute_trajectory(const Trajectory& traj, std::span<const Index> order) {
    Trajectory out;
    out.sample_times = traj.sample_times;
    out.diagnostics = traj.diagnostics;
    out.states.reserve(traj.states.size());
    for (const auto& s : traj.states) out.states.push_back(unpermute_state(s, order));
    return out;
}

CouplingGraph block_indicator(const BlockPartition& partition) {
    const std::size_t size = partition.size();
    std::vector<std::vector<Index>> rows(size);
    Index start = 0;
    for (std::size_t c : partition.community_sizes()) {
        std::vector<Index> block(c);
        std::iota(block.begin(), block.end(), start);
        for (std::size_t k = 0; k < c; ++k) rows[start + k] = block;
        start += static_cast<Index>(c);
    }
    return CouplingGraph::from_nonzeros(size, std::move(rows));
}

std::size_t mismatch_count(const CouplingGraph& a, const CouplingGraph& b) {
    if (a.size() != b.size()) {
        throw DimensionError(fmt::format("matrices of size {} and {} cannot be compared", a.size(), b.size()));
    }
    std::size_t differ = 0;
    for (std::size_t m = 0; m < a.size(); ++m) {
        const auto x = a.nonzero_columns(m);
        const auto y = b.nonzero_columns(m);
        std::size_t common = 0;
        auto i = x.begin();
        auto j = y.begin();
        while (i != x.end() && j != y.end()) {
            if (*i < *j) {
                ++i;
            } else if (*j < *i) {
                ++j;
            } else {
                ++common;
                ++i;
                ++j;
            }
        }
        differ += x.size() + y.size() - 2 * common;
    }
    return differ;
}

long long detection_score(const CouplingGraph& adjacency, const CouplingGraph& planted_blocks,
                          const CouplingGraph& detected_adjacency, const CouplingGraph& detected_blocks) {
    const std::size_t size = adjacency.size();
    if (planted_blocks.size() != size || detected_adjacency.size() != size || detected_blocks.size() != size) {
        throw DimensionError("detection score needs four matrices of equal size");
    }
    return static_cast<long long>(mismatch_count(detected_adjacency, detected_blocks)) -
           static_cast<long long>(mismatch_count(adjacency, planted_blocks));
}

}  // namespace kuramoto
