#include "kuramoto/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>

#include <fmt/format.h>

#include "kuramoto/error.hpp"
#include "kuramoto/generators.hpp"
#include "kuramoto/io.hpp"

namespace kuramoto {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

NaturalFrequencies read_frequencies(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open frequency file '{}'", path));
    NaturalFrequencies freq;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            freq.omega.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw IoError(fmt::format("frequency file '{}': cannot parse '{}'", path, token));
        }
    }
    return freq;
}

}  // namespace

Instance build_instance(const RunConfig& config) {
    validate(config);
    Instance inst;
    const std::size_t size = config.size;
    const AdjacencySource& src = config.adjacency;
    switch (src.kind) {
        case AdjacencyKind::none: break;
        case AdjacencyKind::file: inst.graph = read_matrix_market(std::filesystem::path(src.path)); break;
        case AdjacencyKind::threshold: inst.graph = random_threshold_matrix(size, src.threshold, config.seed); break;
        case AdjacencyKind::planted: {
            const auto sizes = src.scale != 0 ? std::vector<std::size_t>{4 * src.scale, 3 * src.scale,
                                                                         2 * src.scale, src.scale}
                                              : planted_block_sizes(size);
            auto planted = planted_block_matrix(sizes, src.flip, config.seed, src.symmetric);
            inst.graph = std::move(planted.adjacency);
            inst.planted_blocks = std::move(planted.blocks);
            break;
        }
    }
    if (inst.graph && inst.graph->size() != size) {
        throw DimensionError(fmt::format("adjacency has {} oscillators but M = {}", inst.graph->size(), size));
    }
    if (inst.graph && src.shuffle) {
        const auto order = random_permutation(size, config.seed + 2);
        inst.graph = permute_graph(*inst.graph, order);
        if (inst.planted_blocks) inst.planted_blocks = permute_graph(*inst.planted_blocks, order);
    }

    if (!config.omega_file.empty()) {
        inst.freq = read_frequencies(config.omega_file);
        if (inst.freq.size() != size) {
            throw DimensionError(fmt::format("frequency file has {} values but M = {}", inst.freq.size(), size));
        }
    } else {
        inst.freq = default_frequencies(size, config.omega0);
    }
    inst.initial = config.random_initial ? random_phases(size, config.seed + 1) : default_initial_phases(size);
    return inst;
}

SimulationResult run_simulation(const RunConfig& config, const Instance& instance) {
    validate(config);
    SimulationResult result;

    std::vector<Index> order;
    std::optional<RhsEvaluator> rhs;
    PhaseState initial = instance.initial;
    if (config.model == ModelKind::classical) {
        rhs = RhsEvaluator::classical(config.strategy, instance.freq, config.coupling);
    } else {
        if (!instance.graph) throw ConfigError("graph model without a coupling graph");
        auto graph = std::make_shared<const CouplingGraph>(*instance.graph);
        std::shared_ptr<const BlockPlan> plan;
        NaturalFrequencies freq = instance.freq;

        if (config.detect) {
            const auto t0 = std::chrono::steady_clock::now();
            result.detection = detect_communities(*graph, config.seed);
            result.detection_seconds = seconds_since(t0);
        }
        const auto t1 = std::chrono::steady_clock::now();
        if (config.strategy == RhsStrategy::graph_block_hybrid) {
            const BlockPartition partition =
                result.detection ? result.detection->partition : BlockPartition::identity(graph->size());
            plan = std::make_shared<const BlockPlan>(plan_blocks(*graph, partition));
            order.assign(partition.order().begin(), partition.order().end());
        } else if (result.detection) {
            order.assign(result.detection->partition.order().begin(), result.detection->partition.order().end());
            graph = std::make_shared<const CouplingGraph>(permute_graph(*graph, order));
        }
        if (!order.empty()) {
            initial = permute_state(initial, order);
            freq = permute_frequencies(freq, order);
        }
        rhs = RhsEvaluator::graph(config.strategy, std::move(freq), config.coupling, graph, config.scaling, plan);
        result.setup_seconds = seconds_since(t1);
    }

    const auto t2 = std::chrono::steady_clock::now();
    const auto times = uniform_sample_times(initial.time, initial.time + config.t_end, config.samples);
    if (config.adaptive) {
        result.trajectory =
            integrate_adaptive(initial, *rhs, initial.time + config.t_end, config.controller, times, {}, &result.stats);
    } else {
        const auto steps = static_cast<std::size_t>(std::llround(config.t_end / config.step));
        if (steps == 0) throw ConfigError("end time is shorter than one step");
        const std::size_t every = std::max<std::size_t>(1, steps / std::max<std::size_t>(1, config.samples - 1));
        result.trajectory = integrate_fixed(initial, *rhs, config.integrator, config.step, steps, every, {},
                                            config.fp_tol, config.fp_max_iters);
        result.stats.accepted = steps;
        result.stats.last_h = config.step;
    }
    result.integration_seconds = seconds_since(t2);
    result.counters = rhs->counters();
    if (!order.empty()) result.trajectory = unpermute_trajectory(result.trajectory, order);
    return result;
}

}  // namespace kuramoto
