#pragma once

#include <optional>
#include <vector>

#include "kuramoto/community.hpp"
#include "kuramoto/config.hpp"
#include "kuramoto/integrators.hpp"

namespace kuramoto {

/// Everything a run needs, in the original oscillator labelling.
struct Instance {
    std::optional<CouplingGraph> graph;
    std::optional<CouplingGraph> planted_blocks;  // planted generator only, same labelling as graph
    NaturalFrequencies freq;
    PhaseState initial;
};

/// Generates or loads the coupling graph, frequencies and initial phases.
/// Generated graphs are seeded from config.seed, initial random phases from
/// config.seed + 1 and the shuffle permutation from config.seed + 2.
[[nodiscard]] Instance build_instance(const RunConfig& config);

struct SimulationResult {
    Trajectory trajectory;  // original labelling
    EvalCounters counters;
    AdaptiveStats stats;
    std::optional<DetectionResult> detection;
    double detection_seconds = 0.0;
    double setup_seconds = 0.0;  // plan construction and reordering
    double integration_seconds = 0.0;
};

/// Integrates the instance. With detection enabled the graph is reordered by
/// the detected communities, integrated there and the trajectory is mapped
/// back to the original labelling.
[[nodiscard]] SimulationResult run_simulation(const RunConfig& config, const Instance& instance);

}  // namespace kuramoto
