#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "kuramoto/integrators.hpp"
#include "kuramoto/rhs.hpp"

namespace kuramoto {

enum class ModelKind { classical, graph };

enum class AdjacencyKind { none, file, threshold, planted };

/// Where the coupling graph of a graph model comes from.
struct AdjacencySource {
    AdjacencyKind kind = AdjacencyKind::none;
    std::string path;          // file
    double threshold = 0.5;    // threshold: A(m, l) = 1 when z > threshold
    std::size_t scale = 0;     // planted: block scale s (M = 10 s); 0 derives 4:3:2:1 sizes from M
    double flip = 0.0;         // planted: coefficient flip probability
    bool symmetric = false;    // planted: mirror flips
    bool shuffle = false;      // relabel the generated graph by a seeded random permutation
};

struct RunConfig {
    ModelKind model = ModelKind::classical;
    std::size_t size = 100;
    double coupling = 1.0;
    double omega0 = 0.0;
    std::string omega_file;
    ScalingMode scaling = ScalingMode::uniform;
    RhsStrategy strategy = RhsStrategy::classical_order_param;
    StepMethod integrator = StepMethod::rk4;
    bool adaptive = true;
    StepController controller;
    double step = 0.01;  // fixed-step integrators
    double fp_tol = 1e-12;
    int fp_max_iters = 50;
    double t_end = 10.0;
    std::size_t samples = 101;
    std::uint64_t seed = 1;
    bool random_initial = false;
    AdjacencySource adjacency;
    bool detect = false;
    bool include_phases = true;  // ignored above 1000 oscillators
};

/// Reads a config object; unknown keys are rejected. Throws ConfigError.
[[nodiscard]] RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
[[nodiscard]] nlohmann::json to_json(const RunConfig& config);

/// Cross-field consistency (graph model needs an adjacency source, classical
/// forbids one, strategy matches the model, ...). Throws ConfigError.
void validate(const RunConfig& config);

/// 16 hex digits of FNV-1a over the canonical JSON form.
[[nodiscard]] std::string config_hash(const RunConfig& config);

}  // namespace kuramoto
