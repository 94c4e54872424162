#include "kuramoto/config.hpp"

#include <fmt/format.h>

#include "kuramoto/error.hpp"

namespace kuramoto {

namespace {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::classical ? "classical" : "graph"; }

ModelKind parse_model(std::string_view name) {
    if (name == "classical") return ModelKind::classical;
    if (name == "graph") return ModelKind::graph;
    throw ConfigError(fmt::format("unknown model '{}'", name));
}

std::string_view to_string(AdjacencyKind kind) {
    switch (kind) {
        case AdjacencyKind::none: return "none";
        case AdjacencyKind::file: return "file";
        case AdjacencyKind::threshold: return "threshold";
        case AdjacencyKind::planted: return "planted";
    }
    return "none";
}

AdjacencyKind parse_adjacency(std::string_view name) {
    for (auto k : {AdjacencyKind::none, AdjacencyKind::file, AdjacencyKind::threshold, AdjacencyKind::planted}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError(fmt::format("unknown adjacency kind '{}'", name));
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& target) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
    }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known, const char* where) {
    for (const auto& item : j.items()) {
        bool found = false;
        for (const char* k : known) found = found || item.key() == k;
        if (!found) throw ConfigError(fmt::format("unknown key '{}' in {}", item.key(), where));
    }
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j, RunConfig c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"model", "M", "K", "omega0", "omega_file", "scaling", "strategy", "integrator", "adaptive",
                    "controller", "step", "fp_tol", "fp_max_iters", "T", "samples", "seed", "random_initial",
                    "adjacency", "detect", "include_phases"},
                   "config");
    std::string text;
    if (j.contains("model")) {
        read(j, "model", text);
        c.model = parse_model(text);
    }
    read(j, "M", c.size);
    read(j, "K", c.coupling);
    read(j, "omega0", c.omega0);
    read(j, "omega_file", c.omega_file);
    if (j.contains("scaling")) {
        read(j, "scaling", text);
        c.scaling = parse_scaling(text);
    }
    if (j.contains("strategy")) {
        read(j, "strategy", text);
        c.strategy = parse_strategy(text);
    }
    if (j.contains("integrator")) {
        read(j, "integrator", text);
        c.integrator = parse_step_method(text);
    }
    read(j, "adaptive", c.adaptive);
    if (j.contains("controller")) {
        const auto& ctrl = j.at("controller");
        if (!ctrl.is_object()) throw ConfigError("'controller' must be an object");
        reject_unknown(ctrl, {"abs_tol", "rel_tol", "h_init", "h_min", "h_max", "safety"}, "controller");
        read(ctrl, "abs_tol", c.controller.abs_tol);
        read(ctrl, "rel_tol", c.controller.rel_tol);
        read(ctrl, "h_init", c.controller.h_init);
        read(ctrl, "h_min", c.controller.h_min);
        read(ctrl, "h_max", c.controller.h_max);
        read(ctrl, "safety", c.controller.safety);
    }
    read(j, "step", c.step);
    read(j, "fp_tol", c.fp_tol);
    read(j, "fp_max_iters", c.fp_max_iters);
    read(j, "T", c.t_end);
    read(j, "samples", c.samples);
    read(j, "seed", c.seed);
    read(j, "random_initial", c.random_initial);
    if (j.contains("adjacency")) {
        const auto& a = j.at("adjacency");
        if (!a.is_object()) throw ConfigError("'adjacency' must be an object");
        reject_unknown(a, {"kind", "path", "threshold", "s", "flip", "symmetric", "shuffle"}, "adjacency");
        if (a.contains("kind")) {
            read(a, "kind", text);
            c.adjacency.kind = parse_adjacency(text);
        }
        read(a, "path", c.adjacency.path);
        read(a, "threshold", c.adjacency.threshold);
        read(a, "s", c.adjacency.scale);
        read(a, "flip", c.adjacency.flip);
        read(a, "symmetric", c.adjacency.symmetric);
        read(a, "shuffle", c.adjacency.shuffle);
    }
    read(j, "detect", c.detect);
    read(j, "include_phases", c.include_phases);
    return c;
}

nlohmann::json to_json(const RunConfig& c) {
    return {
        {"model", to_string(c.model)},
        {"M", c.size},
        {"K", c.coupling},
        {"omega0", c.omega0},
        {"omega_file", c.omega_file},
        {"scaling", to_string(c.scaling)},
        {"strategy", to_string(c.strategy)},
        {"integrator", to_string(c.integrator)},
        {"adaptive", c.adaptive},
        {"controller",
         {{"abs_tol", c.controller.abs_tol},
          {"rel_tol", c.controller.rel_tol},
          {"h_init", c.controller.h_init},
          {"h_min", c.controller.h_min},
          {"h_max", c.controller.h_max},
          {"safety", c.controller.safety}}},
        {"step", c.step},
        {"fp_tol", c.fp_tol},
        {"fp_max_iters", c.fp_max_iters},
        {"T", c.t_end},
        {"samples", c.samples},
        {"seed", c.seed},
        {"random_initial", c.random_initial},
        {"adjacency",
         {{"kind", to_string(c.adjacency.kind)},
          {"path", c.adjacency.path},
          {"threshold", c.adjacency.threshold},
          {"s", c.adjacency.scale},
          {"flip", c.adjacency.flip},
          {"symmetric", c.adjacency.symmetric},
          {"shuffle", c.adjacency.shuffle}}},
        {"detect", c.detect},
        {"include_phases", c.include_phases},
    };
}

void validate(const RunConfig& c) {
    if (c.model == ModelKind::graph && c.adjacency.kind == AdjacencyKind::none) {
        throw ConfigError("graph model requires an adjacency source");
    }
    if (c.model == ModelKind::classical && c.adjacency.kind != AdjacencyKind::none) {
        throw ConfigError("classical model does not take an adjacency source");
    }
    if (c.model == ModelKind::classical && is_graph_strategy(c.strategy)) {
        throw ConfigError(fmt::format("strategy {} needs the graph model", to_string(c.strategy)));
    }
    if (c.model == ModelKind::graph && !is_graph_strategy(c.strategy)) {
        throw ConfigError(fmt::format("strategy {} is for the classical model", to_string(c.strategy)));
    }
    if (c.model == ModelKind::classical && c.detect) throw ConfigError("community detection needs the graph model");
    if (c.adjacency.kind == AdjacencyKind::file && c.adjacency.path.empty()) {
        throw ConfigError("adjacency file path is empty");
    }
    if (c.adjacency.kind == AdjacencyKind::planted && c.adjacency.scale != 0 && c.adjacency.scale * 10 != c.size) {
        throw ConfigError(fmt::format("planted scale s = {} implies M = {}, but M = {}", c.adjacency.scale,
                                      10 * c.adjacency.scale, c.size));
    }
    if (c.adjacency.flip < 0.0 || c.adjacency.flip > 1.0) throw ConfigError("flip probability must lie in [0, 1]");
    if (c.size < 2 && c.omega_file.empty()) throw ConfigError("at least two oscillators are required");
    if (!(c.t_end > 0.0)) throw ConfigError("end time must be positive");
    if (c.samples == 0) throw ConfigError("sample count must be positive");
    if (!(c.coupling >= 0.0)) throw ConfigError("coupling constant must be nonnegative");
    if (!c.adaptive && !(c.step > 0.0)) throw ConfigError("fixed step size must be positive");
    if (c.adaptive && c.integrator != StepMethod::rk4) {
        throw ConfigError("adaptive stepping is available for rk4 only");
    }
    if (c.adaptive) c.controller.validate();
    if (!(c.fp_tol > 0.0) || c.fp_max_iters < 1) throw ConfigError("fixed-point settings must be positive");
}

std::string config_hash(const RunConfig& config) {
    const std::string text = to_json(config).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return fmt::format("{:016x}", h);
}

}  // namespace kuramoto
