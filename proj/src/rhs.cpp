#include "kuramoto/rhs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "kuramoto/diagnostics.hpp"
#include "kuramoto/error.hpp"
#include "kuramoto/parallel.hpp"

namespace kuramoto {

std::string_view to_string(RhsStrategy strategy) {
    switch (strategy) {
        case RhsStrategy::classical_naive: return "classical_naive";
        case RhsStrategy::classical_order_param: return "classical_order_param";
        case RhsStrategy::graph_naive: return "graph_naive";
        case RhsStrategy::graph_matvec: return "graph_matvec";
        case RhsStrategy::graph_block_hybrid: return "graph_block_hybrid";
    }
    return "unknown";
}

RhsStrategy parse_strategy(std::string_view name) {
    for (auto s : {RhsStrategy::classical_naive, RhsStrategy::classical_order_param, RhsStrategy::graph_naive,
                   RhsStrategy::graph_matvec, RhsStrategy::graph_block_hybrid}) {
        if (to_string(s) == name) return s;
    }
    throw ConfigError(fmt::format("unknown rhs strategy '{}'", name));
}

std::string_view to_string(ScalingMode scaling) {
    return scaling == ScalingMode::uniform ? "uniform" : "non_uniform";
}

ScalingMode parse_scaling(std::string_view name) {
    if (name == "uniform") return ScalingMode::uniform;
    if (name == "non_uniform" || name == "non-uniform") return ScalingMode::non_uniform;
    throw ConfigError(fmt::format("unknown scaling mode '{}'", name));
}

double row_scale(ScalingMode scaling, std::size_t size, std::size_t degree) noexcept {
    if (scaling == ScalingMode::uniform) return 1.0 / static_cast<double>(size);
    return degree == 0 ? 0.0 : 1.0 / static_cast<double>(degree);
}

std::uint64_t graph_fingerprint(const CouplingGraph& graph) {
    // FNV-1a over the size and degree sequence.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t x) {
        for (int b = 0; b < 8; ++b) {
            h ^= (x >> (8 * b)) & 0xffU;
            h *= 1099511628211ULL;
        }
    };
    mix(graph.size());
    mix(graph.ones());
    for (std::size_t m = 0; m < graph.size(); ++m) mix(graph.degree(m));
    return h;
}

BlockPlan plan_blocks(const CouplingGraph& graph, const BlockPartition& partition, ModePolicy policy) {
    const std::size_t size = graph.size();
    if (partition.size() != size) {
        throw ValidationError(
            fmt::format("partition covers {} indices but the graph has {} oscillators", partition.size(), size));
    }
    BlockPlan plan;
    plan.fingerprint_ = graph_fingerprint(graph);
    plan.order_.assign(partition.order().begin(), partition.order().end());
    const auto position = partition.position();

    Index start = 0;
    std::vector<Index> block_of(size);
    for (const auto& community : partition.communities()) {
        const Index end = start + static_cast<Index>(community.size());
        for (Index k = start; k < end; ++k) block_of[k] = static_cast<Index>(plan.blocks_.size());
        plan.blocks_.push_back({start, end});
        start = end;
    }
    const std::size_t nb = plan.blocks_.size();

    // Reordered nonzero columns of every reordered row.
    std::vector<std::vector<Index>> rows(size);
    plan.degrees_.resize(size);
    plan.ones_.assign(nb * nb, 0);
    for (std::size_t k = 0; k < size; ++k) {
        const std::size_t original = plan.order_[k];
        plan.degrees_[k] = graph.degree(original);
        auto& cols = rows[k];
        cols.reserve(graph.degree(original));
        graph.for_each_nonzero(original, [&](Index l) { cols.push_back(position[l]); });
        std::sort(cols.begin(), cols.end());
        const std::size_t rb = block_of[k];
        for (Index c : cols) ++plan.ones_[rb * nb + block_of[c]];
    }

    plan.modes_.resize(nb * nb);
    plan.needs_sums_.assign(nb, false);
    for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            BlockMode mode = BlockMode::nonzero_sum;
            if (policy == ModePolicy::precompute_subtract) {
                mode = BlockMode::precompute_subtract;
            } else if (policy == ModePolicy::automatic) {
                const std::size_t ones = plan.ones_[i * nb + j];
                const std::size_t zeros = plan.blocks_[i].size() * plan.blocks_[j].size() - ones;
                if (ones > zeros) mode = BlockMode::precompute_subtract;
            }
            plan.modes_[i * nb + j] = mode;
            if (mode == BlockMode::precompute_subtract) plan.needs_sums_[j] = true;
        }
    }

    plan.offsets_.reserve(size * nb + 1);
    plan.offsets_.push_back(0);
    for (std::size_t k = 0; k < size; ++k) {
        const auto& cols = rows[k];
        const std::size_t rb = block_of[k];
        auto it = cols.begin();
        for (std::size_t j = 0; j < nb; ++j) {
            const BlockRange range = plan.blocks_[j];
            auto block_end = std::lower_bound(it, cols.end(), range.end);
            if (plan.modes_[rb * nb + j] == BlockMode::nonzero_sum) {
                plan.indices_.insert(plan.indices_.end(), it, block_end);
            } else {
                auto one = it;
                for (Index l = range.begin; l < range.end; ++l) {
                    if (one != block_end && *one == l) {
                        ++one;
                        continue;
                    }
                    plan.indices_.push_back(l);
                }
            }
            plan.offsets_.push_back(plan.indices_.size());
            it = block_end;
        }
        std::vector<Index>().swap(rows[k]);
    }
    return plan;
}

namespace {

void require_length(std::size_t expected, std::size_t actual, const char* what) {
    if (expected != actual) {
        throw DimensionError(fmt::format("{} has length {}, expected {}", what, actual, expected));
    }
}

void check_spans(std::span<const double> theta, std::span<const double> omega, std::span<double> out) {
    require_length(theta.size(), omega.size(), "frequency vector");
    require_length(theta.size(), out.size(), "output vector");
}

void fill_tables(std::span<const double> theta, std::vector<double>& sines, std::vector<double>& cosines) {
    sines.resize(theta.size());
    cosines.resize(theta.size());
    for (std::size_t m = 0; m < theta.size(); ++m) {
        sines[m] = std::sin(theta[m]);
        cosines[m] = std::cos(theta[m]);
    }
}

}  // namespace

void rhs_classical_naive(std::span<const double> theta, std::span<const double> omega, double coupling,
                         std::span<double> out, EvalCounters& counters) {
    check_spans(theta, omega, out);
    const std::size_t size = theta.size();
    const double factor = coupling / static_cast<double>(size);
    parallel_for_rows(size, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            double sum = 0.0;
            for (std::size_t l = 0; l < size; ++l) {
                if (l != m) sum += std::sin(theta[l] - theta[m]);
            }
            out[m] = omega[m] + factor * sum;
        }
    }, 256);
    const std::uint64_t evals = static_cast<std::uint64_t>(size) * (size - 1);
    counters.sin_evals += evals;
    counters.trig_calls += evals;
    counters.terms += evals;
    ++counters.evaluations;
}

void rhs_classical_order_param(std::span<const double> theta, std::span<const double> omega, double coupling,
                               std::span<double> out, EvalCounters& counters) {
    check_spans(theta, omega, out);
    const std::size_t size = theta.size();
    std::vector<double> sines;
    std::vector<double> cosines;
    fill_tables(theta, sines, cosines);
    double s = 0.0;
    double c = 0.0;
    for (std::size_t m = 0; m < size; ++m) {
        s += sines[m];
        c += cosines[m];
    }
    s /= static_cast<double>(size);
    c /= static_cast<double>(size);
    for (std::size_t m = 0; m < size; ++m) {
        out[m] = omega[m] + coupling * (s * cosines[m] - c * sines[m]);
    }
    // Table convention: sin and cos of every phase, once for the order
    // parameters and once for the combination step.
    counters.sin_evals += 2 * size;
    counters.cos_evals += 2 * size;
    counters.trig_calls += 2 * size;
    counters.terms += size;
    ++counters.evaluations;
}

void rhs_graph_naive(std::span<const double> theta, std::span<const double> omega, double coupling,
                     const CouplingGraph& graph, ScalingMode scaling, std::span<double> out, EvalCounters& counters) {
    check_spans(theta, omega, out);
    require_length(graph.size(), theta.size(), "phase vector");
    const std::size_t size = theta.size();
    parallel_for_rows(size, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            const double scale = row_scale(scaling, size, graph.degree(m));
            if (scale == 0.0) {
                out[m] = omega[m];
                continue;
            }
            const double own = theta[m];
            double sum = 0.0;
            graph.for_each_nonzero(m, [&](Index l) { sum += std::sin(theta[l] - own); });
            out[m] = omega[m] + (coupling * scale) * sum;
        }
    }, 64);
    const std::uint64_t evals = graph.ones();
    counters.sin_evals += evals;
    counters.trig_calls += evals;
    counters.terms += evals;
    ++counters.evaluations;
}

void scaled_adjacency_products(const CouplingGraph& graph, ScalingMode scaling, std::span<const double> sines,
                               std::span<const double> cosines, std::span<double> u, std::span<double> v) {
    const std::size_t size = graph.size();
    double sin_total = 0.0;
    double cos_total = 0.0;
    bool totals_ready = false;
    for (std::size_t m = 0; m < size && !totals_ready; ++m) {
        if (graph.row(m).storage == RowStorage::zero_columns) {
            for (std::size_t l = 0; l < size; ++l) {
                sin_total += sines[l];
                cos_total += cosines[l];
            }
            totals_ready = true;
        }
    }
    parallel_for_rows(size, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            const GraphRow& row = graph.row(m);
            const double scale = row_scale(scaling, size, row.degree);
            double su = 0.0;
            double sv = 0.0;
            for (Index l : row.columns) {
                su += sines[l];
                sv += cosines[l];
            }
            if (row.storage == RowStorage::zero_columns) {
                su = sin_total - su;
                sv = cos_total - sv;
            }
            u[m] = scale * su;
            v[m] = scale * sv;
        }
    });
}

void rhs_graph_matvec(std::span<const double> theta, std::span<const double> omega, double coupling,
                      const CouplingGraph& graph, ScalingMode scaling, std::span<double> out,
                      EvalCounters& counters) {
    check_spans(theta, omega, out);
    require_length(graph.size(), theta.size(), "phase vector");
    const std::size_t size = theta.size();
    std::vector<double> sines;
    std::vector<double> cosines;
    fill_tables(theta, sines, cosines);
    std::vector<double> u(size);
    std::vector<double> v(size);
    scaled_adjacency_products(graph, scaling, sines, cosines, u, v);
    for (std::size_t m = 0; m < size; ++m) {
        out[m] = omega[m] + coupling * (u[m] * cosines[m] - v[m] * sines[m]);
    }
    std::uint64_t terms = 0;
    bool any_zero_rows = false;
    for (const GraphRow& row : graph.rows()) {
        terms += row.columns.size();
        any_zero_rows = any_zero_rows || row.storage == RowStorage::zero_columns;
    }
    counters.sin_evals += size;
    counters.cos_evals += size;
    counters.trig_calls += 2 * size;
    counters.terms += terms + (any_zero_rows ? size : 0);
    ++counters.evaluations;
}

void scaled_adjacency_products(const BlockPlan& plan, ScalingMode scaling, std::span<const double> sines,
                               std::span<const double> cosines, std::span<double> u, std::span<double> v) {
    const std::size_t size = plan.size();
    const std::size_t nb = plan.block_count();
    const auto blocks = plan.blocks();
    std::vector<double> block_sin(nb, 0.0);
    std::vector<double> block_cos(nb, 0.0);
    for (std::size_t j = 0; j < nb; ++j) {
        if (!plan.column_sums_needed(j)) continue;
        for (Index l = blocks[j].begin; l < blocks[j].end; ++l) {
            block_sin[j] += sines[l];
            block_cos[j] += cosines[l];
        }
    }
    for (std::size_t i = 0; i < nb; ++i) {
        parallel_for_rows(blocks[i].size(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = blocks[i].begin + begin; k < blocks[i].begin + end; ++k) {
                const double scale = row_scale(scaling, size, plan.row_degree(k));
                double su = 0.0;
                double sv = 0.0;
                for (std::size_t j = 0; j < nb; ++j) {
                    double bu = 0.0;
                    double bv = 0.0;
                    for (Index l : plan.row_list(k, j)) {
                        bu += sines[l];
                        bv += cosines[l];
                    }
                    if (plan.mode(i, j) == BlockMode::precompute_subtract) {
                        bu = block_sin[j] - bu;
                        bv = block_cos[j] - bv;
                    }
                    su += bu;
                    sv += bv;
                }
                u[k] = scale * su;
                v[k] = scale * sv;
            }
        });
    }
}

void rhs_graph_block_hybrid(std::span<const double> theta, std::span<const double> omega, double coupling,
                            const CouplingGraph& graph, ScalingMode scaling, const BlockPlan& plan,
                            std::span<double> out, EvalCounters& counters) {
    check_spans(theta, omega, out);
    if (plan.size() != graph.size() || plan.source_fingerprint() != graph_fingerprint(graph)) {
        throw ValidationError("block plan was not built for this graph");
    }
    if (theta.size() != plan.size()) {
        throw DimensionError(
            fmt::format("phase vector has length {} but the plan orders {} oscillators", theta.size(), plan.size()));
    }
    const std::size_t size = theta.size();
    std::vector<double> sines;
    std::vector<double> cosines;
    fill_tables(theta, sines, cosines);
    std::vector<double> u(size);
    std::vector<double> v(size);
    scaled_adjacency_products(plan, scaling, sines, cosines, u, v);
    for (std::size_t m = 0; m < size; ++m) {
        out[m] = omega[m] + coupling * (u[m] * cosines[m] - v[m] * sines[m]);
    }
    std::uint64_t terms = plan.stored_indices();
    for (std::size_t j = 0; j < plan.block_count(); ++j) {
        if (plan.column_sums_needed(j)) terms += plan.blocks()[j].size();
    }
    counters.sin_evals += size;
    counters.cos_evals += size;
    counters.trig_calls += 2 * size;
    counters.terms += terms;
    ++counters.evaluations;
}

std::vector<double> rhs_classical_naive(const PhaseState& state, const NaturalFrequencies& freq, double coupling,
                                        EvalCounters& counters) {
    std::vector<double> out(state.size());
    rhs_classical_naive(state.phases, freq.omega, coupling, out, counters);
    return out;
}

std::vector<double> rhs_classical_order_param(const PhaseState& state, const NaturalFrequencies& freq,
                                              double coupling, EvalCounters& counters) {
    std::vector<double> out(state.size());
    rhs_classical_order_param(state.phases, freq.omega, coupling, out, counters);
    return out;
}

std::vector<double> rhs_graph_naive(const PhaseState& state, const NaturalFrequencies& freq, double coupling,
                                    const CouplingGraph& graph, ScalingMode scaling, EvalCounters& counters) {
    std::vector<double> out(state.size());
    rhs_graph_naive(state.phases, freq.omega, coupling, graph, scaling, out, counters);
    return out;
}

std::vector<double> rhs_graph_matvec(const PhaseState& state, const NaturalFrequencies& freq, double coupling,
                                     const CouplingGraph& graph, ScalingMode scaling, EvalCounters& counters) {
    std::vector<double> out(state.size());
    rhs_graph_matvec(state.phases, freq.omega, coupling, graph, scaling, out, counters);
    return out;
}

std::vector<double> rhs_graph_block_hybrid(const PhaseState& state, const NaturalFrequencies& freq, double coupling,
                                           const CouplingGraph& graph, ScalingMode scaling, const BlockPlan& plan,
                                           EvalCounters& counters) {
    std::vector<double> out(state.size());
    rhs_graph_block_hybrid(state.phases, freq.omega, coupling, graph, scaling, plan, out, counters);
    return out;
}

double scaled_adjacency_total(const CouplingGraph& graph, ScalingMode scaling) {
    double total = 0.0;
    for (std::size_t m = 0; m < graph.size(); ++m) {
        total += row_scale(scaling, graph.size(), graph.degree(m)) * static_cast<double>(graph.degree(m));
    }
    return total;
}

RhsEvaluator RhsEvaluator::classical(RhsStrategy strategy, NaturalFrequencies freq, double coupling) {
    if (is_graph_strategy(strategy)) {
        throw ConfigError(fmt::format("strategy {} needs a coupling graph", to_string(strategy)));
    }
    RhsEvaluator e;
    e.strategy_ = strategy;
    e.freq_ = std::move(freq);
    e.coupling_ = coupling;
    e.conserves_ = true;
    return e;
}

RhsEvaluator RhsEvaluator::graph(RhsStrategy strategy, NaturalFrequencies freq, double coupling,
                                 std::shared_ptr<const CouplingGraph> graph, ScalingMode scaling,
                                 std::shared_ptr<const BlockPlan> plan) {
    if (!is_graph_strategy(strategy)) {
        throw ConfigError(fmt::format("strategy {} does not take a coupling graph", to_string(strategy)));
    }
    if (!graph) throw ConfigError("graph strategy without a coupling graph");
    if (graph->size() != freq.size()) {
        throw DimensionError(
            fmt::format("graph has {} oscillators but {} frequencies were given", graph->size(), freq.size()));
    }
    if (strategy == RhsStrategy::graph_block_hybrid) {
        if (!plan) throw ConfigError("block-hybrid strategy without a block plan");
        if (plan->size() != graph->size() || plan->source_fingerprint() != graph_fingerprint(*graph)) {
            throw ValidationError("block plan was not built for this graph");
        }
    }
    RhsEvaluator e;
    e.strategy_ = strategy;
    e.freq_ = std::move(freq);
    e.coupling_ = coupling;
    e.scaling_ = scaling;
    e.adjacency_total_ = scaled_adjacency_total(*graph, scaling);
    e.conserves_ = scaling == ScalingMode::uniform && is_symmetric(*graph);
    e.graph_ = std::move(graph);
    e.plan_ = std::move(plan);
    return e;
}

void RhsEvaluator::evaluate(std::span<const double> theta, std::span<double> out) {
    const auto start = std::chrono::steady_clock::now();
    switch (strategy_) {
        case RhsStrategy::classical_naive:
            rhs_classical_naive(theta, freq_.omega, coupling_, out, counters_);
            break;
        case RhsStrategy::classical_order_param:
            rhs_classical_order_param(theta, freq_.omega, coupling_, out, counters_);
            break;
        case RhsStrategy::graph_naive:
            rhs_graph_naive(theta, freq_.omega, coupling_, *graph_, scaling_, out, counters_);
            break;
        case RhsStrategy::graph_matvec:
            rhs_graph_matvec(theta, freq_.omega, coupling_, *graph_, scaling_, out, counters_);
            break;
        case RhsStrategy::graph_block_hybrid:
            rhs_graph_block_hybrid(theta, freq_.omega, coupling_, *graph_, scaling_, *plan_, out, counters_);
            break;
    }
    counters_.wall_time += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> RhsEvaluator::evaluate(std::span<const double> theta) {
    std::vector<double> out(theta.size());
    evaluate(theta, out);
    return out;
}

double RhsEvaluator::potential(std::span<const double> theta) const {
    require_length(freq_.size(), theta.size(), "phase vector");
    if (!graph_) return potential_classical(theta, freq_.omega, coupling_);
    if (!plan_) return potential_graph(theta, freq_.omega, coupling_, *graph_, scaling_, adjacency_total_);

    std::vector<double> sines;
    std::vector<double> cosines;
    fill_tables(theta, sines, cosines);
    std::vector<double> u(theta.size());
    std::vector<double> v(theta.size());
    scaled_adjacency_products(*plan_, scaling_, sines, cosines, u, v);
    double drift = 0.0;
    double interaction = 0.0;
    for (std::size_t m = 0; m < theta.size(); ++m) {
        drift += freq_.omega[m] * theta[m];
        interaction += cosines[m] * v[m] + sines[m] * u[m];
    }
    return -drift + 0.5 * coupling_ * (adjacency_total_ - interaction);
}

}  // namespace kuramoto
