#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kuramoto/types.hpp"

namespace kuramoto {

enum class RhsStrategy { classical_naive, classical_order_param, graph_naive, graph_matvec, graph_block_hybrid };

[[nodiscard]] std::string_view to_string(RhsStrategy strategy);
/// Accepts the names produced by to_string(); throws ConfigError otherwise.
[[nodiscard]] RhsStrategy parse_strategy(std::string_view name);
[[nodiscard]] constexpr bool is_graph_strategy(RhsStrategy s) noexcept {
    return s != RhsStrategy::classical_naive && s != RhsStrategy::classical_order_param;
}

[[nodiscard]] std::string_view to_string(ScalingMode scaling);
[[nodiscard]] ScalingMode parse_scaling(std::string_view name);

/// Row factor 1/M_m of the scaled adjacency matrix. Zero for an uncoupled
/// row under non-uniform scaling.
[[nodiscard]] double row_scale(ScalingMode scaling, std::size_t size, std::size_t degree) noexcept;

enum class BlockMode : std::uint8_t { nonzero_sum, precompute_subtract };

/// How plan_blocks picks a block's mode. `automatic` uses precomputed block
/// sums exactly when ones outnumber zeros in the block.
enum class ModePolicy { automatic, nonzero_sum, precompute_subtract };

struct BlockRange {
    Index begin = 0;
    Index end = 0;  // exclusive

    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
};

/// Block layout of an adjacency matrix after reordering by a partition.
///
/// All positions refer to the reordered matrix: position k holds original
/// oscillator order()[k]. Row and column blocks coincide. Per row and column
/// block the plan stores the nonzero columns (nonzero_sum) or the zero
/// columns (precompute_subtract) as reordered positions.
class BlockPlan {
public:
    [[nodiscard]] std::size_t size() const noexcept { return order_.size(); }
    [[nodiscard]] std::size_t block_count() const noexcept { return blocks_.size(); }
    [[nodiscard]] std::span<const BlockRange> blocks() const noexcept { return blocks_; }
    [[nodiscard]] BlockMode mode(std::size_t row_block, std::size_t col_block) const {
        return modes_[row_block * blocks_.size() + col_block];
    }
    [[nodiscard]] std::span<const Index> order() const noexcept { return order_; }
    [[nodiscard]] std::size_t row_degree(std::size_t position) const { return degrees_[position]; }

    /// Stored column list of one row restricted to one column block.
    [[nodiscard]] std::span<const Index> row_list(std::size_t position, std::size_t col_block) const {
        const std::size_t k = position * blocks_.size() + col_block;
        return std::span<const Index>(indices_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
    }

    /// Ones and zeros inside the (row block, column block) submatrix.
    [[nodiscard]] std::size_t block_ones(std::size_t row_block, std::size_t col_block) const {
        return ones_[row_block * blocks_.size() + col_block];
    }
    [[nodiscard]] std::size_t block_zeros(std::size_t row_block, std::size_t col_block) const {
        return blocks_[row_block].size() * blocks_[col_block].size() - block_ones(row_block, col_block);
    }

    /// Total stored indices over all rows and blocks.
    [[nodiscard]] std::size_t stored_indices() const noexcept { return indices_.size(); }
    /// Whether column block j is in precompute_subtract mode for some row block.
    [[nodiscard]] bool column_sums_needed(std::size_t col_block) const { return needs_sums_[col_block]; }
    [[nodiscard]] std::uint64_t source_fingerprint() const noexcept { return fingerprint_; }

private:
    friend BlockPlan plan_blocks(const CouplingGraph&, const BlockPartition&, ModePolicy);

    std::vector<BlockRange> blocks_;
    std::vector<BlockMode> modes_;
    std::vector<std::size_t> ones_;
    std::vector<Index> order_;
    std::vector<std::size_t> degrees_;
    std::vector<std::size_t> offsets_;
    std::vector<Index> indices_;
    std::vector<bool> needs_sums_;
    std::uint64_t fingerprint_ = 0;
};

/// Cheap structural fingerprint (size, ones, degree sequence) used to match a
/// plan against the graph it was built from.
[[nodiscard]] std::uint64_t graph_fingerprint(const CouplingGraph& graph);

/// Builds the block plan for `graph` reordered by `partition`; one block per
/// community. Throws ValidationError if the partition does not cover the graph.
[[nodiscard]] BlockPlan plan_blocks(const CouplingGraph& graph, const BlockPartition& partition,
                                    ModePolicy policy = ModePolicy::automatic);

// Span kernels. `theta`, `omega` and `out` must all have length M; results are
// written to `out` and the counters are incremented with the exact work done.

void rhs_classical_naive(std::span<const double> theta, std::span<const double> omega, double coupling,
                         std::span<double> out, EvalCounters& counters);
void rhs_classical_order_param(std::span<const double> theta, std::span<const double> omega, double coupling,
                               std::span<double> out, EvalCounters& counters);
void rhs_graph_naive(std::span<const double> theta, std::span<const double> omega, double coupling,
                     const CouplingGraph& graph, ScalingMode scaling, std::span<double> out, EvalCounters& counters);
void rhs_graph_matvec(std::span<const double> theta, std::span<const double> omega, double coupling,
                      const CouplingGraph& graph, ScalingMode scaling, std::span<double> out,
                      EvalCounters& counters);
/// `theta`, `omega` and `out` are in the plan's reordered positions.
void rhs_graph_block_hybrid(std::span<const double> theta, std::span<const double> omega, double coupling,
                            const CouplingGraph& graph, ScalingMode scaling, const BlockPlan& plan,
                            std::span<double> out, EvalCounters& counters);

// State-level wrappers returning the derivative vector.

[[nodiscard]] std::vector<double> rhs_classical_naive(const PhaseState& state, const NaturalFrequencies& freq,
                                                      double coupling, EvalCounters& counters);
[[nodiscard]] std::vector<double> rhs_classical_order_param(const PhaseState& state, const NaturalFrequencies& freq,
                                                            double coupling, EvalCounters& counters);
[[nodiscard]] std::vector<double> rhs_graph_naive(const PhaseState& state, const NaturalFrequencies& freq,
                                                  double coupling, const CouplingGraph& graph, ScalingMode scaling,
                                                  EvalCounters& counters);
[[nodiscard]] std::vector<double> rhs_graph_matvec(const PhaseState& state, const NaturalFrequencies& freq,
                                                   double coupling, const CouplingGraph& graph, ScalingMode scaling,
                                                   EvalCounters& counters);
[[nodiscard]] std::vector<double> rhs_graph_block_hybrid(const PhaseState& state, const NaturalFrequencies& freq,
                                                         double coupling, const CouplingGraph& graph,
                                                         ScalingMode scaling, const BlockPlan& plan,
                                                         EvalCounters& counters);

/// u = (scaled A) sin, v = (scaled A) cos by row traversal of the stored
/// indices. `sines`/`cosines` are precomputed tables; no trig is evaluated.
void scaled_adjacency_products(const CouplingGraph& graph, ScalingMode scaling, std::span<const double> sines,
                               std::span<const double> cosines, std::span<double> u, std::span<double> v);
/// Same products through a block plan; all vectors in reordered positions.
void scaled_adjacency_products(const BlockPlan& plan, ScalingMode scaling, std::span<const double> sines,
                               std::span<const double> cosines, std::span<double> u, std::span<double> v);

/// Sum of all entries of the scaled adjacency matrix.
[[nodiscard]] double scaled_adjacency_total(const CouplingGraph& graph, ScalingMode scaling);

/// A right-hand side bound to its model data, as consumed by the integrators.
///
/// Block-hybrid evaluators work in the plan's reordered positions: the
/// frequencies passed at construction and every phase vector handed to
/// evaluate() must already be reordered (see permute_state / permute_frequencies).
class RhsEvaluator {
public:
    static RhsEvaluator classical(RhsStrategy strategy, NaturalFrequencies freq, double coupling);
    static RhsEvaluator graph(RhsStrategy strategy, NaturalFrequencies freq, double coupling,
                              std::shared_ptr<const CouplingGraph> graph, ScalingMode scaling,
                              std::shared_ptr<const BlockPlan> plan = nullptr);

    void evaluate(std::span<const double> theta, std::span<double> out);
    [[nodiscard]] std::vector<double> evaluate(std::span<const double> theta);

    /// Potential whose negative gradient is the right-hand side (exactly so for
    /// classical and symmetric uniformly scaled graph models).
    [[nodiscard]] double potential(std::span<const double> theta) const;

    /// True when the exact flow conserves sum(theta - omega t).
    [[nodiscard]] bool conserves_phase_sum() const noexcept { return conserves_; }

    [[nodiscard]] RhsStrategy strategy() const noexcept { return strategy_; }
    [[nodiscard]] std::size_t size() const noexcept { return freq_.size(); }
    [[nodiscard]] double coupling() const noexcept { return coupling_; }
    [[nodiscard]] const NaturalFrequencies& frequencies() const noexcept { return freq_; }
    [[nodiscard]] const EvalCounters& counters() const noexcept { return counters_; }
    void reset_counters() noexcept { counters_.reset(); }

private:
    RhsEvaluator() = default;

    RhsStrategy strategy_ = RhsStrategy::classical_order_param;
    NaturalFrequencies freq_;
    double coupling_ = 0.0;
    std::shared_ptr<const CouplingGraph> graph_;
    std::shared_ptr<const BlockPlan> plan_;
    ScalingMode scaling_ = ScalingMode::uniform;
    double adjacency_total_ = 0.0;
    bool conserves_ = true;
    EvalCounters counters_;
};

}  // namespace kuramoto
