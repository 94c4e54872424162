#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kuramoto/io.hpp"
#include "kuramoto/rhs.hpp"
#include "kuramoto/types.hpp"

namespace kuramoto {

/// Median wall time of `repetitions` calls of fn on the monotonic clock.
[[nodiscard]] double median_seconds(const std::function<void()>& fn, std::size_t repetitions = 5);

struct BenchSettings {
    std::size_t repetitions = 5;
    double coupling = 1.0;
    double omega0 = 1.0;
    ScalingMode scaling = ScalingMode::uniform;
};

/// One right-hand side evaluation per strategy at theta_m = 2 pi m / M:
/// classical naive and order parameter, followed by the matching potentials
/// (rows "potential_naive" and "potential_order_param", trig counts only).
[[nodiscard]] std::vector<BenchRow> bench_classical(std::size_t size, const BenchSettings& settings);

/// Graph strategies on one adjacency matrix, tagged with `label`:
///   graph_naive             double loop with a sine per stored one
///   graph_matvec            row traversal of the stored index lists
///   precompute_subtract     single block, total sums minus zero columns
///   graph_block_hybrid      per-block choice over `partition`
/// The partition row is skipped when `partition` is null.
[[nodiscard]] std::vector<BenchRow> bench_graph(const CouplingGraph& graph, const BlockPartition* partition,
                                                const BenchSettings& settings, const std::string& label);

/// Column-labelled table of formatted cells.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

[[nodiscard]] Table bench_table(const std::vector<BenchRow>& rows);
void write_table_csv(std::ostream& out, const Table& table, const OutputHeader& header);

struct FigureOptions {
    std::size_t repetitions = 5;
    std::uint64_t seed = 1;
    /// Smaller sizes so every figure finishes in seconds.
    bool quick = false;
};

/// Figure identifiers accepted by bench_figure: 1, 7-12, 15-18.
[[nodiscard]] std::vector<std::string> figure_names();

/// Regenerates the data behind one figure. Throws ConfigError for an unknown name.
[[nodiscard]] Table bench_figure(std::string_view name, const FigureOptions& options);

}  // namespace kuramoto
