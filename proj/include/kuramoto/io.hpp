#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kuramoto/types.hpp"

namespace kuramoto {

inline constexpr const char* kVersion = "0.1.0";

/// Provenance written at the top of every output file.
struct OutputHeader {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> extra;
};

/// Fixed 17-significant-digit scientific formatting (round-trip exact).
[[nodiscard]] std::string format_real(double value);

/// Writes `%%MatrixMarket matrix coordinate pattern general` (or `symmetric`,
/// which stores the lower triangle only and requires a symmetric graph).
void write_matrix_market(std::ostream& out, const CouplingGraph& graph, const OutputHeader& header,
                         bool symmetric = false);
void write_matrix_market(const std::filesystem::path& path, const CouplingGraph& graph, const OutputHeader& header,
                         bool symmetric = false);

/// Reads coordinate pattern files, general or symmetric (both triangles are
/// filled). Value-carrying variants and dense arrays are rejected with IoError.
[[nodiscard]] CouplingGraph read_matrix_market(std::istream& in);
[[nodiscard]] CouplingGraph read_matrix_market(const std::filesystem::path& path);

/// Columns t, r, psi, V, conserved_residual, then theta_1..theta_M when
/// `include_phases` is set.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const OutputHeader& header, bool include_phases);

struct BenchRow {
    std::string strategy;
    std::size_t size = 0;
    double density = 0.0;
    std::uint64_t sin_evals = 0;
    std::uint64_t cos_evals = 0;
    double wall_seconds = 0.0;
    std::uint64_t trig_calls = 0;
    std::uint64_t terms = 0;
    std::string label;
};

/// Columns strategy, M, density, sin_evals, cos_evals, wall_seconds, then
/// trig_evals (table convention sum), trig_calls, terms and label.
void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows, const OutputHeader& header);

/// Writes the `# key: value` provenance block shared by the CSV writers.
void write_csv_header(std::ostream& out, const OutputHeader& header);

}  // namespace kuramoto
