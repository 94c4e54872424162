#include "kuramoto/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "kuramoto/error.hpp"

namespace kuramoto {

std::string format_real(double value) { return fmt::format("{:.16e}", value); }

namespace {

void write_provenance(std::ostream& out, const OutputHeader& header, const char* prefix) {
    out << prefix << " generator: kuramoto " << kVersion << '\n';
    out << prefix << " versions: fmt " << FMT_VERSION / 10000 << '.' << FMT_VERSION / 100 % 100 << '.'
        << FMT_VERSION % 100 << ", C++ " << __cplusplus << '\n';
    out << prefix << " config_hash: " << header.config_hash << '\n';
    out << prefix << " seed: " << header.seed << '\n';
    for (const auto& [key, value] : header.extra) out << prefix << ' ' << key << ": " << value << '\n';
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

void write_csv_header(std::ostream& out, const OutputHeader& header) { write_provenance(out, header, "#"); }

void write_matrix_market(std::ostream& out, const CouplingGraph& graph, const OutputHeader& header, bool symmetric) {
    if (symmetric && !is_symmetric(graph)) {
        throw ValidationError("symmetric Matrix Market output requested for an asymmetric graph");
    }
    out << "%%MatrixMarket matrix coordinate pattern " << (symmetric ? "symmetric" : "general") << '\n';
    write_provenance(out, header, "%");
    std::size_t entries = 0;
    for (std::size_t m = 0; m < graph.size(); ++m) {
        if (!symmetric) {
            entries += graph.degree(m);
        } else {
            graph.for_each_nonzero(m, [&](Index l) { entries += l <= m ? 1 : 0; });
        }
    }
    out << graph.size() << ' ' << graph.size() << ' ' << entries << '\n';
    for (std::size_t m = 0; m < graph.size(); ++m) {
        graph.for_each_nonzero(m, [&](Index l) {
            if (!symmetric || l <= m) out << m + 1 << ' ' << l + 1 << '\n';
        });
    }
}

void write_matrix_market(const std::filesystem::path& path, const CouplingGraph& graph, const OutputHeader& header,
                         bool symmetric) {
    std::ofstream out(path);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    write_matrix_market(out, graph, header, symmetric);
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

CouplingGraph read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty Matrix Market input");
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (lower(tag) != "%%matrixmarket" || lower(object) != "matrix") {
        throw IoError("missing '%%MatrixMarket matrix' banner");
    }
    if (lower(format) != "coordinate") {
        throw IoError(fmt::format("unsupported Matrix Market format '{}': only coordinate is accepted", format));
    }
    if (lower(field) != "pattern") {
        throw IoError(fmt::format("unsupported Matrix Market field '{}': only pattern adjacency is accepted", field));
    }
    const std::string sym = lower(symmetry);
    if (sym != "general" && sym != "symmetric") {
        throw IoError(fmt::format("unsupported Matrix Market symmetry '{}'", symmetry));
    }

    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '%') continue;
        break;
    }
    std::istringstream dims(line);
    long long rows = -1, cols = -1, entries = -1;
    if (!(dims >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0) {
        throw IoError(fmt::format("malformed Matrix Market size line '{}'", line));
    }
    if (rows != cols) throw DimensionError(fmt::format("adjacency matrix must be square, got {} x {}", rows, cols));

    const auto size = static_cast<std::size_t>(rows);
    std::vector<std::vector<Index>> adjacency(size);
    for (long long k = 0; k < entries; ++k) {
        if (!std::getline(in, line)) {
            throw IoError(fmt::format("Matrix Market file ends after {} of {} entries", k, entries));
        }
        std::istringstream entry(line);
        long long i = 0, j = 0;
        std::string extra;
        if (!(entry >> i >> j)) throw IoError(fmt::format("malformed Matrix Market entry '{}'", line));
        if (entry >> extra) throw IoError(fmt::format("pattern entry carries a value: '{}'", line));
        if (i < 1 || j < 1 || i > rows || j > cols) {
            throw IoError(fmt::format("entry ({}, {}) outside a {} x {} matrix", i, j, rows, cols));
        }
        adjacency[i - 1].push_back(static_cast<Index>(j - 1));
        if (sym == "symmetric" && i != j) adjacency[j - 1].push_back(static_cast<Index>(i - 1));
    }
    return CouplingGraph::from_nonzeros(size, std::move(adjacency));
}

CouplingGraph read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
    return read_matrix_market(in);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const OutputHeader& header, bool include_phases) {
    write_csv_header(out, header);
    out << "t,r,psi,V,conserved_residual";
    const std::size_t size = traj.states.empty() ? 0 : traj.states.front().size();
    if (include_phases) {
        for (std::size_t m = 1; m <= size; ++m) out << ",theta_" << m;
    }
    out << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& d = traj.diagnostics[i];
        out << format_real(traj.sample_times[i]) << ',' << format_real(d.r) << ',' << format_real(d.psi) << ','
            << format_real(d.potential) << ',' << format_real(d.conserved_residual);
        if (include_phases) {
            for (double theta : traj.states[i].phases) out << ',' << format_real(theta);
        }
        out << '\n';
    }
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows, const OutputHeader& header) {
    write_csv_header(out, header);
    out << "strategy,M,density,sin_evals,cos_evals,wall_seconds,trig_evals,trig_calls,terms,label\n";
    for (const auto& r : rows) {
        out << r.strategy << ',' << r.size << ',' << format_real(r.density) << ',' << r.sin_evals << ','
            << r.cos_evals << ',' << format_real(r.wall_seconds) << ',' << r.sin_evals + r.cos_evals << ','
            << r.trig_calls << ',' << r.terms << ',' << r.label << '\n';
    }
}

}  // namespace kuramoto
