#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "kuramoto/bench.hpp"
#include "kuramoto/config.hpp"
#include "kuramoto/error.hpp"
#include "kuramoto/generators.hpp"
#include "kuramoto/io.hpp"
#include "kuramoto/pipeline.hpp"
#include "oracles.hpp"

using namespace kuramoto;

namespace {

CouplingGraph round_trip(const CouplingGraph& g, bool symmetric) {
    std::stringstream buffer;
    write_matrix_market(buffer, g, OutputHeader{"abc", 1, {}}, symmetric);
    return read_matrix_market(buffer);
}

CouplingGraph parse(const std::string& text) {
    std::istringstream in(text);
    return read_matrix_market(in);
}

std::string strip_column(const std::string& csv, const std::string& column) {
    std::istringstream in(csv);
    std::string line, out;
    int skip = -1;
    while (std::getline(in, line)) {
        if (line.rfind('#', 0) == 0) {
            out += line + '\n';
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (skip < 0) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i] == column) skip = static_cast<int>(i);
            }
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (static_cast<int>(i) != skip) out += cells[i] + ',';
        }
        out += '\n';
    }
    return out;
}

}  // namespace

TEST_SUITE("cli-io") {
    TEST_CASE("Matrix Market round trip") {
        CHECK(round_trip(CouplingGraph::complete(3), false) == CouplingGraph::complete(3));
        CHECK(round_trip(CouplingGraph::complete(3), true) == CouplingGraph::complete(3));
        CHECK(round_trip(CouplingGraph::empty(4), false) == CouplingGraph::empty(4));
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 5; ++trial) {
            const auto g = oracle::to_graph(oracle::random_dense(50, 0.2 * trial + 0.1, rng));
            CHECK(round_trip(g, false) == g);
            const auto s = oracle::to_graph(oracle::random_symmetric(50, 0.5, rng));
            CHECK(round_trip(s, true) == s);
        }
        CHECK_THROWS_AS((void)round_trip(CouplingGraph::from_nonzeros(2, {{1}, {}}), true), ValidationError);
    }

    TEST_CASE("symmetric files expand to both triangles") {
        const auto g = parse("%%MatrixMarket matrix coordinate pattern symmetric\n% comment\n3 3 3\n2 1\n3 3\n3 1\n");
        CHECK(g == CouplingGraph::from_nonzeros(3, {{1, 2}, {0}, {0, 2}}));
    }

    TEST_CASE("unsupported or broken files are rejected") {
        CHECK_THROWS_AS((void)parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 3.5\n"), IoError);
        CHECK_THROWS_AS((void)parse("%%MatrixMarket matrix coordinate complex general\n2 2 1\n1 1 3.5 1\n"),
                        IoError);
        CHECK_THROWS_AS((void)parse("%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n"), IoError);
        CHECK_THROWS_AS((void)parse("not a header\n"), IoError);
        CHECK_THROWS_AS((void)parse("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 1\n"), IoError);
        CHECK_THROWS_AS((void)parse("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n3 1\n"), IoError);
        CHECK_THROWS_AS((void)parse("%%MatrixMarket matrix coordinate pattern general\n2 3 1\n1 1\n"),
                        DimensionError);
        CHECK_THROWS_AS((void)read_matrix_market(std::filesystem::path("/nonexistent/file.mtx")), IoError);
    }

    TEST_CASE("trajectory CSV layout") {
        RunConfig c;
        c.size = 4;
        c.t_end = 1.0;
        c.samples = 3;
        const auto inst = build_instance(c);
        const auto result = run_simulation(c, inst);
        std::stringstream out;
        write_trajectory_csv(out, result.trajectory, OutputHeader{config_hash(c), c.seed, {}}, true);
        std::string line;
        std::vector<std::string> lines;
        while (std::getline(out, line)) lines.push_back(line);
        std::size_t header = 0;
        while (lines[header].rfind('#', 0) == 0) ++header;
        CHECK(header >= 4);
        CHECK(lines[header] == "t,r,psi,V,conserved_residual,theta_1,theta_2,theta_3,theta_4");
        CHECK(lines.size() == header + 4);
        // The first data row is t = 0 with zero residual.
        CHECK(lines[header + 1].rfind("0.0000000000000000e+00,", 0) == 0);
        const auto first = lines[header + 1];
        CHECK(first.substr(0, first.find(',')) == format_real(0.0));
        std::stringstream row(first);
        std::vector<std::string> cells;
        for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
        CHECK(std::stod(cells[4]) == 0.0);
        CHECK(format_real(0.1).size() == std::string("1.0000000000000001e-01").size());
        CHECK(std::stod(format_real(0.1)) == 0.1);
    }

    TEST_CASE("config parsing, validation and hashing") {
        const auto j = nlohmann::json::parse(R"({"model": "graph", "M": 50, "K": 2.5,
            "strategy": "graph_block_hybrid", "adjacency": {"kind": "planted", "s": 5, "flip": 0.1},
            "detect": true, "controller": {"abs_tol": 1e-9}})");
        const RunConfig c = config_from_json(j);
        CHECK(c.model == ModelKind::graph);
        CHECK(c.size == 50);
        CHECK(c.coupling == 2.5);
        CHECK(c.adjacency.kind == AdjacencyKind::planted);
        CHECK(c.controller.abs_tol == 1e-9);
        CHECK_NOTHROW(validate(c));
        CHECK(config_from_json(to_json(c)).size == c.size);
        CHECK(config_hash(config_from_json(to_json(c))) == config_hash(c));
        RunConfig other = c;
        other.seed = 2;
        CHECK(config_hash(other) != config_hash(c));

        CHECK_THROWS_AS((void)config_from_json(nlohmann::json::parse(R"({"N": 3})")), ConfigError);
        CHECK_THROWS_AS((void)config_from_json(nlohmann::json::parse(R"({"M": "many"})")), ConfigError);
        CHECK_THROWS_AS((void)config_from_json(nlohmann::json::parse(R"({"model": "lattice"})")), ConfigError);

        RunConfig graph_without_source;
        graph_without_source.model = ModelKind::graph;
        graph_without_source.strategy = RhsStrategy::graph_matvec;
        CHECK_THROWS_AS(validate(graph_without_source), ConfigError);
        RunConfig classical_with_source;
        classical_with_source.adjacency.kind = AdjacencyKind::threshold;
        CHECK_THROWS_AS(validate(classical_with_source), ConfigError);
        RunConfig mismatch;
        mismatch.strategy = RhsStrategy::graph_naive;
        CHECK_THROWS_AS(validate(mismatch), ConfigError);
    }

    TEST_CASE("simulation with and without detection agree after un-permutation") {
        RunConfig c;
        c.model = ModelKind::graph;
        c.size = 120;
        c.coupling = 2.0;
        c.omega0 = 1.0;
        c.t_end = 2.0;
        c.samples = 5;
        c.adjacency.kind = AdjacencyKind::planted;
        c.adjacency.flip = 0.05;
        c.adjacency.symmetric = true;
        c.adjacency.shuffle = true;
        c.strategy = RhsStrategy::graph_naive;
        const auto inst = build_instance(c);
        const auto plain = run_simulation(c, inst);
        for (auto strategy : {RhsStrategy::graph_block_hybrid, RhsStrategy::graph_matvec}) {
            RunConfig d = c;
            d.detect = true;
            d.strategy = strategy;
            const auto detected = run_simulation(d, inst);
            REQUIRE(detected.detection.has_value());
            CHECK(detected.detection->partition.community_count() == 4);
            for (std::size_t i = 0; i < plain.trajectory.size(); ++i) {
                CHECK(oracle::max_abs_diff(plain.trajectory.states[i].phases, detected.trajectory.states[i].phases) <
                      1e-6);
                CHECK(std::abs(plain.trajectory.diagnostics[i].potential -
                               detected.trajectory.diagnostics[i].potential) < 1e-6);
            }
        }
    }

    TEST_CASE("identical config and seed give identical bytes apart from timings") {
        auto render = [] {
            RunConfig c;
            c.size = 30;
            c.coupling = 3.0;
            c.omega0 = 1.0;
            c.t_end = 5.0;
            c.samples = 11;
            c.random_initial = true;
            const auto result = run_simulation(c, build_instance(c));
            std::stringstream out;
            write_trajectory_csv(out, result.trajectory, OutputHeader{config_hash(c), c.seed, {}}, true);
            return out.str();
        };
        CHECK(render() == render());

        auto bench = [] {
            BenchSettings settings{1};
            const auto rows = bench_graph(random_threshold_matrix(60, 0.5, 3), nullptr, settings, "x");
            std::stringstream out;
            write_bench_csv(out, rows, OutputHeader{"h", 3, {}});
            return strip_column(out.str(), "wall_seconds");
        };
        CHECK(bench() == bench());
    }

    TEST_CASE("bench rows carry the cost table counts") {
        const auto rows = bench_classical(100, BenchSettings{1});
        REQUIRE(rows.size() == 4);
        CHECK(rows[0].strategy == "classical_naive");
        CHECK(rows[0].sin_evals + rows[0].cos_evals == 9900);
        CHECK(rows[1].strategy == "classical_order_param");
        CHECK(rows[1].sin_evals + rows[1].cos_evals == 400);
        CHECK(rows[1].trig_calls == 200);
        std::stringstream out;
        write_bench_csv(out, rows, OutputHeader{"h", 1, {}});
        CHECK(out.str().find("strategy,M,density,sin_evals,cos_evals,wall_seconds") != std::string::npos);
    }

    TEST_CASE("every figure runs in quick mode") {
        for (const auto& name : figure_names()) {
            if (name == "18") continue;  // covered by the CLI smoke test
            const Table t = bench_figure(name, FigureOptions{1, 1, true});
            CHECK_FALSE(t.rows.empty());
            for (const auto& row : t.rows) CHECK(row.size() == t.columns.size());
        }
        CHECK_THROWS_AS((void)bench_figure("2", FigureOptions{}), ConfigError);
        CHECK(median_seconds([] {}, 3) >= 0.0);
    }
}
