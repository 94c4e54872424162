// Command-line front end: instance generation, community detection,
// simulation and the benchmark tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "kuramoto/bench.hpp"
#include "kuramoto/community.hpp"
#include "kuramoto/config.hpp"
#include "kuramoto/error.hpp"
#include "kuramoto/io.hpp"
#include "kuramoto/pipeline.hpp"

namespace {

using namespace kuramoto;

enum ExitCode : int { ok = 0, config_error = 2, io_error = 3, numerical_error = 4, dimension_error = 5 };

// Raw flag values; only flags given on the command line override the config file.
struct Flags {
    std::string config_path;
    std::string output;
    std::string model;
    std::size_t size = 0;
    double coupling = 0.0;
    double omega0 = 0.0;
    std::string omega_file;
    std::string scaling;
    std::string strategy;
    std::string integrator;
    double step = 0.0;
    double tol = 0.0;
    double t_end = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::string adjacency_file;
    double threshold = 0.0;
    std::string planted;
    double flip = 0.0;
};

struct Options {
    CLI::Option* model = nullptr;
    CLI::Option* size = nullptr;
    CLI::Option* coupling = nullptr;
    CLI::Option* omega0 = nullptr;
    CLI::Option* omega_file = nullptr;
    CLI::Option* scaling = nullptr;
    CLI::Option* strategy = nullptr;
    CLI::Option* integrator = nullptr;
    CLI::Option* fixed = nullptr;
    CLI::Option* step = nullptr;
    CLI::Option* tol = nullptr;
    CLI::Option* t_end = nullptr;
    CLI::Option* samples = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* random_initial = nullptr;
    CLI::Option* adjacency_file = nullptr;
    CLI::Option* threshold = nullptr;
    CLI::Option* planted = nullptr;
    CLI::Option* flip = nullptr;
    CLI::Option* symmetric = nullptr;
    CLI::Option* shuffle = nullptr;
    CLI::Option* detect = nullptr;
    CLI::Option* no_phases = nullptr;
};

void add_run_options(CLI::App& app, Flags& f, Options& o) {
    app.add_option("-c,--config", f.config_path, "JSON config file; flags override its values");
    app.add_option("-o,--output", f.output, "Output file (default: standard output)");
    o.model = app.add_option("--model", f.model, "classical | graph");
    o.size = app.add_option("-M,--oscillators", f.size, "Number of oscillators");
    o.coupling = app.add_option("-K,--coupling", f.coupling, "Coupling constant");
    o.omega0 = app.add_option("--omega0", f.omega0, "Frequency spread omega0");
    o.omega_file = app.add_option("--omega-file", f.omega_file, "Whitespace-separated natural frequencies");
    o.scaling = app.add_option("--scaling", f.scaling, "uniform | non_uniform");
    o.strategy = app.add_option("--strategy", f.strategy,
                                "classical_naive | classical_order_param | graph_naive | graph_matvec | "
                                "graph_block_hybrid");
    o.integrator = app.add_option("--integrator", f.integrator, "euler | rk2 | rk4 | implicit_midpoint");
    o.fixed = app.add_flag("--fixed", "Fixed step size instead of adaptive RK4");
    o.step = app.add_option("--step", f.step, "Fixed step size");
    o.tol = app.add_option("--tol", f.tol, "Absolute and relative tolerance of adaptive RK4");
    o.t_end = app.add_option("-T,--t-end", f.t_end, "Integration time");
    o.samples = app.add_option("--samples", f.samples, "Number of output samples");
    o.seed = app.add_option("--seed", f.seed, "Random seed");
    o.random_initial = app.add_flag("--random-initial", "Uniformly random initial phases");
    o.adjacency_file = app.add_option("--adjacency", f.adjacency_file, "Matrix Market adjacency file");
    o.threshold = app.add_option("--threshold", f.threshold, "Random threshold matrix with this p");
    o.planted = app.add_option("--planted", f.planted, "Planted four-block matrix: s=<scale> or auto");
    o.flip = app.add_option("--flip", f.flip, "Flip probability of the planted matrix");
    o.symmetric = app.add_flag("--symmetric", "Mirror planted flips (symmetric adjacency)");
    o.shuffle = app.add_flag("--shuffle", "Relabel the generated graph randomly");
    o.detect = app.add_flag("--detect", "Detect communities and reorder before integrating");
    o.no_phases = app.add_flag("--no-phases", "Omit phase columns from the trajectory");
}

bool given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

RunConfig load_config(const Flags& f, const Options& o) {
    RunConfig c;
    bool strategy_from_file = false;
    bool size_from_file = false;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw IoError(fmt::format("cannot open config '{}'", f.config_path));
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(fmt::format("config '{}': {}", f.config_path, e.what()));
        }
        c = config_from_json(j);
        strategy_from_file = j.contains("strategy");
        size_from_file = j.contains("M");
    }

    if (given(o.model)) {
        if (f.model != "classical" && f.model != "graph") throw ConfigError(fmt::format("unknown model '{}'", f.model));
        c.model = f.model == "classical" ? ModelKind::classical : ModelKind::graph;
    }
    if (given(o.size)) c.size = f.size;
    if (given(o.coupling)) c.coupling = f.coupling;
    if (given(o.omega0)) c.omega0 = f.omega0;
    if (given(o.omega_file)) c.omega_file = f.omega_file;
    if (given(o.scaling)) c.scaling = parse_scaling(f.scaling);
    if (given(o.integrator)) c.integrator = parse_step_method(f.integrator);
    if (given(o.fixed) || (given(o.integrator) && c.integrator != StepMethod::rk4)) c.adaptive = false;
    if (given(o.step)) c.step = f.step;
    if (given(o.tol)) c.controller.abs_tol = c.controller.rel_tol = f.tol;
    if (given(o.t_end)) c.t_end = f.t_end;
    if (given(o.samples)) c.samples = f.samples;
    if (given(o.seed)) c.seed = f.seed;
    if (given(o.random_initial)) c.random_initial = true;

    const int sources = int(given(o.adjacency_file)) + int(given(o.threshold)) + int(given(o.planted));
    if (sources > 1) throw ConfigError("give at most one of --adjacency, --threshold and --planted");
    if (given(o.adjacency_file)) {
        c.adjacency.kind = AdjacencyKind::file;
        c.adjacency.path = f.adjacency_file;
        if (!given(o.size) && !size_from_file) c.size = read_matrix_market(std::filesystem::path(c.adjacency.path)).size();
    }
    if (given(o.threshold)) {
        c.adjacency.kind = AdjacencyKind::threshold;
        c.adjacency.threshold = f.threshold;
    }
    if (given(o.planted)) {
        c.adjacency.kind = AdjacencyKind::planted;
        if (f.planted == "auto") {
            c.adjacency.scale = 0;
        } else if (f.planted.rfind("s=", 0) == 0) {
            try {
                c.adjacency.scale = std::stoul(f.planted.substr(2));
            } catch (const std::exception&) {
                throw ConfigError(fmt::format("cannot parse --planted '{}'", f.planted));
            }
            if (c.adjacency.scale == 0) throw ConfigError("planted scale must be positive");
            if (!given(o.size)) c.size = 10 * c.adjacency.scale;
        } else {
            throw ConfigError(fmt::format("--planted expects s=<scale> or auto, got '{}'", f.planted));
        }
    }
    if (given(o.flip)) c.adjacency.flip = f.flip;
    if (given(o.symmetric)) c.adjacency.symmetric = true;
    if (given(o.shuffle)) c.adjacency.shuffle = true;
    if (given(o.detect)) c.detect = true;
    if (given(o.no_phases)) c.include_phases = false;

    // A graph source on the command line implies the graph model.
    if (sources > 0 && !given(o.model)) c.model = ModelKind::graph;
    if (given(o.strategy)) {
        c.strategy = parse_strategy(f.strategy);
    } else if (!strategy_from_file) {
        c.strategy = c.model == ModelKind::classical ? RhsStrategy::classical_order_param
                     : c.detect                      ? RhsStrategy::graph_block_hybrid
                                                     : RhsStrategy::graph_matvec;
    }
    return c;
}

// Output stream bound to -o or stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw IoError(fmt::format("cannot write '{}'", path));
        }
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }
    void close() {
        get().flush();
        if (!get()) throw IoError("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

OutputHeader header_for(const RunConfig& c) { return {config_hash(c), c.seed, {}}; }

std::string join_sizes(const BlockPartition& p) {
    std::string out;
    for (std::size_t n : p.community_sizes()) out += (out.empty() ? "" : ",") + std::to_string(n);
    return out;
}

int cmd_generate(const RunConfig& c, const std::string& output) {
    if (c.adjacency.kind == AdjacencyKind::none) throw ConfigError("generate needs --threshold or --planted");
    RunConfig graph_cfg = c;
    graph_cfg.model = ModelKind::graph;
    if (!is_graph_strategy(graph_cfg.strategy)) graph_cfg.strategy = RhsStrategy::graph_matvec;
    const Instance inst = build_instance(graph_cfg);
    OutputHeader header = header_for(graph_cfg);
    header.extra.emplace_back("density", format_real(mean_edge_density(*inst.graph)));
    header.extra.emplace_back("ones", std::to_string(inst.graph->ones()));
    if (inst.planted_blocks) header.extra.emplace_back("planted_blocks_ones", std::to_string(inst.planted_blocks->ones()));
    Sink sink(output);
    write_matrix_market(sink.get(), *inst.graph, header, is_symmetric(*inst.graph));
    sink.close();
    return ok;
}

int cmd_communities(const RunConfig& c, const std::string& output) {
    if (c.adjacency.kind == AdjacencyKind::none) {
        throw ConfigError("communities needs --adjacency, --threshold or --planted");
    }
    RunConfig graph_cfg = c;
    graph_cfg.model = ModelKind::graph;
    graph_cfg.detect = false;
    if (!is_graph_strategy(graph_cfg.strategy)) graph_cfg.strategy = RhsStrategy::graph_matvec;
    const Instance inst = build_instance(graph_cfg);
    const auto& graph = *inst.graph;
    const DetectionResult result = detect_communities(graph, c.seed);
    const auto& partition = result.partition;

    OutputHeader header = header_for(graph_cfg);
    header.extra.emplace_back("communities", std::to_string(partition.community_count()));
    header.extra.emplace_back("sizes", join_sizes(partition));
    header.extra.emplace_back("objective", format_real(result.objective));
    header.extra.emplace_back("density", format_real(result.density));
    std::optional<long long> score;
    if (inst.planted_blocks) {
        score = detection_score(graph, *inst.planted_blocks, permute_graph(graph, partition),
                                block_indicator(partition));
        header.extra.emplace_back("detection_score", std::to_string(*score));
    }
    Sink sink(output);
    write_csv_header(sink.get(), header);
    sink.get() << "node,community\n";
    const auto labels = partition.labels();
    for (std::size_t m = 0; m < labels.size(); ++m) sink.get() << m + 1 << ',' << labels[m] << '\n';
    sink.close();
    std::cerr << fmt::format("communities: {} sizes: {}{}\n", partition.community_count(), join_sizes(partition),
                             score ? fmt::format(" detection_score: {}", *score) : "");
    return ok;
}

int cmd_simulate(const RunConfig& c, const std::string& output) {
    const Instance inst = build_instance(c);
    const SimulationResult result = run_simulation(c, inst);
    OutputHeader header = header_for(c);
    header.extra.emplace_back("model", to_json(c).at("model").get<std::string>());
    header.extra.emplace_back("strategy", std::string(to_string(c.strategy)));
    header.extra.emplace_back("accepted_steps", std::to_string(result.stats.accepted));
    header.extra.emplace_back("rejected_steps", std::to_string(result.stats.rejected));
    header.extra.emplace_back("rhs_evaluations", std::to_string(result.counters.evaluations));
    if (result.detection) header.extra.emplace_back("communities", join_sizes(result.detection->partition));
    Sink sink(output);
    write_trajectory_csv(sink.get(), result.trajectory, header, c.include_phases && c.size <= 1000);
    sink.close();
    return ok;
}

int cmd_bench_rhs(const RunConfig& c, const std::string& output, std::size_t reps) {
    BenchSettings settings{reps, c.coupling, c.omega0, c.scaling};
    std::vector<BenchRow> rows;
    if (c.model == ModelKind::classical) {
        rows = bench_classical(c.size, settings);
    } else {
        RunConfig graph_cfg = c;
        if (!is_graph_strategy(graph_cfg.strategy)) graph_cfg.strategy = RhsStrategy::graph_matvec;
        const Instance inst = build_instance(graph_cfg);
        std::optional<DetectionResult> detected;
        if (c.detect) detected = detect_communities(*inst.graph, c.seed);
        rows = bench_graph(*inst.graph, detected ? &detected->partition : nullptr, settings, "rhs");
    }
    Sink sink(output);
    write_bench_csv(sink.get(), rows, header_for(c));
    sink.close();
    return ok;
}

int cmd_bench_figure(const std::string& figure, const FigureOptions& opt, const std::string& output) {
    const Table table = bench_figure(figure, opt);
    OutputHeader header;
    header.config_hash = fmt::format("figure-{}{}", figure, opt.quick ? "-quick" : "");
    header.seed = opt.seed;
    header.extra.emplace_back("repetitions", std::to_string(opt.repetitions));
    Sink sink(output);
    write_table_csv(sink.get(), table, header);
    sink.close();
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kuramoto oscillator networks: simulation, community detection and benchmarks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Flags flags;
    std::map<const CLI::App*, Options> opts;
    std::size_t reps = 5;
    std::string figure;
    FigureOptions figure_opts;
    std::string figure_output;

    auto* generate = app.add_subcommand("generate", "Write a generated adjacency matrix in Matrix Market format");
    auto* communities = app.add_subcommand("communities", "Detect communities and report the partition");
    auto* simulate = app.add_subcommand("simulate", "Integrate and write the trajectory CSV");
    auto* bench_rhs = app.add_subcommand("bench-rhs", "Compare right-hand side strategies");
    for (auto* sub : {generate, communities, simulate, bench_rhs}) add_run_options(*sub, flags, opts[sub]);
    bench_rhs->add_option("--reps", reps, "Timing repetitions (median reported)");

    auto* bench_fig = app.add_subcommand("bench-figure", "Regenerate the data behind one figure");
    bench_fig->add_option("--figure", figure, "Figure: 1, 7-12, 15-18")->required();
    bench_fig->add_option("--reps", figure_opts.repetitions, "Timing repetitions (median reported)");
    bench_fig->add_option("--seed", figure_opts.seed, "Random seed");
    bench_fig->add_flag("--quick", figure_opts.quick, "Reduced sizes");
    bench_fig->add_option("-o,--output", figure_output, "Output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }

    const CLI::App* active = app.get_subcommands().front();
    try {
        if (active == bench_fig) return cmd_bench_figure(figure, figure_opts, figure_output);
        const RunConfig config = load_config(flags, opts.at(active));

        if (active == generate) return cmd_generate(config, flags.output);
        if (active == communities) return cmd_communities(config, flags.output);
        if (active == simulate) return cmd_simulate(config, flags.output);
        return cmd_bench_rhs(config, flags.output, reps);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return config_error;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_error;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_error;
    } catch (const DimensionError& e) {
        std::cerr << "dimension mismatch: " << e.what() << '\n';
        return dimension_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
