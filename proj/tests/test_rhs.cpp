#include <doctest.h>

#include <memory>
#include <numbers>
#include <random>

#include "kuramoto/community.hpp"
#include "kuramoto/error.hpp"
#include "kuramoto/generators.hpp"
#include "kuramoto/rhs.hpp"
#include "oracles.hpp"

using namespace kuramoto;
using std::numbers::pi;

namespace {

std::vector<double> hybrid_in_original_order(const CouplingGraph& g, const BlockPartition& part,
                                             const std::vector<double>& theta, const std::vector<double>& omega,
                                             double coupling, ScalingMode scaling, ModePolicy policy,
                                             EvalCounters& counters) {
    const BlockPlan plan = plan_blocks(g, part, policy);
    const auto order = plan.order();
    std::vector<double> th(theta.size()), om(theta.size()), out(theta.size()), back(theta.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        th[k] = theta[order[k]];
        om[k] = omega[order[k]];
    }
    rhs_graph_block_hybrid(th, om, coupling, g, scaling, plan, out, counters);
    for (std::size_t k = 0; k < order.size(); ++k) back[order[k]] = out[k];
    return back;
}

}  // namespace

TEST_SUITE("rhs-eval") {
    TEST_CASE("two oscillators a quarter turn apart") {
        const std::vector<double> theta{0.0, pi / 2};
        const std::vector<double> omega{0.0, 0.0};
        std::vector<double> out(2);
        EvalCounters c;
        rhs_classical_naive(theta, omega, 1.0, out, c);
        CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(out[1] == doctest::Approx(-0.5).epsilon(1e-15));
        rhs_classical_order_param(theta, omega, 1.0, out, c);
        CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(out[1] == doctest::Approx(-0.5).epsilon(1e-15));
    }

    TEST_CASE("equal phases leave only the natural frequencies") {
        const std::vector<double> theta(3, 1.234);
        const std::vector<double> omega{-1.0, 0.5, 7.0};
        std::vector<double> out(3);
        EvalCounters c;
        rhs_classical_naive(theta, omega, 4.0, out, c);
        CHECK(out == omega);
        rhs_classical_order_param(theta, omega, 4.0, out, c);
        for (std::size_t m = 0; m < 3; ++m) CHECK(out[m] == doctest::Approx(omega[m]).epsilon(1e-14));
    }

    TEST_CASE("classical counters follow the cost table") {
        for (std::size_t size : {10u, 100u, 1000u}) {
            std::mt19937_64 rng(size);
            const auto theta = oracle::random_phases(size, rng);
            const std::vector<double> omega(size, 1.0);
            std::vector<double> out(size);
            EvalCounters naive;
            rhs_classical_naive(theta, omega, 1.0, out, naive);
            CHECK(naive.sin_evals == size * (size - 1));
            CHECK(naive.cos_evals == 0);
            EvalCounters op;
            rhs_classical_order_param(theta, omega, 1.0, out, op);
            CHECK(op.trig_evals() == 4 * size);
            CHECK(op.trig_calls == 2 * size);
        }
    }

    TEST_CASE("classical strategies agree with the double-loop oracle") {
        std::mt19937_64 rng(5);
        const auto theta = oracle::random_phases(100, rng);
        const auto omega = oracle::random_vector(100, -2.0, 2.0, rng);
        const auto expected = oracle::classical_rhs(theta, omega, 2.5);
        std::vector<double> naive(100), op(100);
        EvalCounters c;
        rhs_classical_naive(theta, omega, 2.5, naive, c);
        rhs_classical_order_param(theta, omega, 2.5, op, c);
        CHECK(oracle::max_rel_diff(naive, expected) < 1e-12);
        CHECK(oracle::max_rel_diff(op, expected) < 1e-10);
    }

    TEST_CASE("graph naive on the complete graph matches the classical model to rounding") {
        std::mt19937_64 rng(8);
        const auto theta = oracle::random_phases(40, rng);
        const auto omega = oracle::random_vector(40, -1.0, 1.0, rng);
        std::vector<double> classical(40), graph(40);
        EvalCounters c;
        rhs_classical_naive(theta, omega, 3.0, classical, c);
        rhs_graph_naive(theta, omega, 3.0, CouplingGraph::complete(40), ScalingMode::uniform, graph, c);
        CHECK(oracle::max_rel_diff(graph, classical) < 1e-14);
    }

    TEST_CASE("single directed edge with non-uniform scaling") {
        const auto g = CouplingGraph::from_nonzeros(2, {{1}, {}});
        const std::vector<double> theta{0.0, pi / 2};
        const std::vector<double> omega{0.0, 0.0};
        for (auto strategy : {RhsStrategy::graph_naive, RhsStrategy::graph_matvec, RhsStrategy::graph_block_hybrid}) {
            auto rhs = RhsEvaluator::graph(strategy, {omega}, 1.0, std::make_shared<const CouplingGraph>(g),
                                           ScalingMode::non_uniform,
                                           strategy == RhsStrategy::graph_block_hybrid
                                               ? std::make_shared<const BlockPlan>(
                                                     plan_blocks(g, BlockPartition::identity(2)))
                                               : nullptr);
            const auto out = rhs.evaluate(theta);
            CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(out[1] == 0.0);
        }
    }

    TEST_CASE("empty graph under non-uniform scaling returns omega") {
        const auto g = CouplingGraph::empty(5);
        std::mt19937_64 rng(2);
        const auto theta = oracle::random_phases(5, rng);
        const auto omega = oracle::random_vector(5, -1.0, 1.0, rng);
        std::vector<double> out(5);
        EvalCounters c;
        rhs_graph_matvec(theta, omega, 2.0, g, ScalingMode::non_uniform, out, c);
        CHECK(out == omega);
        CHECK(c.trig_evals() == 10);
    }

    TEST_CASE("graph strategies agree with the dense oracle") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 12; ++trial) {
            const std::size_t size = 1 + rng() % 300;
            const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const auto dense = oracle::random_dense(size, density, rng);
            const auto g = oracle::to_graph(dense);
            const auto theta = oracle::random_phases(size, rng);
            const auto omega = oracle::random_vector(size, -3.0, 3.0, rng);
            const bool non_uniform = trial % 2 == 1;
            const auto scaling = non_uniform ? ScalingMode::non_uniform : ScalingMode::uniform;
            const auto expected = oracle::graph_rhs(dense, theta, omega, 1.7, non_uniform);

            std::vector<double> naive(size), matvec(size);
            EvalCounters cn, cm, ch;
            rhs_graph_naive(theta, omega, 1.7, g, scaling, naive, cn);
            rhs_graph_matvec(theta, omega, 1.7, g, scaling, matvec, cm);
            const auto labels = [&] {
                std::vector<Index> l(size);
                for (auto& x : l) x = static_cast<Index>(rng() % 4);
                return l;
            }();
            const auto part = BlockPartition::from_labels(labels);
            const auto hybrid =
                hybrid_in_original_order(g, part, theta, omega, 1.7, scaling, ModePolicy::automatic, ch);
            CHECK(oracle::max_rel_diff(naive, expected) < 1e-12);
            CHECK(oracle::max_rel_diff(matvec, expected) < 1e-10);
            CHECK(oracle::max_rel_diff(hybrid, expected) < 1e-10);
            CHECK(cn.sin_evals == g.ones());
            CHECK(cm.trig_evals() == 2 * size);
            CHECK(ch.trig_evals() == 2 * size);
        }
    }

    TEST_CASE("planted blocks: hybrid and matvec agree with naive") {
        const auto planted = planted_block_matrix(std::size_t{10}, 0.0, 4);
        const auto& g = planted.adjacency;
        std::mt19937_64 rng(9);
        const auto theta = oracle::random_phases(100, rng);
        const auto omega = oracle::random_vector(100, -1.0, 1.0, rng);
        std::vector<double> naive(100), matvec(100);
        EvalCounters c;
        rhs_graph_naive(theta, omega, 1.0, g, ScalingMode::uniform, naive, c);
        rhs_graph_matvec(theta, omega, 1.0, g, ScalingMode::uniform, matvec, c);
        const auto hybrid = hybrid_in_original_order(g, planted.partition, theta, omega, 1.0, ScalingMode::uniform,
                                                     ModePolicy::automatic, c);
        for (std::size_t m = 0; m < 100; ++m) {
            CHECK(std::abs(matvec[m] - naive[m]) < 1e-10);
            CHECK(std::abs(hybrid[m] - naive[m]) < 1e-9);
        }
    }

    TEST_CASE("block modes follow the majority rule with ties to nonzero_sum") {
        // Block 0 = {0, 1} fully occupied, block 1 = {2, 3} empty, off-diagonal
        // blocks exactly half full.
        const auto g = CouplingGraph::from_nonzeros(4, {{0, 1, 2}, {0, 1, 3}, {0}, {1}});
        const std::size_t sizes[] = {2, 2};
        const BlockPlan plan = plan_blocks(g, BlockPartition::from_sizes(sizes));
        CHECK(plan.mode(0, 0) == BlockMode::precompute_subtract);
        CHECK(plan.row_list(0, 0).empty());
        CHECK(plan.row_list(1, 0).empty());
        CHECK(plan.mode(1, 1) == BlockMode::nonzero_sum);
        CHECK(plan.row_list(2, 1).empty());
        CHECK(plan.block_ones(0, 1) == 2);
        CHECK(plan.block_zeros(0, 1) == 2);
        CHECK(plan.mode(0, 1) == BlockMode::nonzero_sum);
        CHECK(plan.mode(1, 0) == BlockMode::nonzero_sum);
        CHECK(plan.column_sums_needed(0));
        CHECK_FALSE(plan.column_sums_needed(1));
    }

    TEST_CASE("plan and graph must match") {
        const auto g = CouplingGraph::complete(6);
        const BlockPlan plan = plan_blocks(g, BlockPartition::identity(6));
        std::vector<double> theta(6, 0.0), omega(6, 0.0), out(6);
        EvalCounters c;
        CHECK_THROWS_AS(rhs_graph_block_hybrid(theta, omega, 1.0, CouplingGraph::empty(6), ScalingMode::uniform, plan,
                                               out, c),
                        ValidationError);
        std::vector<double> short_theta(5);
        CHECK_THROWS_AS(rhs_graph_block_hybrid(short_theta, omega, 1.0, g, ScalingMode::uniform, plan, out, c),
                        DimensionError);
        CHECK_THROWS_AS((void)plan_blocks(g, BlockPartition::identity(5)), ValidationError);
        CHECK_THROWS_AS(rhs_classical_naive(short_theta, omega, 1.0, out, c), DimensionError);
    }

    TEST_CASE("antisymmetry: symmetric uniform coupling terms sum to zero") {
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t size = 50 + trial * 20;
            const auto dense = oracle::random_symmetric(size, 0.4, rng);
            const auto g = oracle::to_graph(dense);
            const auto theta = oracle::random_phases(size, rng);
            const auto omega = oracle::random_vector(size, -1.0, 1.0, rng);
            std::vector<double> out(size);
            EvalCounters c;
            for (int s = 0; s < 2; ++s) {
                if (s == 0) rhs_graph_matvec(theta, omega, 2.0, g, ScalingMode::uniform, out, c);
                if (s == 1) rhs_graph_naive(theta, omega, 2.0, g, ScalingMode::uniform, out, c);
                double sum = 0.0;
                for (std::size_t m = 0; m < size; ++m) sum += out[m] - omega[m];
                CHECK(std::abs(sum) <= 1e-9 * static_cast<double>(size));
            }
        }
    }

    TEST_CASE("crossover of the single-block work proxy") {
        for (double p : {0.99, 0.5, 0.01}) {
            const auto g = random_threshold_matrix(400, p, 17);
            std::vector<double> theta(400, 0.1), omega(400, 0.0), out(400);
            EvalCounters naive, single;
            rhs_graph_naive(theta, omega, 1.0, g, ScalingMode::uniform, out, naive);
            const BlockPlan plan = plan_blocks(g, BlockPartition::identity(400), ModePolicy::precompute_subtract);
            rhs_graph_block_hybrid(theta, omega, 1.0, g, ScalingMode::uniform, plan, out, single);
            const auto ones = static_cast<double>(g.ones());
            const auto zeros = 400.0 * 400.0 - ones;
            CHECK(naive.terms == g.ones());
            CHECK(single.terms == static_cast<std::uint64_t>(zeros) + 400);
            if (ones > zeros) CHECK(single.terms < naive.terms);
            if (zeros > ones + 400) CHECK(single.terms > naive.terms);
        }
    }

    TEST_CASE("scaling names round-trip") {
        for (auto s : {RhsStrategy::classical_naive, RhsStrategy::classical_order_param, RhsStrategy::graph_naive,
                       RhsStrategy::graph_matvec, RhsStrategy::graph_block_hybrid}) {
            CHECK(parse_strategy(to_string(s)) == s);
        }
        CHECK(parse_scaling("non_uniform") == ScalingMode::non_uniform);
        CHECK_THROWS_AS((void)parse_strategy("fast"), ConfigError);
    }
}
