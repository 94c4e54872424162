#include <doctest.h>

#include <memory>
#include <numbers>
#include <random>

#include "kuramoto/diagnostics.hpp"
#include "kuramoto/error.hpp"
#include "kuramoto/generators.hpp"
#include "kuramoto/integrators.hpp"
#include "kuramoto/rhs.hpp"
#include "oracles.hpp"

using namespace kuramoto;
using std::numbers::pi;

TEST_SUITE("diagnostics") {
    TEST_CASE("order parameter of aligned and opposed phases") {
        const auto aligned = order_parameter(std::vector<double>(7, 0.8));
        CHECK(aligned.r == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(aligned.psi == doctest::Approx(0.8).epsilon(1e-15));
        const auto opposed = order_parameter(std::vector<double>{0.0, pi});
        CHECK(opposed.r < 1e-15);
        const auto zero = order_parameter(std::vector<double>{0.0, 2 * pi / 3, 4 * pi / 3});
        CHECK(zero.r < 1e-15);
        CHECK_THROWS((void)order_parameter(std::vector<double>{}));
    }

    TEST_CASE("order parameter matches the mean phasor and is shift invariant") {
        std::mt19937_64 rng(12);
        for (int trial = 0; trial < 20; ++trial) {
            auto theta = oracle::random_phases(30, rng);
            double c = 0.0, s = 0.0;
            for (double t : theta) {
                c += std::cos(t) / 30.0;
                s += std::sin(t) / 30.0;
            }
            const auto op = order_parameter(theta);
            CHECK(op.r >= 0.0);
            CHECK(op.r <= 1.0 + 1e-12);
            CHECK(std::abs(op.r * std::cos(op.psi) - c) < 1e-12);
            CHECK(std::abs(op.r * std::sin(op.psi) - s) < 1e-12);
            for (double& t : theta) t += 0.3;
            const auto shifted = order_parameter(theta);
            CHECK(std::abs(shifted.r - op.r) < 1e-12);
            CHECK(std::abs(std::remainder(shifted.psi - op.psi - 0.3, 2 * pi)) < 1e-12);
        }
    }

    TEST_CASE("classical potential closed form") {
        CHECK(potential_classical(std::vector<double>(5, 2.0), std::vector<double>(5, 0.0), 3.0) ==
              doctest::Approx(0.0).epsilon(1e-14));
        CHECK(potential_classical(std::vector<double>{0.0, pi}, std::vector<double>{0.0, 0.0}, 1.0) ==
              doctest::Approx(1.0).epsilon(1e-15));
        std::mt19937_64 rng(6);
        const auto theta = oracle::random_phases(60, rng);
        const auto omega = oracle::random_vector(60, -2, 2, rng);
        const double expected = oracle::classical_potential(theta, omega, 1.5);
        CHECK(potential_classical(theta, omega, 1.5) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(potential_classical_naive(theta, omega, 1.5) == doctest::Approx(expected).epsilon(1e-12));
    }

    TEST_CASE("classical gradient matches the right-hand side") {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 5; ++trial) {
            const auto theta = oracle::random_phases(20, rng);
            const auto omega = oracle::random_vector(20, -2, 2, rng);
            const auto grad = oracle::gradient(
                [&](const std::vector<double>& x) { return potential_classical(x, omega, 2.0); }, theta);
            std::vector<double> rhs(20);
            EvalCounters c;
            rhs_classical_order_param(theta, omega, 2.0, rhs, c);
            for (std::size_t m = 0; m < 20; ++m) CHECK(std::abs(-grad[m] - rhs[m]) < 1e-6);
        }
    }

    TEST_CASE("graph potential") {
        std::mt19937_64 rng(14);
        const auto theta = oracle::random_phases(25, rng);
        const auto omega = oracle::random_vector(25, -1, 1, rng);
        SUBCASE("complete graph equals the classical potential") {
            const double v = potential_graph(PhaseState{theta, 0.0}, NaturalFrequencies{omega}, 1.3,
                                             CouplingGraph::complete(25), ScalingMode::uniform);
            CHECK(v == doctest::Approx(potential_classical(theta, omega, 1.3)).epsilon(1e-10));
        }
        SUBCASE("equal phases leave the drift term") {
            const auto g = oracle::to_graph(oracle::random_dense(25, 0.4, rng));
            const std::vector<double> same(25, 0.7);
            double drift = 0.0;
            for (double w : omega) drift -= 0.7 * w;
            for (auto scaling : {ScalingMode::uniform, ScalingMode::non_uniform}) {
                const double v = potential_graph(PhaseState{same, 0.0}, NaturalFrequencies{omega}, 2.0, g, scaling);
                CHECK(v == doctest::Approx(drift).epsilon(1e-12));
            }
        }
        SUBCASE("matches the dense pair sum for any scaling") {
            const auto dense = oracle::random_dense(25, 0.6, rng);
            const auto g = oracle::to_graph(dense);
            for (bool non_uniform : {false, true}) {
                const auto scaling = non_uniform ? ScalingMode::non_uniform : ScalingMode::uniform;
                const double v = potential_graph(PhaseState{theta, 0.0}, NaturalFrequencies{omega}, 0.9, g, scaling);
                CHECK(v == doctest::Approx(oracle::graph_potential(dense, theta, omega, 0.9, non_uniform))
                               .epsilon(1e-12));
            }
        }
        SUBCASE("symmetric uniform gradient matches matvec") {
            const auto g = oracle::to_graph(oracle::random_symmetric(25, 0.5, rng));
            const double total = scaled_adjacency_total(g, ScalingMode::uniform);
            const auto grad = oracle::gradient(
                [&](const std::vector<double>& x) {
                    return potential_graph(x, omega, 1.1, g, ScalingMode::uniform, total);
                },
                theta);
            std::vector<double> rhs(25);
            EvalCounters c;
            rhs_graph_matvec(theta, omega, 1.1, g, ScalingMode::uniform, rhs, c);
            for (std::size_t m = 0; m < 25; ++m) CHECK(std::abs(-grad[m] - rhs[m]) < 1e-6);
        }
    }

    TEST_CASE("conserved residual") {
        const auto freq = default_frequencies(10, 1.5);
        const auto init = default_initial_phases(10);
        CHECK(conserved_residual(init, freq, init) == 0.0);

        auto rhs = RhsEvaluator::classical(RhsStrategy::classical_order_param, freq, 2.0);
        const auto next = step_euler(init, rhs, 0.1);
        CHECK(std::abs(conserved_residual(next, freq, init)) <= 1e-12 * 10);

        // Non-uniform scaling of an irregular graph breaks the antisymmetry.
        const auto g = std::make_shared<const CouplingGraph>(
            CouplingGraph::from_nonzeros(10, {{1, 2, 3, 4, 5, 6, 7, 8, 9}, {0}, {0}, {0}, {0}, {0}, {0}, {0}, {0},
                                              {0, 1, 2}}));
        auto graph_rhs = RhsEvaluator::graph(RhsStrategy::graph_matvec, freq, 2.0, g, ScalingMode::non_uniform);
        CHECK_FALSE(graph_rhs.conserves_phase_sum());
        PhaseState s = init;
        for (int i = 0; i < 20; ++i) s = step_rk4(s, graph_rhs, 0.05);
        CHECK(std::abs(conserved_residual(s, freq, init)) > 1e-3);

        CHECK_THROWS_AS((void)conserved_residual(PhaseState{{0.0}, 0.0}, freq, init), DimensionError);
    }
}
