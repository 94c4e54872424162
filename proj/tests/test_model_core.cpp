#include <doctest.h>

#include <random>

#include "kuramoto/error.hpp"
#include "kuramoto/generators.hpp"
#include "kuramoto/community.hpp"
#include "kuramoto/types.hpp"
#include "oracles.hpp"

using namespace kuramoto;

TEST_SUITE("model-core") {
    TEST_CASE("validate accepts the two-node ring") {
        const auto g = CouplingGraph::from_raw(2, {GraphRow{RowStorage::nonzero_columns, {1}, 1},
                                                   GraphRow{RowStorage::nonzero_columns, {0}, 1}});
        CHECK(validate(g).ok());
    }

    TEST_CASE("validate reports duplicates, range errors and degree mismatches") {
        auto dup = CouplingGraph::from_raw(3, {GraphRow{RowStorage::nonzero_columns, {0, 0}, 2}, GraphRow{},
                                               GraphRow{}});
        CHECK(validate(dup).issue == GraphIssue::duplicate_index);
        CHECK(validate(dup).row == 0);

        auto range = CouplingGraph::from_raw(3, {GraphRow{}, GraphRow{RowStorage::nonzero_columns, {3}, 1},
                                                 GraphRow{}});
        CHECK(validate(range).issue == GraphIssue::index_out_of_range);
        CHECK(validate(range).row == 1);

        auto degree = CouplingGraph::from_raw(3, {GraphRow{RowStorage::zero_columns, {1}, 1}, GraphRow{},
                                                  GraphRow{}});
        CHECK(validate(degree).issue == GraphIssue::degree_mismatch);

        auto unsorted = CouplingGraph::from_raw(3, {GraphRow{RowStorage::nonzero_columns, {2, 1}, 2}, GraphRow{},
                                                    GraphRow{}});
        CHECK(validate(unsorted).issue == GraphIssue::unsorted_index);
    }

    TEST_CASE("from_nonzeros rejects out-of-range columns") {
        CHECK_THROWS_AS(CouplingGraph::from_nonzeros(2, {{0, 2}, {}}), ValidationError);
    }

    TEST_CASE("from_nonzeros sorts, deduplicates and picks the smaller storage") {
        const auto g = CouplingGraph::from_nonzeros(4, {{3, 1, 1}, {0, 1, 2, 3}, {}, {0, 1, 2}});
        CHECK(validate(g).ok());
        CHECK(g.degree(0) == 2);
        CHECK(g.row(0).storage == RowStorage::nonzero_columns);
        CHECK(g.row(1).storage == RowStorage::zero_columns);
        CHECK(g.row(1).columns.empty());
        CHECK(g.row(3).storage == RowStorage::zero_columns);
        CHECK(g.row(3).columns == std::vector<Index>{3});
        CHECK(g.ones() == 9);
        CHECK(g.contains(3, 2));
        CHECK_FALSE(g.contains(3, 3));
    }

    TEST_CASE("is_symmetric") {
        CHECK(is_symmetric(CouplingGraph::complete(3)));
        CHECK_FALSE(is_symmetric(CouplingGraph::from_nonzeros(3, {{1}, {}, {}})));
        CHECK(is_symmetric(planted_block_matrix(std::size_t{5}, 0.0, 1).adjacency));
    }

    TEST_CASE("row conversion round-trips the logical row") {
        std::mt19937_64 rng(11);
        for (std::size_t size : {1u, 7u, 64u, 1000u}) {
            for (double density : {0.0, 0.1, 0.5, 0.9, 1.0}) {
                const auto dense = oracle::random_dense(size, density, rng);
                const auto g = oracle::to_graph(dense);
                REQUIRE(validate(g).ok());
                for (std::size_t m = 0; m < size; m += std::max<std::size_t>(1, size / 16)) {
                    for (auto target : {RowStorage::nonzero_columns, RowStorage::zero_columns}) {
                        const GraphRow row = convert_row(g.row(m), target, size);
                        const GraphRow back = convert_row(row, g.row(m).storage, size);
                        CHECK(back.columns == g.row(m).columns);
                        CHECK(row.degree == g.degree(m));
                        const auto& cols = row.columns;
                        for (std::size_t l = 0; l < size; ++l) {
                            const bool stored = std::binary_search(cols.begin(), cols.end(), static_cast<Index>(l));
                            const bool one = target == RowStorage::nonzero_columns ? stored : !stored;
                            REQUIRE(one == (dense[m][l] == 1));
                        }
                    }
                }
            }
        }
    }

    TEST_CASE("for_each_nonzero visits the ones in order") {
        std::mt19937_64 rng(3);
        const auto dense = oracle::random_dense(50, 0.7, rng);
        const auto g = oracle::to_graph(dense);
        for (std::size_t m = 0; m < 50; ++m) {
            std::vector<Index> seen;
            g.for_each_nonzero(m, [&](Index l) { seen.push_back(l); });
            std::vector<Index> expected;
            for (std::size_t l = 0; l < 50; ++l) {
                if (dense[m][l]) expected.push_back(static_cast<Index>(l));
            }
            CHECK(seen == expected);
            CHECK(g.nonzero_columns(m) == expected);
        }
    }

    TEST_CASE("partition factories and permutation inverse") {
        const auto p = BlockPartition::from_communities(5, {{4, 0}, {2}, {1, 3}});
        CHECK(p.community_count() == 3);
        CHECK(p.community_sizes() == std::vector<std::size_t>{2, 1, 2});
        const auto order = p.order();
        const auto position = p.position();
        for (std::size_t k = 0; k < 5; ++k) CHECK(position[order[k]] == k);
        const auto labels = p.labels();
        CHECK(labels[4] == labels[0]);
        CHECK(labels[1] == labels[3]);
        CHECK(labels[2] != labels[0]);
        CHECK(BlockPartition::from_labels(labels).community_sizes() == p.community_sizes());

        CHECK_THROWS_AS(BlockPartition::from_communities(3, {{0, 1}, {1, 2}}), ValidationError);
        CHECK_THROWS_AS(BlockPartition::from_communities(3, {{0, 1}}), ValidationError);
    }

    TEST_CASE("random permutations compose with their inverse to the identity") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto order = random_permutation(97, seed);
            const auto inverse = inverse_permutation(order);
            for (std::size_t k = 0; k < order.size(); ++k) {
                CHECK(inverse[order[k]] == k);
                CHECK(order[inverse[k]] == k);
            }
        }
    }

    TEST_CASE("counters accumulate and reset") {
        EvalCounters a;
        a.sin_evals = 3;
        a.cos_evals = 4;
        EvalCounters b = a;
        b += a;
        CHECK(b.trig_evals() == 14);
        b.reset();
        CHECK(b.trig_evals() == 0);
    }
}
