#include "doctest.h"

#include <random>

#include "ctfa/cliques.hpp"
#include "ctfa/error.hpp"
#include "ctfa/structure.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ctfa;

TEST_CASE("FactorStructure invariants") {
    CHECK_THROWS_AS(FactorStructure(3, 2, {{0, 0}, {1, 0}}), Error);  // empty factor 1
    CHECK_THROWS_AS(FactorStructure(3, 1, {{3, 0}}), Error);
    const FactorStructure s(4, 1, {{2, 0}, {0, 0}, {2, 0}});
    CHECK(s.support() == std::vector<Loading>{{0, 0}, {2, 0}});
    CHECK(s.parents(2) == std::vector<int>{0});
    CHECK(s.parents(1).empty());
}

TEST_CASE("cliques_to_structure") {
    SUBCASE("two overlapping cliques reproduce the cross-loading pattern") {
        const CliqueSet c{5, {{0, 1, 2}, {2, 3, 4}}};
        CHECK(cliques_to_structure(c) == fixtures::shared_child_structure());
    }
    SUBCASE("empty clique set") {
        const auto s = cliques_to_structure(CliqueSet{4, {}});
        CHECK(s.d() == 0);
        CHECK(s.support().empty());
    }
    SUBCASE("singleton policies") {
        const CliqueSet c{3, {{0}, {1, 2}}};
        const auto dropped = cliques_to_structure(c, SingletonPolicy::Drop);
        CHECK(dropped.d() == 1);
        CHECK(dropped.support() == std::vector<Loading>{{1, 0}, {2, 0}});
        CHECK(cliques_to_structure(c, SingletonPolicy::Keep).d() == 2);
    }
}

TEST_CASE("unique_child_report") {
    SUBCASE("cross-loading example") {
        const auto r = unique_child_report(fixtures::shared_child_structure());
        CHECK(r.holds);
        CHECK(r.unique_children == std::vector<std::vector<int>>{{0, 1}, {3, 4}});
    }
    SUBCASE("independent clusters") {
        const auto s = FactorStructure::independent_clusters(3, 4);
        const auto r = unique_child_report(s);
        CHECK(r.holds);
        for (int j = 0; j < 3; ++j) CHECK(r.unique_children[j] == s.children(j));
    }
    SUBCASE("one factor's children are a subset of another's") {
        // F1 children {2,3} all also load on F0 (children {0,1,2,3}).
        const FactorStructure s(4, 2, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}});
        const auto r = unique_child_report(s);
        CHECK_FALSE(r.holds);
        CHECK(r.unique_children[1].empty());
    }
}

TEST_CASE("canonicalize") {
    const auto s = fixtures::shared_child_structure();
    const auto swapped = permute_columns(s, {1, 0});
    CHECK_FALSE(swapped == s);
    CHECK(canonicalize(swapped) == canonicalize(s));
    CHECK(canonicalize(s) == s);

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        const auto base = oracle::random_structure(12, 5, 0.25, rng);
        const auto canon = canonicalize(base);
        CHECK(canonicalize(canon) == canon);
        for (int k = 0; k < 3; ++k) {
            std::vector<int> perm{0, 1, 2, 3, 4};
            std::shuffle(perm.begin(), perm.end(), rng);
            CHECK(canonicalize(permute_columns(base, perm)) == canon);
        }
    }
}

TEST_CASE("structure -> within edges -> cliques -> structure round trip") {
    const auto check_round_trip = [](const FactorStructure& s) {
        const auto g = s.within_factor_edges();
        CHECK(canonicalize(cliques_to_structure(independent_maximal_cliques(g))) == canonicalize(s));
    };
    check_round_trip(fixtures::shared_child_structure());
    check_round_trip(FactorStructure::independent_clusters(4, 3));
    // Unique-child structure with several cross-loadings.
    check_round_trip(FactorStructure(9, 3, {{0, 0}, {1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 1},
                                            {6, 2}, {7, 2}, {8, 2}, {2, 1}, {5, 2}, {8, 0}}));
}

TEST_CASE("clique-derived structures always satisfy the unique child condition") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        const auto g = oracle::random_graph(10, 0.45, rng);
        for (auto policy : {SingletonPolicy::Drop, SingletonPolicy::Keep}) {
            CHECK(unique_child_report(cliques_to_structure(independent_maximal_cliques(g), policy)).holds);
        }
    }
}
