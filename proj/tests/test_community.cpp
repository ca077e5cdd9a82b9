#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "imscale/community.hpp"
#include "test_util.hpp"

using namespace imscale;

namespace {

Partition single_community(std::size_t n) {
    return Partition::from_assignment(std::vector<std::uint32_t>(n, 0));
}

}  // namespace

TEST_CASE("modularity worked examples") {
    // Any graph in one community: e/m = 1 and (2m/2m)^2 = 1.
    const Graph g = testutil::random_graph(8, 12, 1);
    CHECK(modularity(g, single_community(8)) == doctest::Approx(0.0));

    // Two disjoint triangles split correctly: Q = 0.5.
    std::vector<std::pair<NodeId, NodeId>> edges;
    testutil::add_clique(edges, 0, 2);
    testutil::add_clique(edges, 3, 5);
    const Graph triangles = testutil::make_graph(6, edges);
    const Partition split = Partition::from_assignment({0, 0, 0, 1, 1, 1});
    CHECK(modularity(triangles, split) == doctest::Approx(0.5));

    // Triangle with every node alone: Q = -1/3.
    std::vector<std::pair<NodeId, NodeId>> tri;
    testutil::add_clique(tri, 0, 2);
    const Graph triangle = testutil::make_graph(3, tri);
    const Partition singletons = Partition::from_assignment({0, 1, 2});
    CHECK(modularity(triangle, singletons) == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("modularity agrees with the independent oracle on random partitions") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Graph g = testutil::random_graph(9, 14, seed);
        testutil::Rng rng(seed);
        std::vector<std::uint32_t> raw(9);
        std::vector<int> raw_int(9);
        for (std::size_t v = 0; v < 9; ++v) {
            raw[v] = static_cast<std::uint32_t>(rng.uniform_int(3));
            raw_int[v] = static_cast<int>(raw[v]);
        }
        const Partition p = Partition::from_assignment(raw);
        CHECK(modularity(g, p) == doctest::Approx(testutil::modularity_oracle(g, raw_int)));
    }
}

TEST_CASE("two 5-cliques joined by a bridge split into the two cliques") {
    std::vector<std::pair<NodeId, NodeId>> edges;
    testutil::add_clique(edges, 0, 4);
    testutil::add_clique(edges, 5, 9);
    edges.push_back({4, 5});
    const Graph g = testutil::make_graph(10, edges);

    const auto [best_assignment, best_q] = testutil::best_partition_oracle(g);
    const Partition detected = detect_communities(g, 7);
    CHECK(detected.community_count() == 2);
    CHECK(testutil::partition_groups(detected.assignment) ==
          testutil::partition_groups(best_assignment));
    CHECK(detected.quality == doctest::Approx(best_q));
}

TEST_CASE("a single clique stays one community") {
    std::vector<std::pair<NodeId, NodeId>> edges;
    testutil::add_clique(edges, 0, 5);
    const Graph g = testutil::make_graph(6, edges);
    const Partition p = detect_communities(g, 3);
    CHECK(p.community_count() == 1);
    CHECK(p.quality == doctest::Approx(0.0));
}

TEST_CASE("two disjoint triangles match the brute-force optimum") {
    std::vector<std::pair<NodeId, NodeId>> edges;
    testutil::add_clique(edges, 0, 2);
    testutil::add_clique(edges, 3, 5);
    const Graph g = testutil::make_graph(6, edges);

    const auto [best_assignment, best_q] = testutil::best_partition_oracle(g);
    CHECK(best_q == doctest::Approx(0.5));
    const Partition p = detect_communities(g, 11);
    CHECK(p.community_count() == 2);
    CHECK(testutil::partition_groups(p.assignment) ==
          testutil::partition_groups(best_assignment));
}

TEST_CASE("quality trace is non-decreasing across outer iterations") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto net = testutil::make_power_law_sbm(300, 3, 2.2, 2, 30, 0.1, seed);
        std::vector<double> trace;
        detect_communities(net.graph, seed, &trace);
        REQUIRE(!trace.empty());
        for (std::size_t i = 1; i < trace.size(); ++i)
            CHECK(trace[i] >= trace[i - 1] - 1e-12);
    }
}

TEST_CASE("same graph and seed give the identical partition") {
    const auto net = testutil::make_power_law_sbm(400, 4, 2.2, 2, 40, 0.1, 77);
    const Partition a = detect_communities(net.graph, 5);
    const Partition b = detect_communities(net.graph, 5);
    CHECK(a.assignment == b.assignment);
    CHECK(a.quality == b.quality);
}

TEST_CASE("detected partition is at least as good as the planted one") {
    const auto net = testutil::make_power_law_sbm(500, 5, 2.3, 2, 40, 0.08, 13);
    const Partition detected = detect_communities(net.graph, 1);
    CHECK(detected.quality >= net.partition.quality - 1e-9);
    CHECK(detected.quality == doctest::Approx(modularity(net.graph, detected)));
}

TEST_CASE("filter_small_communities applies the strict size rule") {
    // Communities of size 10 and 3 on a disconnected graph.
    std::vector<std::pair<NodeId, NodeId>> edges;
    testutil::add_clique(edges, 0, 9);
    testutil::add_clique(edges, 10, 12);
    const Graph g = testutil::make_graph(13, edges);
    std::vector<std::uint32_t> raw(13, 0);
    for (NodeId v = 10; v < 13; ++v)
        raw[v] = 1;
    const Partition p = Partition::from_assignment(raw);

    SUBCASE("threshold removes the small community") {
        const auto [fg, fp] = filter_small_communities(g, p, 4);
        CHECK(fg.node_count() == 10);
        CHECK(fp.community_count() == 1);
        CHECK(fp.communities[0].size() == 10);
    }
    SUBCASE("s=1 keeps everything") {
        const auto [fg, fp] = filter_small_communities(g, p, 1);
        CHECK(fg.node_count() == 13);
        CHECK(fp.community_count() == 2);
    }
    SUBCASE("equal size is kept (strictly-lower rule)") {
        std::vector<std::pair<NodeId, NodeId>> e2;
        testutil::add_clique(e2, 0, 7);
        testutil::add_clique(e2, 8, 15);
        const Graph g2 = testutil::make_graph(16, e2);
        std::vector<std::uint32_t> raw2(16, 0);
        for (NodeId v = 8; v < 16; ++v)
            raw2[v] = 1;
        const auto [fg, fp] = filter_small_communities(g2, Partition::from_assignment(raw2), 8);
        CHECK(fp.community_count() == 2);
        CHECK(fg.node_count() == 16);
    }
    SUBCASE("filtering everything is an error") {
        CHECK_THROWS_WITH_AS(filter_small_communities(g, p, 11),
                             doctest::Contains("exceeds every community size"),
                             std::runtime_error);
    }
    SUBCASE("every surviving community has at least s nodes") {
        const auto [fg, fp] = filter_small_communities(g, p, 4);
        for (const auto& c : fp.communities)
            CHECK(c.size() >= 4);
    }
}

TEST_CASE("filtering recompacts node ids and keeps external labels") {
    // Community 0 = {0,1}, community 1 = {2,3,4}; filter with s=3.
    const Graph g = testutil::make_graph(5, {{0, 1}, {2, 3}, {3, 4}, {2, 4}, {1, 2}});
    const Partition p = Partition::from_assignment({0, 0, 1, 1, 1});
    const auto [fg, fp] = filter_small_communities(g, p, 3);
    CHECK(fg.node_count() == 3);
    CHECK(fg.edge_count() == 3);
    CHECK(fg.label(0) == 2);
    CHECK(fg.label(2) == 4);
    CHECK(fp.assignment == std::vector<std::uint32_t>{0, 0, 0});
}
