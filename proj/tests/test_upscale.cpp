#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "imscale/upscale.hpp"
#include "test_util.hpp"

using namespace imscale;

namespace {

Partition whole_graph_community(std::size_t n) {
    return Partition::from_assignment(std::vector<std::uint32_t>(n, 0));
}

}  // namespace

TEST_CASE("s=1 with identical graphs is the identity on seed sets") {
    const auto net = testutil::make_power_law_sbm(120, 2, 2.2, 2, 20, 0.1, 4);
    for (const auto kind : {CentralityKind::Degree, CentralityKind::PageRank,
                            CentralityKind::Coreness}) {
        const UpscaleContext ctx =
            make_upscale_context(net.graph, net.partition, net.graph, net.partition,
                                 std::vector<std::uint32_t>{0, 1}, kind);
        const std::vector<NodeId> seeds{3, 40, 77};
        const auto mapped = upscale_seed_set(seeds, ctx, 1);
        std::set<NodeId> got(mapped.begin(), mapped.end());
        CHECK(got == std::set<NodeId>(seeds.begin(), seeds.end()));
    }
}

TEST_CASE("rank-1 seed in a community of 2 expands to ranks {1,2} of a community of 4") {
    // Scaled: one edge, degrees tie, ids break the tie: node 0 has rank 1.
    const Graph scaled = testutil::make_graph(2, {{0, 1}});
    // Original: degrees 3,2,2,1 -> ranks 1..4 on nodes 0..3 (id tie-break).
    const Graph original = testutil::make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
    const UpscaleContext ctx = make_upscale_context(
        original, whole_graph_community(4), scaled, whole_graph_community(2),
        std::vector<std::uint32_t>{0}, CentralityKind::Degree);

    const std::vector<NodeId> seed{0};  // rank 1, normalised rank 1/2
    const auto mapped = upscale_seed_set(seed, ctx, 2);
    // q' candidates {1/4, 2/4, 3/4, 1}: nearest two to 1/2 are 2/4 then the
    // 1/4-vs-3/4 tie, resolved by ascending node id.
    const std::set<NodeId> got(mapped.begin(), mapped.end());
    CHECK(got == std::set<NodeId>{0, 1});
}

TEST_CASE("seeds from one scaled community never overlap after expansion") {
    const auto net = testutil::make_power_law_sbm(300, 3, 2.2, 2, 25, 0.1, 8);
    const ScaledGraph sg = downscale(net.graph, net.partition, 2, 99);
    const UpscaleContext ctx =
        make_upscale_context(net.graph, net.partition, sg.graph, sg.partition, sg.community_map,
                             CentralityKind::PageRank);
    // Several seeds from scaled community 0.
    std::vector<NodeId> seeds;
    for (const NodeId v : sg.partition.communities[0]) {
        seeds.push_back(v);
        if (seeds.size() == 5)
            break;
    }
    const auto mapped = upscale_seed_set(seeds, ctx, 2);
    const std::set<NodeId> unique(mapped.begin(), mapped.end());
    CHECK(unique.size() == mapped.size());
    CHECK(mapped.size() == seeds.size() * 2);
}

TEST_CASE("every upscaled node lands in the community mapped from its source") {
    const auto net = testutil::make_power_law_sbm(400, 4, 2.2, 2, 30, 0.1, 6);
    const ScaledGraph sg = downscale(net.graph, net.partition, 4, 123);
    const UpscaleContext ctx =
        make_upscale_context(net.graph, net.partition, sg.graph, sg.partition, sg.community_map,
                             CentralityKind::Degree);
    std::vector<NodeId> seeds;
    for (std::size_t c = 0; c < sg.partition.community_count(); ++c)
        seeds.push_back(sg.partition.communities[c].front());
    std::vector<UpscaleShortfall> shortfalls;
    const auto mapped = upscale_seed_set(seeds, ctx, 4, &shortfalls);
    CHECK(shortfalls.empty());
    // Reconstruct the expansion per seed: communities must match.
    for (const NodeId u : mapped) {
        const std::uint32_t oc = net.partition.assignment[u];
        bool sourced = false;
        for (const NodeId v : seeds)
            if (ctx.community_map[sg.partition.assignment[v]] == oc)
                sourced = true;
        CHECK(sourced);
    }
}

TEST_CASE("a too-small original community yields a reported shortfall") {
    // Scaled community of 3 maps to an original community of 4; s=2 needs 6.
    std::vector<std::pair<NodeId, NodeId>> se;
    testutil::add_clique(se, 0, 2);
    const Graph scaled = testutil::make_graph(3, se);
    std::vector<std::pair<NodeId, NodeId>> oe;
    testutil::add_clique(oe, 0, 3);
    const Graph original = testutil::make_graph(4, oe);
    const UpscaleContext ctx = make_upscale_context(
        original, whole_graph_community(4), scaled, whole_graph_community(3),
        std::vector<std::uint32_t>{0}, CentralityKind::Degree);
    std::vector<UpscaleShortfall> shortfalls;
    const auto mapped = upscale_seed_set(std::vector<NodeId>{0, 1, 2}, ctx, 2, &shortfalls);
    CHECK(mapped.size() == 4);
    REQUIRE(shortfalls.size() == 1);
    CHECK(shortfalls[0].missing == 2);
}

TEST_CASE("upscale_front on an empty front is empty") {
    const auto net = testutil::make_power_law_sbm(100, 2, 2.2, 2, 15, 0.1, 2);
    const UpscaleContext ctx =
        make_upscale_context(net.graph, net.partition, net.graph, net.partition,
                             std::vector<std::uint32_t>{0, 1}, CentralityKind::PageRank);
    const Front out =
        upscale_front({}, ctx, 1, PropagationModel::ic(0.05), 10, 3, 0.025);
    CHECK(out.empty());
}

TEST_CASE("upscale_front expands sizes and normalises by the original n") {
    const auto net = testutil::make_power_law_sbm(200, 2, 2.2, 2, 20, 0.1, 12);
    const ScaledGraph sg = downscale(net.graph, net.partition, 4, 7);
    const UpscaleContext ctx =
        make_upscale_context(net.graph, net.partition, sg.graph, sg.partition, sg.community_map,
                             CentralityKind::PageRank);
    Front scaled_front;
    scaled_front.push_back({{0.2, 1.0 / sg.graph.node_count()}, {sg.partition.communities[0][0]}});
    std::uint64_t attempts = 0;
    UpscaleReport report;
    const Front out = upscale_front(scaled_front, ctx, 4, PropagationModel::ic(0.05), 20, 5, 1.0,
                                    &attempts, &report);
    REQUIRE(out.size() == 1);
    CHECK(out[0].seeds.size() == 4);
    CHECK(out[0].point.seed_fraction ==
          doctest::Approx(4.0 / static_cast<double>(net.graph.node_count())));
    CHECK(attempts > 0);
    CHECK(report.points_in == 1);
    CHECK(report.dropped_over_cap == 0);
}

TEST_CASE("upscale_front drops points over the seed-fraction cap and stays non-dominated") {
    const auto net = testutil::make_power_law_sbm(200, 2, 2.2, 2, 20, 0.1, 19);
    const ScaledGraph sg = downscale(net.graph, net.partition, 2, 31);
    const UpscaleContext ctx =
        make_upscale_context(net.graph, net.partition, sg.graph, sg.partition, sg.community_map,
                             CentralityKind::Degree);
    Front scaled_front;
    const auto& c0 = sg.partition.communities[0];
    // One small set and one large set; the cap excludes the large one.
    scaled_front.push_back({{0.1, 1.0 / sg.graph.node_count()}, {c0[0]}});
    std::vector<NodeId> big(c0.begin(), c0.begin() + 5);
    scaled_front.push_back({{0.5, 5.0 / sg.graph.node_count()}, big});
    UpscaleReport report;
    const double cap = 3.0 / static_cast<double>(net.graph.node_count());
    const Front out = upscale_front(scaled_front, ctx, 2, PropagationModel::ic(0.05), 10, 5, cap,
                                    nullptr, &report);
    CHECK(report.dropped_over_cap == 1);
    REQUIRE(out.size() == 1);
    CHECK(out[0].seeds.size() == 2);
    for (std::size_t a = 0; a < out.size(); ++a)
        for (std::size_t b = 0; b < out.size(); ++b)
            if (a != b)
                CHECK(!dominates(out[a].point, out[b].point));
}
