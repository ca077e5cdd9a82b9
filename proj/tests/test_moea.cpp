#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "imscale/moea.hpp"
#include "imscale/parallel.hpp"
#include "test_util.hpp"

using namespace imscale;

namespace {

// Peeling oracle: repeatedly strip the mutually non-dominated subset.
std::vector<std::vector<int>> nd_sort_oracle(std::span<const Fitness> points) {
    std::vector<int> remaining(points.size());
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<std::vector<int>> fronts;
    while (!remaining.empty()) {
        std::vector<int> front, rest;
        for (const int p : remaining) {
            bool dominated = false;
            for (const int q : remaining) {
                if (q != p && dominates(points[q], points[p])) {
                    dominated = true;
                    break;
                }
            }
            (dominated ? rest : front).push_back(p);
        }
        fronts.push_back(front);
        remaining = std::move(rest);
    }
    return fronts;
}

// Direct crowding computation, written independently of the library.
std::vector<double> crowding_oracle(std::span<const Fitness> points, std::span<const int> front) {
    const std::size_t k = front.size();
    std::vector<double> d(k, 0.0);
    if (k <= 2)
        return std::vector<double>(k, std::numeric_limits<double>::infinity());
    for (int obj = 0; obj < 2; ++obj) {
        std::vector<std::size_t> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        const auto get = [&](std::size_t i) {
            return obj == 0 ? points[front[i]].influence_fraction : points[front[i]].seed_fraction;
        };
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (get(a) != get(b))
                return get(a) < get(b);
            return front[a] < front[b];
        });
        d[idx.front()] = d[idx.back()] = std::numeric_limits<double>::infinity();
        const double width = get(idx.back()) - get(idx.front());
        if (width <= 0.0)
            continue;
        for (std::size_t i = 1; i + 1 < k; ++i)
            if (d[idx[i]] != std::numeric_limits<double>::infinity())
                d[idx[i]] += (get(idx[i + 1]) - get(idx[i - 1])) / width;
    }
    return d;
}

std::vector<Fitness> random_points(std::size_t count, std::uint64_t seed) {
    testutil::Rng rng(seed);
    std::vector<Fitness> points(count);
    for (auto& p : points)
        p = {rng.uniform_real(), rng.uniform_real() * 0.025};
    return points;
}

bool valid_individual(const Individual& ind, const Graph& g, int k_max) {
    if (ind.genes.empty() || ind.genes.size() > static_cast<std::size_t>(k_max))
        return false;
    std::set<NodeId> unique(ind.genes.begin(), ind.genes.end());
    if (unique.size() != ind.genes.size())
        return false;
    for (const NodeId v : ind.genes)
        if (v >= g.node_count())
            return false;
    return true;
}

}  // namespace

TEST_CASE("dominates worked examples") {
    CHECK(dominates({0.5, 0.01}, {0.4, 0.02}));
    CHECK(!dominates({0.5, 0.01}, {0.5, 0.01}));
    CHECK(!dominates({0.5, 0.02}, {0.6, 0.01}));
}

TEST_CASE("evaluate_individual worked examples") {
    MoeaParams params;
    params.n_sims = 30;

    // p=1 on a connected graph reaches everything.
    const Graph connected = testutil::path_graph(6);
    Individual ind;
    ind.genes = {2};
    const Fitness full =
        evaluate_individual(connected, ind, PropagationModel::ic(1.0), params, 1);
    CHECK(full.influence_fraction == doctest::Approx(1.0));
    CHECK(full.seed_fraction == doctest::Approx(1.0 / 6.0));

    // p=0 keeps exactly the seeds.
    Individual two;
    two.genes = {0, 3};
    const Fitness frozen =
        evaluate_individual(connected, two, PropagationModel::ic(0.0), params, 2);
    CHECK(frozen.influence_fraction == doctest::Approx(2.0 / 6.0));
    CHECK(frozen.seed_fraction == doctest::Approx(2.0 / 6.0));

    // A singleton seed on an isolated node scores (1/n, 1/n).
    const Graph lonely = testutil::make_graph(4, {{1, 2}});
    Individual iso;
    iso.genes = {0};
    const Fitness f = evaluate_individual(lonely, iso, PropagationModel::ic(0.5), params, 3);
    CHECK(f.influence_fraction == doctest::Approx(0.25));
    CHECK(f.seed_fraction == doctest::Approx(0.25));
}

TEST_CASE("crossover_one_point_at performs the mechanical swap") {
    testutil::Rng rng(1);
    Individual a, b;
    a.genes = {1, 2};
    b.genes = {3, 4};
    const auto [c1, c2] = crossover_one_point_at(a, b, 1, 1, 10, rng);
    CHECK(c1.genes == std::vector<NodeId>{1, 4});
    CHECK(c2.genes == std::vector<NodeId>{3, 2});
}

TEST_CASE("crossover drops duplicate genes keeping the first occurrence") {
    testutil::Rng rng(2);
    Individual a, b;
    a.genes = {1, 2};
    b.genes = {2, 3};
    const auto [c1, c2] = crossover_one_point_at(a, b, 2, 0, 10, rng);
    // c1 = [1,2] + [2,3] -> dedup -> [1,2,3]
    CHECK(c1.genes == std::vector<NodeId>{1, 2, 3});
    CHECK(c2.genes.empty() == false);
    for (const auto& child : {c1, c2}) {
        std::set<NodeId> unique(child.genes.begin(), child.genes.end());
        CHECK(unique.size() == child.genes.size());
    }
}

TEST_CASE("crossover truncates to k_max and repairs empty children") {
    testutil::Rng rng(3);
    Individual a, b;
    a.genes = {1, 2, 3};
    b.genes = {4, 5, 6};
    const auto [c1, c2] = crossover_one_point_at(a, b, 3, 0, 4, rng);
    CHECK(c1.genes.size() <= 4);  // [1,2,3,4,5,6] truncated
    CHECK(c1.genes == std::vector<NodeId>{1, 2, 3, 4});

    const auto [e1, e2] = crossover_one_point_at(a, b, 0, 3, 4, rng);
    // e1 = [] + [] -> repaired with one random parent gene.
    CHECK(e1.genes.size() == 1);
    const NodeId repaired = e1.genes[0];
    CHECK(repaired >= 1);
    CHECK(repaired <= 6);
}

TEST_CASE("crossover on identical parents yields subsets of the parent genes") {
    testutil::Rng rng(4);
    Individual a;
    a.genes = {5, 7, 9};
    for (int round = 0; round < 20; ++round) {
        const auto [c1, c2] = crossover_one_point(a, a, 10, rng);
        for (const auto& child : {c1, c2}) {
            CHECK(!child.genes.empty());
            std::set<NodeId> unique(child.genes.begin(), child.genes.end());
            CHECK(unique.size() == child.genes.size());
            for (const NodeId v : child.genes)
                CHECK((v == 5 || v == 7 || v == 9));
        }
    }
}

TEST_CASE("mutate respects applicability rules") {
    const Graph g = testutil::random_graph(20, 30, 1);
    MoeaParams params;
    params.mutation_rate = 1.0;

    // Length-1 individuals never lose their only gene.
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        testutil::Rng rng(seed);
        Individual ind;
        ind.genes = {4};
        const Individual out = mutate(ind, g, params, 5, rng);
        CHECK(!out.genes.empty());
    }
    // Length-k_max individuals never grow.
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        testutil::Rng rng(seed);
        Individual ind;
        ind.genes = {1, 2, 3};
        const Individual out = mutate(ind, g, params, 3, rng);
        CHECK(out.genes.size() <= 3);
    }
    // Zero rate is the identity.
    params.mutation_rate = 0.0;
    testutil::Rng rng(9);
    Individual ind;
    ind.genes = {1, 2};
    CHECK(mutate(ind, g, params, 3, rng).genes == ind.genes);
}

TEST_CASE("mutate outputs stay valid individuals") {
    const Graph g = testutil::random_graph(30, 60, 2);
    MoeaParams params;
    params.mutation_rate = 1.0;
    testutil::Rng rng(5);
    Individual ind;
    ind.genes = {0, 5, 9};
    for (int round = 0; round < 200; ++round) {
        ind = mutate(std::move(ind), g, params, 6, rng);
        CHECK(valid_individual(ind, g, 6));
    }
}

TEST_CASE("smart initialisation keeps the star hub in every pool draw") {
    // Single-node influence on a star is maximised by the hub for any model
    // with p bounded away from 0/1, so the hub must survive the 50% filter
    // and, with k_max=1, dominate degree-weighted sampling.
    const Graph g = testutil::star_graph(9);
    MoeaParams params;
    params.population_size = 20;
    params.n_sims = 100;
    params.k_max_fraction = 0.0;  // force k_max = 1
    const auto pop = smart_initialize(g, PropagationModel::ic(0.5), params, 77);
    REQUIRE(pop.size() == 20);
    std::size_t hub_draws = 0;
    for (const auto& ind : pop) {
        CHECK(ind.genes.size() == 1);
        hub_draws += ind.genes[0] == 0 ? 1 : 0;
    }
    // Hub degree 9 vs leaf degree 1: expect a large majority of hub draws.
    CHECK(hub_draws >= 10);
}

TEST_CASE("smart initialisation returns exactly population_size individuals") {
    const Graph g = testutil::random_graph(40, 100, 3);
    MoeaParams params;
    params.population_size = 100;
    params.n_sims = 20;
    const auto pop = smart_initialize(g, PropagationModel::ic(0.1), params, 5);
    CHECK(pop.size() == 100);
    const int k_max = max_seed_set_size(params, g.node_count());
    for (const auto& ind : pop)
        CHECK(valid_individual(ind, g, k_max));
}

TEST_CASE("fast non-dominated sort matches the peeling oracle") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto points = random_points(20, seed);
        const auto got = fast_non_dominated_sort(points);
        const auto expected = nd_sort_oracle(points);
        REQUIRE(got.size() == expected.size());
        for (std::size_t r = 0; r < got.size(); ++r) {
            auto a = got[r];
            auto b = expected[r];
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            CHECK(a == b);
        }
    }
}

TEST_CASE("crowding distances match the direct oracle and mark boundaries") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto points = random_points(15, seed);
        const auto fronts = fast_non_dominated_sort(points);
        for (const auto& front : fronts) {
            const auto got = crowding_distances(points, front);
            const auto expected = crowding_oracle(points, front);
            REQUIRE(got.size() == expected.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                if (std::isinf(expected[i]))
                    CHECK(std::isinf(got[i]));
                else
                    CHECK(got[i] == doctest::Approx(expected[i]));
            }
        }
    }
}

TEST_CASE("archive keeps one representative per distinct point") {
    ParetoArchive archive;
    const std::vector<NodeId> s1{1}, s2{2}, s3{3};
    CHECK(archive.add({0.5, 0.01}, s1));
    CHECK(!archive.add({0.5, 0.01}, s2));  // duplicate point: first stays
    CHECK(archive.entries()[0].seeds == s1);
    CHECK(!archive.add({0.4, 0.02}, s2));  // dominated
    CHECK(archive.add({0.6, 0.005}, s3));  // dominates everything so far
    REQUIRE(archive.entries().size() == 1);
    CHECK(archive.entries()[0].seeds == s3);
    CHECK(archive.add({0.8, 0.02}, s2));
    // Mutual non-domination invariant.
    for (const auto& a : archive.entries())
        for (const auto& b : archive.entries())
            if (&a != &b)
                CHECK(!dominates(a.point, b.point));
}

TEST_CASE("a 3-node path with IC p=1 yields the full-influence singleton point") {
    const Graph g = testutil::path_graph(3);
    MoeaParams params;
    params.population_size = 8;
    params.generations = 1;
    params.n_sims = 5;
    const NsgaResult r = nsga2_run(g, PropagationModel::ic(1.0), params, 3);
    bool found = false;
    for (const auto& e : r.front) {
        if (e.point.influence_fraction == doctest::Approx(1.0) &&
            e.point.seed_fraction == doctest::Approx(1.0 / 3.0))
            found = true;
    }
    CHECK(found);
}

TEST_CASE("archive hypervolume trace is non-decreasing and genomes stay valid") {
    const auto net = testutil::make_power_law_sbm(120, 2, 2.2, 2, 20, 0.1, 3);
    MoeaParams params;
    params.population_size = 16;
    params.generations = 12;
    params.n_sims = 5;
    const int k_max = max_seed_set_size(params, net.graph.node_count());
    const double hv_ref = std::max(
        params.k_max_fraction,
        static_cast<double>(k_max) / static_cast<double>(net.graph.node_count()));
    bool all_valid = true;
    const NsgaResult r = nsga2_run(net.graph, PropagationModel::ic(0.1), params, 11,
                                   [&](const GenerationStats& stats) {
                                       for (const auto& ind : stats.population)
                                           all_valid &= valid_individual(ind, net.graph, k_max);
                                       for (const auto& e : stats.archive)
                                           all_valid &= e.point.seed_fraction <= hv_ref + 1e-12;
                                   });
    CHECK(all_valid);
    REQUIRE(r.archive_hv_trace.size() == 13);
    for (std::size_t i = 1; i < r.archive_hv_trace.size(); ++i)
        CHECK(r.archive_hv_trace[i] >= r.archive_hv_trace[i - 1] - 1e-15);
}

TEST_CASE("seed fractions never exceed the k_max bound") {
    const auto net = testutil::make_power_law_sbm(200, 2, 2.2, 2, 20, 0.1, 9);
    MoeaParams params;
    params.population_size = 12;
    params.generations = 8;
    params.n_sims = 4;
    const NsgaResult r = nsga2_run(net.graph, PropagationModel::ic(0.05), params, 21);
    const double bound =
        static_cast<double>(r.k_max) / static_cast<double>(net.graph.node_count());
    for (const auto& e : r.front) {
        CHECK(e.point.seed_fraction <= bound + 1e-12);
        CHECK(e.point.seed_fraction <= r.hv_ref_seed_fraction + 1e-12);
    }
}

TEST_CASE("identical seeds give identical fronts, independent of threads") {
    const auto net = testutil::make_power_law_sbm(150, 2, 2.2, 2, 20, 0.1, 1);
    MoeaParams params;
    params.population_size = 10;
    params.generations = 6;
    params.n_sims = 4;
    const int saved = parallel::thread_budget();
    parallel::set_thread_budget(1);
    const NsgaResult a = nsga2_run(net.graph, PropagationModel::ic(0.1), params, 42);
    parallel::set_thread_budget(3);
    const NsgaResult b = nsga2_run(net.graph, PropagationModel::ic(0.1), params, 42);
    parallel::set_thread_budget(saved);
    REQUIRE(a.front.size() == b.front.size());
    for (std::size_t i = 0; i < a.front.size(); ++i) {
        CHECK(a.front[i].point == b.front[i].point);
        CHECK(a.front[i].seeds == b.front[i].seeds);
    }
    CHECK(a.total_attempts == b.total_attempts);
}
