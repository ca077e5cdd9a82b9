#include "imscale/upscale.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "imscale/evaluate.hpp"
#include "imscale/rng.hpp"

namespace imscale {

UpscaleContext make_upscale_context(const Graph& original, const Partition& original_partition,
                                    const Graph& scaled, const Partition& scaled_partition,
                                    std::span<const std::uint32_t> community_map,
                                    CentralityKind kind) {
    if (community_map.size() != scaled_partition.community_count())
        throw std::invalid_argument("upscale: community map does not cover the scaled partition");
    for (const std::uint32_t c : community_map) {
        if (c >= original_partition.community_count())
            throw std::invalid_argument("upscale: community map target out of range");
    }

    UpscaleContext ctx;
    ctx.original = &original;
    ctx.scaled = &scaled;
    ctx.original_partition = original_partition;
    ctx.scaled_partition = scaled_partition;
    ctx.community_map.assign(community_map.begin(), community_map.end());
    ctx.centrality = kind;

    const ScoreMap original_scores = compute_centrality(original, kind);
    const ScoreMap scaled_scores = compute_centrality(scaled, kind);
    ctx.original_ranks = community_ranks(original_scores, original_partition);
    ctx.scaled_ranks = community_ranks(scaled_scores, scaled_partition);

    ctx.original_by_rank.resize(original_partition.community_count());
    for (std::size_t c = 0; c < original_partition.community_count(); ++c) {
        const auto& members = original_partition.communities[c];
        ctx.original_by_rank[c].resize(members.size());
        for (const NodeId v : members)
            ctx.original_by_rank[c][ctx.original_ranks[v] - 1] = v;
    }
    return ctx;
}

std::vector<NodeId> upscale_seed_set(std::span<const NodeId> scaled_seeds,
                                     const UpscaleContext& ctx, int s,
                                     std::vector<UpscaleShortfall>* shortfalls) {
    if (s < 1)
        throw std::invalid_argument("upscale_seed_set: s must be >= 1");
    const Partition& ps = ctx.scaled_partition;
    const Partition& po = ctx.original_partition;

    // Ascending source rank; community and id break the remaining ties.
    std::vector<NodeId> order(scaled_seeds.begin(), scaled_seeds.end());
    for (const NodeId v : order) {
        if (v >= ps.assignment.size())
            throw std::invalid_argument("upscale_seed_set: seed outside the scaled graph");
    }
    std::sort(order.begin(), order.end(), [&ctx, &ps](NodeId a, NodeId b) {
        if (ctx.scaled_ranks[a] != ctx.scaled_ranks[b])
            return ctx.scaled_ranks[a] < ctx.scaled_ranks[b];
        if (ps.assignment[a] != ps.assignment[b])
            return ps.assignment[a] < ps.assignment[b];
        return a < b;
    });

    std::vector<char> taken(po.assignment.size(), 0);
    std::vector<NodeId> result;
    result.reserve(order.size() * static_cast<std::size_t>(s));
    std::vector<std::pair<std::pair<std::int64_t, NodeId>, NodeId>> ordered;  // (key, node)
    for (const NodeId v : order) {
        const std::uint32_t sc = ps.assignment[v];
        const std::uint32_t oc = ctx.community_map[sc];
        const std::int64_t rank = ctx.scaled_ranks[v];
        const std::int64_t size_s = static_cast<std::int64_t>(ps.communities[sc].size());
        const auto& pool = ctx.original_by_rank[oc];
        const std::int64_t size_o = static_cast<std::int64_t>(pool.size());

        // |rank/size_s - r'/size_o| compared through the exact integer cross
        // product |rank*size_o - r'*size_s|.
        ordered.clear();
        ordered.reserve(pool.size());
        for (std::int64_t r = 1; r <= size_o; ++r) {
            const NodeId u = pool[static_cast<std::size_t>(r - 1)];
            if (taken[u])
                continue;
            const std::int64_t distance = std::llabs(rank * size_o - r * size_s);
            ordered.push_back({{distance, u}, u});
        }
        std::sort(ordered.begin(), ordered.end());
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(s), ordered.size());
        for (std::size_t i = 0; i < take; ++i) {
            taken[ordered[i].second] = 1;
            result.push_back(ordered[i].second);
        }
        if (take < static_cast<std::size_t>(s) && shortfalls)
            shortfalls->push_back({sc, static_cast<std::size_t>(s) - take});
    }
    return result;
}

Front upscale_front(const Front& scaled_front, const UpscaleContext& ctx, int s,
                    const PropagationModel& model, int n_sims, std::uint64_t rng_seed,
                    double max_seed_fraction, std::uint64_t* attempts, UpscaleReport* report) {
    const Graph& original = *ctx.original;
    const double n = static_cast<double>(original.node_count());
    if (report)
        report->points_in = scaled_front.size();

    Front upscaled;
    upscaled.reserve(scaled_front.size());
    for (std::size_t i = 0; i < scaled_front.size(); ++i) {
        std::vector<UpscaleShortfall> shortfalls;
        std::vector<NodeId> seeds = upscale_seed_set(scaled_front[i].seeds, ctx, s, &shortfalls);
        if (report)
            report->shortfalls.insert(report->shortfalls.end(), shortfalls.begin(),
                                      shortfalls.end());
        const double seed_fraction = static_cast<double>(seeds.size()) / n;
        if (seed_fraction > max_seed_fraction) {
            if (report)
                ++report->dropped_over_cap;
            continue;
        }
        const InfluenceEstimate est =
            estimate_influence(original, seeds, model, n_sims, derive_seed(rng_seed, i));
        if (attempts)
            *attempts += est.total_attempts;
        upscaled.push_back({{est.mean_cascade_size / n, seed_fraction}, std::move(seeds)});
    }
    return pareto_filter_front(std::move(upscaled));
}

}  // namespace imscale
