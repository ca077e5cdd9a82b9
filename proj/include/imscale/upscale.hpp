#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imscale/cascade.hpp"
#include "imscale/centrality.hpp"
#include "imscale/community.hpp"
#include "imscale/front.hpp"
#include "imscale/graph.hpp"

namespace imscale {

// Rank tables for mapping scaled-network seeds back to the original
// network. `original` is the community-filtered original graph; community_map
// takes a scaled community index to its original community index. The graphs
// are borrowed and must outlive the context; the partitions are copied in.
struct UpscaleContext {
    const Graph* original = nullptr;
    const Graph* scaled = nullptr;
    Partition original_partition;
    Partition scaled_partition;
    std::vector<std::uint32_t> community_map;
    CentralityKind centrality = CentralityKind::PageRank;
    std::vector<std::uint32_t> original_ranks;  // per node, 1-based within community
    std::vector<std::uint32_t> scaled_ranks;
    // Original community members ordered by rank (index r-1 = rank r).
    std::vector<std::vector<NodeId>> original_by_rank;
};

UpscaleContext make_upscale_context(const Graph& original, const Partition& original_partition,
                                    const Graph& scaled, const Partition& scaled_partition,
                                    std::span<const std::uint32_t> community_map,
                                    CentralityKind kind);

struct UpscaleShortfall {
    std::uint32_t scaled_community = 0;
    std::size_t missing = 0;
};

// Expands each scaled seed into the s original-community nodes whose
// normalised ranks (rank / community size) are nearest to the seed's, chosen
// without replacement; distance ties break on ascending node id, and seeds
// are processed in ascending rank order. Rank arithmetic is exact (integer
// cross products), so ties are resolved exactly.
std::vector<NodeId> upscale_seed_set(std::span<const NodeId> scaled_seeds,
                                     const UpscaleContext& ctx, int s,
                                     std::vector<UpscaleShortfall>* shortfalls = nullptr);

struct UpscaleReport {
    std::size_t points_in = 0;
    std::size_t dropped_over_cap = 0;
    std::vector<UpscaleShortfall> shortfalls;
};

// Upscales every seed set of the front, re-evaluates it on the original
// graph (fitness normalised by the original node count), drops points whose
// seed fraction exceeds max_seed_fraction, and Pareto-filters the result.
// Re-evaluation i uses the stream derived from (rng_seed, i).
Front upscale_front(const Front& scaled_front, const UpscaleContext& ctx, int s,
                    const PropagationModel& model, int n_sims, std::uint64_t rng_seed,
                    double max_seed_fraction, std::uint64_t* attempts = nullptr,
                    UpscaleReport* report = nullptr);

}  // namespace imscale
