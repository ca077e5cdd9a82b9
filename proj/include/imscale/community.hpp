#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "imscale/graph.hpp"

namespace imscale {

// Node-to-community assignment. Community indices are contiguous 0..C-1 with
// no empty community; member lists are sorted.
struct Partition {
    std::vector<std::uint32_t> assignment;
    std::vector<std::vector<NodeId>> communities;
    double quality = 0.0;  // modularity of this partition on its graph

    std::size_t community_count() const { return communities.size(); }

    // Compacts arbitrary community ids to 0..C-1 by first appearance in node
    // order and rebuilds member lists. quality is left to the caller.
    static Partition from_assignment(std::vector<std::uint32_t> raw);
};

// Newman modularity: Q = sum_c [ e_c/m - (d_c/2m)^2 ].
double modularity(const Graph& g, const Partition& p);

// Leiden with the modularity quality function: local moving, refinement and
// aggregation iterated until no further gain. Deterministic for a fixed
// seed. quality_trace, if given, receives the flat-partition modularity
// after each outer iteration (non-decreasing).
Partition detect_communities(const Graph& g, std::uint64_t rng_seed,
                             std::vector<double>* quality_trace = nullptr);

// Removes communities with fewer than min_size nodes together with their
// nodes. The returned graph is the induced subgraph with recompacted ids;
// surviving communities are reindexed in ascending original order. Throws if
// nothing survives.
std::pair<Graph, Partition> filter_small_communities(const Graph& g, const Partition& p,
                                                     std::size_t min_size);

}  // namespace imscale
