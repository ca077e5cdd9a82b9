#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imscale/community.hpp"
#include "imscale/graph.hpp"

namespace imscale {

inline constexpr int kDefaultDegreeSampleCandidates = 1000;

// Recipe for the synthetic network: per-community target sizes and degree
// lists plus the scaled inter/intra-community edge quota matrix.
struct ScaledSpec {
    int s = 1;
    std::vector<std::size_t> target_sizes;                  // round(N_c / s), >= 1
    std::vector<std::vector<std::size_t>> target_degrees;   // one list per community
    std::vector<std::vector<std::size_t>> block_edges;      // C x C, symmetric
};

struct BlockPlacement {
    std::uint32_t block_r = 0;
    std::uint32_t block_c = 0;
    std::size_t requested = 0;
    std::size_t placed = 0;
};

struct ScaledGraph {
    Graph graph;
    Partition partition;                      // block membership
    std::vector<std::uint32_t> community_map;  // scaled community -> original community
    std::vector<BlockPlacement> placements;    // per block pair, upper triangle
};

// Draws num_candidates samples of size round(|original|/s) with replacement
// and returns the one closest to the original in (mean, std) space; ties go
// to the earliest draw.
std::vector<std::size_t> sample_scaled_degrees(std::span<const std::size_t> original_degrees,
                                               int s, int num_candidates, std::uint64_t rng_seed);

// target_sizes[c] = max(1, round(|c|/s)); degrees via sample_scaled_degrees
// per community; block_edges[r][c] = round(e_rc / s).
ScaledSpec build_scaled_spec(const Graph& g, const Partition& p, int s, int num_candidates,
                             std::uint64_t rng_seed);

// Degree-corrected SBM: each block pair places its quota of simple edges,
// endpoints drawn with probability proportional to the target degree within
// the block. Self-loops and duplicates are redrawn within a bounded retry
// budget (100x the quota); unplaceable remainder is reported in placements,
// never looped on.
ScaledGraph generate_sbm(const ScaledSpec& spec, std::uint64_t rng_seed);

// build_scaled_spec + generate_sbm; community_map is the identity on the
// (already filtered) partition's communities.
ScaledGraph downscale(const Graph& g, const Partition& p, int s, std::uint64_t rng_seed,
                      int num_candidates = kDefaultDegreeSampleCandidates);

}  // namespace imscale
