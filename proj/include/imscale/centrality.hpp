#pragma once

#include <string_view>
#include <vector>

#include "imscale/community.hpp"
#include "imscale/graph.hpp"

namespace imscale {

enum class CentralityKind {
    Degree,
    Eigenvector,
    PageRank,
    Katz,
    Closeness,
    Betweenness,
    Coreness,
};

inline constexpr double kPageRankDamping = 0.85;

// Per-node score, finite and non-negative for every kind.
using ScoreMap = std::vector<double>;

// Standard definitions: degree; eigenvector via power iteration (L2
// normalised); PageRank with 0.85 damping and uniform teleport (L1
// normalised); Katz with attenuation 0.9/lambda_max and beta=1; closeness
// with the Wasserman-Faust component correction; Brandes betweenness
// (unnormalised, pair counted once); k-core number by minimum-degree
// peeling. Iterative kinds run to residual < 1e-9 or 1000 iterations.
ScoreMap compute_centrality(const Graph& g, CentralityKind kind);

// Rank of every node within its community, 1 = highest score; ties broken
// by ascending node id.
std::vector<std::uint32_t> community_ranks(const ScoreMap& scores, const Partition& p);

CentralityKind centrality_from_name(std::string_view name);
std::string_view centrality_name(CentralityKind kind);

}  // namespace imscale
