#include "imscale/downscale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "imscale/rng.hpp"

namespace imscale {

namespace {

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

struct MeanStd {
    double mean = 0.0;
    double std_dev = 0.0;  // population form
};

MeanStd mean_std(std::span<const std::size_t> values) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0, sq = 0.0;
    for (const std::size_t v : values) {
        sum += static_cast<double>(v);
        sq += static_cast<double>(v) * static_cast<double>(v);
    }
    const double mean = sum / n;
    const double var = std::max(0.0, sq / n - mean * mean);
    return {mean, std::sqrt(var)};
}

// Weighted endpoint sampler for one block: cumulative target degrees with a
// uniform fallback when every propensity is zero.
struct BlockSampler {
    std::vector<double> cumulative;
    double total = 0.0;
    std::size_t size = 0;

    explicit BlockSampler(std::span<const std::size_t> degrees) {
        size = degrees.size();
        cumulative.resize(size);
        for (std::size_t i = 0; i < size; ++i) {
            total += static_cast<double>(degrees[i]);
            cumulative[i] = total;
        }
    }

    std::size_t draw(Rng& rng) const {
        if (total <= 0.0)
            return static_cast<std::size_t>(rng.uniform_int(size));
        const double target = rng.uniform_real() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), size - 1);
    }
};

}  // namespace

std::vector<std::size_t> sample_scaled_degrees(std::span<const std::size_t> original_degrees,
                                               int s, int num_candidates, std::uint64_t rng_seed) {
    if (s < 1)
        throw std::invalid_argument("sample_scaled_degrees: s must be >= 1");
    if (num_candidates < 1)
        throw std::invalid_argument("sample_scaled_degrees: num_candidates must be >= 1");
    if (original_degrees.size() < static_cast<std::size_t>(s))
        throw std::invalid_argument("sample_scaled_degrees: community smaller than s");
    const std::size_t target_size = std::max<std::size_t>(
        1, round_half_up(static_cast<double>(original_degrees.size()) / static_cast<double>(s)));

    const MeanStd reference = mean_std(original_degrees);
    Rng rng(rng_seed);
    std::vector<std::size_t> best, candidate(target_size);
    double best_distance = 0.0;
    for (int c = 0; c < num_candidates; ++c) {
        for (std::size_t i = 0; i < target_size; ++i)
            candidate[i] =
                original_degrees[static_cast<std::size_t>(rng.uniform_int(original_degrees.size()))];
        const MeanStd got = mean_std(candidate);
        const double dm = got.mean - reference.mean;
        const double ds = got.std_dev - reference.std_dev;
        const double distance = dm * dm + ds * ds;
        if (best.empty() || distance < best_distance) {
            best = candidate;
            best_distance = distance;
        }
    }
    return best;
}

ScaledSpec build_scaled_spec(const Graph& g, const Partition& p, int s, int num_candidates,
                             std::uint64_t rng_seed) {
    if (p.assignment.size() != g.node_count())
        throw std::invalid_argument("build_scaled_spec: partition does not cover the graph");
    const std::size_t c_count = p.community_count();
    for (const auto& community : p.communities) {
        if (community.size() < static_cast<std::size_t>(s))
            throw std::invalid_argument(
                "build_scaled_spec: community smaller than s (filter first)");
    }

    ScaledSpec spec;
    spec.s = s;
    spec.target_sizes.resize(c_count);
    spec.target_degrees.resize(c_count);
    for (std::size_t c = 0; c < c_count; ++c) {
        const auto& members = p.communities[c];
        spec.target_sizes[c] = std::max<std::size_t>(
            1, round_half_up(static_cast<double>(members.size()) / static_cast<double>(s)));
        std::vector<std::size_t> degrees(members.size());
        for (std::size_t i = 0; i < members.size(); ++i)
            degrees[i] = g.degree(members[i]);
        spec.target_degrees[c] =
            sample_scaled_degrees(degrees, s, num_candidates, derive_seed(rng_seed, "degrees", c));
        if (spec.target_degrees[c].size() != spec.target_sizes[c])
            throw std::logic_error("build_scaled_spec: size mismatch");
    }

    std::vector<std::vector<std::size_t>> raw(c_count, std::vector<std::size_t>(c_count, 0));
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const std::uint32_t cu = p.assignment[u];
        for (const NodeId v : g.neighbors(u)) {
            if (u < v) {
                const std::uint32_t cv = p.assignment[v];
                ++raw[cu][cv];
                if (cu != cv)
                    ++raw[cv][cu];
            }
        }
    }
    spec.block_edges.assign(c_count, std::vector<std::size_t>(c_count, 0));
    for (std::size_t r = 0; r < c_count; ++r) {
        for (std::size_t c = r; c < c_count; ++c) {
            const std::size_t scaled =
                round_half_up(static_cast<double>(raw[r][c]) / static_cast<double>(s));
            spec.block_edges[r][c] = scaled;
            spec.block_edges[c][r] = scaled;
        }
    }
    return spec;
}

ScaledGraph generate_sbm(const ScaledSpec& spec, std::uint64_t rng_seed) {
    const std::size_t c_count = spec.target_sizes.size();
    if (spec.target_degrees.size() != c_count || spec.block_edges.size() != c_count)
        throw std::invalid_argument("generate_sbm: inconsistent spec");

    // Nodes are laid out block by block.
    std::vector<std::size_t> block_start(c_count + 1, 0);
    for (std::size_t c = 0; c < c_count; ++c) {
        if (spec.target_sizes[c] == 0)
            throw std::invalid_argument("generate_sbm: empty target block");
        if (spec.target_degrees[c].size() != spec.target_sizes[c])
            throw std::invalid_argument("generate_sbm: degree list size mismatch");
        block_start[c + 1] = block_start[c] + spec.target_sizes[c];
    }
    const std::size_t n = block_start[c_count];

    std::vector<BlockSampler> samplers;
    samplers.reserve(c_count);
    for (std::size_t c = 0; c < c_count; ++c)
        samplers.emplace_back(spec.target_degrees[c]);

    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<BlockPlacement> placements;
    std::unordered_set<std::uint64_t> used;
    const auto key = [](NodeId a, NodeId b) {
        if (a > b)
            std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | b;
    };

    for (std::size_t r = 0; r < c_count; ++r) {
        for (std::size_t c = r; c < c_count; ++c) {
            const std::size_t quota = spec.block_edges[r][c];
            if (quota == 0)
                continue;
            Rng rng(derive_seed(rng_seed, "block", r, c));
            std::size_t placed = 0;
            std::size_t budget = 100 * quota;
            while (placed < quota && budget > 0) {
                --budget;
                const NodeId u =
                    static_cast<NodeId>(block_start[r] + samplers[r].draw(rng));
                const NodeId v =
                    static_cast<NodeId>(block_start[c] + samplers[c].draw(rng));
                if (u == v)
                    continue;
                const std::uint64_t k = key(u, v);
                if (used.contains(k))
                    continue;
                used.insert(k);
                edges.emplace_back(u, v);
                ++placed;
            }
            placements.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c),
                                  quota, placed});
        }
    }

    ScaledGraph out;
    out.graph = Graph::from_edges(n, edges);
    std::vector<std::uint32_t> assignment(n);
    for (std::size_t c = 0; c < c_count; ++c) {
        for (std::size_t v = block_start[c]; v < block_start[c + 1]; ++v)
            assignment[v] = static_cast<std::uint32_t>(c);
    }
    out.partition = Partition::from_assignment(std::move(assignment));
    if (out.graph.edge_count() > 0)
        out.partition.quality = modularity(out.graph, out.partition);
    out.community_map.resize(c_count);
    std::iota(out.community_map.begin(), out.community_map.end(), 0);
    out.placements = std::move(placements);
    return out;
}

ScaledGraph downscale(const Graph& g, const Partition& p, int s, std::uint64_t rng_seed,
                      int num_candidates) {
    const ScaledSpec spec =
        build_scaled_spec(g, p, s, num_candidates, derive_seed(rng_seed, "spec"));
    return generate_sbm(spec, derive_seed(rng_seed, "sbm"));
}

}  // namespace imscale
