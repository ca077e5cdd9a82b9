#include "imscale/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "imscale/parallel.hpp"

namespace imscale {

namespace {

constexpr double kTolerance = 1e-9;
constexpr int kMaxIterations = 1000;

ScoreMap degree_scores(const Graph& g) {
    ScoreMap scores(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        scores[v] = static_cast<double>(g.degree(v));
    return scores;
}

// Power iteration on A + I; the shift keeps bipartite graphs from
// oscillating without changing the principal eigenvector. Returns the L2
// normalised vector and lambda_max of A.
std::pair<ScoreMap, double> principal_eigenvector(const Graph& g) {
    const std::size_t n = g.node_count();
    ScoreMap x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    ScoreMap next(n, 0.0);
    double shifted_lambda = 1.0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        for (NodeId v = 0; v < n; ++v) {
            double acc = x[v];  // identity shift
            for (const NodeId w : g.neighbors(v))
                acc += x[w];
            next[v] = acc;
        }
        double norm = 0.0;
        for (const double value : next)
            norm += value * value;
        norm = std::sqrt(norm);
        if (norm == 0.0)
            return {ScoreMap(n, 0.0), 0.0};
        double residual = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            next[v] /= norm;
            residual += std::abs(next[v] - x[v]);
        }
        shifted_lambda = norm;
        std::swap(x, next);
        if (residual < kTolerance)
            break;
    }
    return {std::move(x), shifted_lambda - 1.0};
}

ScoreMap pagerank_scores(const Graph& g) {
    const std::size_t n = g.node_count();
    const double damping = kPageRankDamping;
    ScoreMap rank(n, 1.0 / static_cast<double>(n));
    ScoreMap next(n, 0.0);
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            if (g.degree(v) == 0)
                dangling += rank[v];
        }
        const double base = (1.0 - damping + damping * dangling) / static_cast<double>(n);
        for (NodeId v = 0; v < n; ++v) {
            double acc = 0.0;
            for (const NodeId w : g.neighbors(v))
                acc += rank[w] / static_cast<double>(g.degree(w));
            next[v] = base + damping * acc;
        }
        double residual = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            residual += std::abs(next[v] - rank[v]);
        std::swap(rank, next);
        if (residual < kTolerance)
            break;
    }
    return rank;
}

ScoreMap katz_scores(const Graph& g) {
    const std::size_t n = g.node_count();
    const double lambda_max = principal_eigenvector(g).second;
    if (lambda_max <= 0.0)
        return ScoreMap(n, 1.0);  // edgeless: x = beta
    const double alpha = 0.9 / lambda_max;
    ScoreMap x(n, 1.0);
    ScoreMap next(n, 0.0);
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        for (NodeId v = 0; v < n; ++v) {
            double acc = 0.0;
            for (const NodeId w : g.neighbors(v))
                acc += x[w];
            next[v] = 1.0 + alpha * acc;
        }
        double residual = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            residual += std::abs(next[v] - x[v]);
        std::swap(x, next);
        if (residual < kTolerance)
            break;
    }
    return x;
}

ScoreMap closeness_scores(const Graph& g) {
    const std::size_t n = g.node_count();
    ScoreMap scores(n, 0.0);
    if (n == 1)
        return scores;
    parallel::for_chunks(n, [&](std::size_t begin, std::size_t end) {
        std::vector<std::int64_t> dist(n);
        std::vector<NodeId> frontier;
        for (std::size_t s = begin; s < end; ++s) {
            std::fill(dist.begin(), dist.end(), -1);
            dist[s] = 0;
            frontier.assign(1, static_cast<NodeId>(s));
            std::int64_t total = 0;
            std::size_t reached = 1;
            while (!frontier.empty()) {
                std::vector<NodeId> next;
                for (const NodeId v : frontier) {
                    for (const NodeId w : g.neighbors(v)) {
                        if (dist[w] < 0) {
                            dist[w] = dist[v] + 1;
                            total += dist[w];
                            ++reached;
                            next.push_back(w);
                        }
                    }
                }
                frontier = std::move(next);
            }
            if (reached > 1 && total > 0) {
                const double r = static_cast<double>(reached - 1);
                scores[s] = (r / static_cast<double>(total)) *
                            (r / static_cast<double>(n - 1));
            }
        }
    });
    return scores;
}

// Brandes' algorithm. Sources are processed in fixed-size blocks and block
// sums are combined in block order, so the floating-point reduction is
// identical for any thread budget. Blocks are handled in bounded groups to
// cap the memory held for partial sums. Pair contributions are halved at
// the end (each unordered pair is seen from both endpoints).
ScoreMap betweenness_scores(const Graph& g) {
    const std::size_t n = g.node_count();
    constexpr std::size_t kBlock = 64;  // reduction granularity
    constexpr std::size_t kGroup = 64;  // blocks resident at once
    const std::size_t blocks = (n + kBlock - 1) / kBlock;

    ScoreMap scores(n, 0.0);
    std::vector<ScoreMap> group_scores;
    for (std::size_t group_start = 0; group_start < blocks; group_start += kGroup) {
        const std::size_t group_size = std::min(blocks - group_start, kGroup);
        group_scores.assign(group_size, {});

        parallel::for_chunks(group_size, [&](std::size_t bs, std::size_t be) {
            std::vector<NodeId> order;
            order.reserve(n);
            std::vector<std::int64_t> dist(n);
            std::vector<double> sigma(n), delta(n);
            for (std::size_t bi = bs; bi < be; ++bi) {
                ScoreMap local(n, 0.0);
                const std::size_t lo = (group_start + bi) * kBlock;
                const std::size_t hi = std::min(n, lo + kBlock);
                for (std::size_t s = lo; s < hi; ++s) {
                    order.clear();
                    std::fill(dist.begin(), dist.end(), -1);
                    std::fill(sigma.begin(), sigma.end(), 0.0);
                    std::fill(delta.begin(), delta.end(), 0.0);
                    dist[s] = 0;
                    sigma[s] = 1.0;
                    std::queue<NodeId> q;
                    q.push(static_cast<NodeId>(s));
                    while (!q.empty()) {
                        const NodeId v = q.front();
                        q.pop();
                        order.push_back(v);
                        for (const NodeId w : g.neighbors(v)) {
                            if (dist[w] < 0) {
                                dist[w] = dist[v] + 1;
                                q.push(w);
                            }
                            if (dist[w] == dist[v] + 1)
                                sigma[w] += sigma[v];
                        }
                    }
                    for (auto it = order.rbegin(); it != order.rend(); ++it) {
                        const NodeId w = *it;
                        for (const NodeId v : g.neighbors(w)) {
                            if (dist[v] == dist[w] - 1)
                                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                        }
                        if (w != s)
                            local[w] += delta[w];
                    }
                }
                group_scores[bi] = std::move(local);
            }
        });

        for (const ScoreMap& local : group_scores) {
            for (std::size_t v = 0; v < n; ++v)
                scores[v] += local[v];
        }
    }
    for (double& s : scores)
        s /= 2.0;
    return scores;
}

ScoreMap coreness_scores(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> deg = degree_sequence(g);
    const std::size_t max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());

    // Bucket sort nodes by degree, then peel in minimum-degree order.
    std::vector<std::size_t> bin(max_deg + 2, 0);
    for (const std::size_t d : deg)
        ++bin[d];
    std::size_t start = 0;
    for (std::size_t d = 0; d <= max_deg; ++d) {
        const std::size_t count = bin[d];
        bin[d] = start;
        start += count;
    }
    std::vector<NodeId> vert(n);
    std::vector<std::size_t> pos(n);
    for (NodeId v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v;
        ++bin[deg[v]];
    }
    for (std::size_t d = max_deg + 1; d > 0; --d)
        bin[d] = bin[d - 1];
    bin[0] = 0;

    std::vector<std::size_t> core(deg);
    for (std::size_t i = 0; i < n; ++i) {
        const NodeId v = vert[i];
        for (const NodeId u : g.neighbors(v)) {
            if (core[u] > core[v]) {
                const std::size_t du = core[u];
                const std::size_t pu = pos[u];
                const std::size_t pw = bin[du];
                const NodeId w = vert[pw];
                if (u != w) {
                    std::swap(vert[pu], vert[pw]);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                ++bin[du];
                --core[u];
            }
        }
    }
    ScoreMap scores(n);
    for (std::size_t v = 0; v < n; ++v)
        scores[v] = static_cast<double>(core[v]);
    return scores;
}

}  // namespace

ScoreMap compute_centrality(const Graph& g, CentralityKind kind) {
    if (g.node_count() == 0)
        throw std::invalid_argument("compute_centrality: graph is empty");
    switch (kind) {
        case CentralityKind::Degree:
            return degree_scores(g);
        case CentralityKind::Eigenvector:
            return principal_eigenvector(g).first;
        case CentralityKind::PageRank:
            return pagerank_scores(g);
        case CentralityKind::Katz:
            return katz_scores(g);
        case CentralityKind::Closeness:
            return closeness_scores(g);
        case CentralityKind::Betweenness:
            return betweenness_scores(g);
        case CentralityKind::Coreness:
            return coreness_scores(g);
    }
    throw std::logic_error("unknown centrality kind");
}

std::vector<std::uint32_t> community_ranks(const ScoreMap& scores, const Partition& p) {
    if (scores.size() != p.assignment.size())
        throw std::invalid_argument("score map does not cover the partition");
    std::vector<std::uint32_t> ranks(scores.size(), 0);
    for (const auto& community : p.communities) {
        std::vector<NodeId> order(community.begin(), community.end());
        std::sort(order.begin(), order.end(), [&scores](NodeId a, NodeId b) {
            if (scores[a] != scores[b])
                return scores[a] > scores[b];
            return a < b;
        });
        for (std::size_t i = 0; i < order.size(); ++i)
            ranks[order[i]] = static_cast<std::uint32_t>(i + 1);
    }
    return ranks;
}

CentralityKind centrality_from_name(std::string_view name) {
    if (name == "degree")
        return CentralityKind::Degree;
    if (name == "eigenvector")
        return CentralityKind::Eigenvector;
    if (name == "pagerank")
        return CentralityKind::PageRank;
    if (name == "katz")
        return CentralityKind::Katz;
    if (name == "closeness")
        return CentralityKind::Closeness;
    if (name == "betweenness")
        return CentralityKind::Betweenness;
    if (name == "coreness")
        return CentralityKind::Coreness;
    throw std::invalid_argument("unknown centrality: " + std::string(name));
}

std::string_view centrality_name(CentralityKind kind) {
    switch (kind) {
        case CentralityKind::Degree:
            return "degree";
        case CentralityKind::Eigenvector:
            return "eigenvector";
        case CentralityKind::PageRank:
            return "pagerank";
        case CentralityKind::Katz:
            return "katz";
        case CentralityKind::Closeness:
            return "closeness";
        case CentralityKind::Betweenness:
            return "betweenness";
        case CentralityKind::Coreness:
            return "coreness";
    }
    return "unknown";
}

}  // namespace imscale
