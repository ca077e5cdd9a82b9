#include "imscale/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "imscale/rng.hpp"

namespace imscale {

Partition Partition::from_assignment(std::vector<std::uint32_t> raw) {
    Partition p;
    std::vector<std::uint32_t> remap(raw.size(), static_cast<std::uint32_t>(-1));
    std::uint32_t next = 0;
    p.assignment.resize(raw.size());
    for (std::size_t v = 0; v < raw.size(); ++v) {
        const std::uint32_t c = raw[v];
        if (c >= raw.size())
            throw std::invalid_argument("community id out of range");
        if (remap[c] == static_cast<std::uint32_t>(-1)) {
            remap[c] = next++;
            p.communities.emplace_back();
        }
        p.assignment[v] = remap[c];
        p.communities[remap[c]].push_back(static_cast<NodeId>(v));
    }
    return p;
}

double modularity(const Graph& g, const Partition& p) {
    const std::size_t n = g.node_count();
    if (p.assignment.size() != n)
        throw std::invalid_argument("partition does not cover the graph");
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0)
        throw std::invalid_argument("modularity undefined for an edgeless graph");

    const std::size_t c_count = p.community_count();
    std::vector<double> intra(c_count, 0.0);
    std::vector<double> total_degree(c_count, 0.0);
    for (NodeId u = 0; u < n; ++u) {
        const std::uint32_t cu = p.assignment[u];
        if (cu >= c_count)
            throw std::invalid_argument("partition assignment out of range");
        total_degree[cu] += static_cast<double>(g.degree(u));
        for (const NodeId v : g.neighbors(u)) {
            if (u < v && p.assignment[v] == cu)
                intra[cu] += 1.0;
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < c_count; ++c) {
        const double frac = total_degree[c] / (2.0 * m);
        q += intra[c] / m - frac * frac;
    }
    return q;
}

namespace {

// Weighted multigraph for the aggregation levels. Self-loops are kept apart
// from the adjacency; strength counts them twice.
struct LevelGraph {
    std::size_t n = 0;
    double total_weight = 0.0;  // each edge once, self-loops once
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_loop;
    std::vector<double> strength;
};

LevelGraph lift(const Graph& g) {
    LevelGraph lg;
    lg.n = g.node_count();
    lg.total_weight = static_cast<double>(g.edge_count());
    lg.adj.resize(lg.n);
    lg.self_loop.assign(lg.n, 0.0);
    lg.strength.resize(lg.n);
    for (NodeId v = 0; v < lg.n; ++v) {
        lg.adj[v].reserve(g.degree(v));
        for (const NodeId w : g.neighbors(v))
            lg.adj[v].emplace_back(w, 1.0);
        lg.strength[v] = static_cast<double>(g.degree(v));
    }
    return lg;
}

// Scratch accumulator for edge weights from one node into communities.
struct NeighbourWeights {
    std::vector<double> weight;
    std::vector<std::uint32_t> touched;

    explicit NeighbourWeights(std::size_t slots) : weight(slots, 0.0) {}

    void add(std::uint32_t c, double w) {
        if (weight[c] == 0.0)
            touched.push_back(c);
        weight[c] += w;
    }
    void clear() {
        for (const std::uint32_t c : touched)
            weight[c] = 0.0;
        touched.clear();
    }
};

// Queue-based local moving. Returns true if any node changed community.
bool move_nodes(const LevelGraph& lg, std::vector<std::uint32_t>& comm, Rng& rng) {
    const std::size_t n = lg.n;
    const double two_m = 2.0 * lg.total_weight;

    std::vector<double> comm_strength(n, 0.0);
    std::vector<std::size_t> comm_size(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        comm_strength[comm[v]] += lg.strength[v];
        comm_size[comm[v]] += 1;
    }
    std::set<std::uint32_t> free_ids;
    for (std::uint32_t c = 0; c < n; ++c) {
        if (comm_size[c] == 0)
            free_ids.insert(c);
    }

    std::vector<NodeId> queue(n);
    std::iota(queue.begin(), queue.end(), 0);
    rng.shuffle(queue);
    std::vector<char> queued(n, 1);
    std::size_t head = 0;

    NeighbourWeights nw(n);
    bool moved_any = false;
    while (head < queue.size()) {
        const NodeId v = queue[head++];
        queued[v] = 0;
        const std::uint32_t old_c = comm[v];
        const double k_v = lg.strength[v];

        nw.clear();
        nw.add(old_c, 0.0);  // staying is always a candidate
        for (const auto& [w, weight] : lg.adj[v])
            nw.add(comm[w], weight);

        comm_strength[old_c] -= k_v;
        comm_size[old_c] -= 1;

        // gain(c) = w(v,c) - k_v * strength(c) / 2m, up to a common 1/m.
        std::uint32_t best_c = old_c;
        double best_gain = nw.weight[old_c] - k_v * comm_strength[old_c] / two_m;
        for (const std::uint32_t c : nw.touched) {
            if (c == old_c)
                continue;
            const double gain = nw.weight[c] - k_v * comm_strength[c] / two_m;
            if (gain > best_gain || (gain == best_gain && c < best_c && best_c != old_c)) {
                best_gain = gain;
                best_c = c;
            }
        }
        // A fresh singleton community has gain exactly 0.
        if (!free_ids.empty() && best_gain < 0.0 && comm_size[old_c] > 0) {
            best_c = *free_ids.begin();
            best_gain = 0.0;
        }

        comm[v] = best_c;
        comm_strength[best_c] += k_v;
        comm_size[best_c] += 1;
        if (comm_size[best_c] == 1)
            free_ids.erase(best_c);
        if (comm_size[old_c] == 0)
            free_ids.insert(old_c);

        if (best_c != old_c) {
            moved_any = true;
            for (const auto& [w, weight] : lg.adj[v]) {
                (void)weight;
                if (comm[w] != best_c && !queued[w]) {
                    queued[w] = 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return moved_any;
}

// Leiden refinement: inside every community of `comm`, well-connected nodes
// are merged into sub-communities; merge targets are sampled proportionally
// to exp(gain/theta) among the non-degrading candidates.
std::vector<std::uint32_t> refine_partition(const LevelGraph& lg,
                                            const std::vector<std::uint32_t>& comm, Rng& rng) {
    constexpr double kTheta = 0.01;
    const std::size_t n = lg.n;
    const double m = lg.total_weight;
    const double two_m = 2.0 * m;

    std::vector<std::uint32_t> refined(n);
    std::iota(refined.begin(), refined.end(), 0);

    std::vector<double> comm_total(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        comm_total[comm[v]] += lg.strength[v];

    // Per-node weight into its own community (excluding itself).
    std::vector<double> w_within(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto& [w, weight] : lg.adj[v]) {
            if (comm[w] == comm[v])
                w_within[v] += weight;
        }
    }

    // Per refined sub-community: total strength, cut to the rest of its
    // parent community, and size.
    std::vector<double> sub_strength(lg.strength);
    std::vector<double> sub_cut(w_within);
    std::vector<std::size_t> sub_size(n, 1);

    std::vector<std::vector<NodeId>> members(n);
    for (std::size_t v = 0; v < n; ++v)
        members[comm[v]].push_back(static_cast<NodeId>(v));

    NeighbourWeights nw(n);
    std::vector<double> cand_weight;
    std::vector<std::uint32_t> cand_id;
    for (std::size_t c = 0; c < n; ++c) {
        if (members[c].size() < 2)
            continue;
        const double comm_strength = comm_total[c];
        auto order = members[c];
        rng.shuffle(order);
        for (const NodeId v : order) {
            if (sub_size[refined[v]] != 1)
                continue;  // only still-singleton nodes merge
            const double k_v = lg.strength[v];
            // Node must be well connected within its community.
            if (w_within[v] < k_v * (comm_strength - k_v) / two_m)
                continue;

            nw.clear();
            for (const auto& [w, weight] : lg.adj[v]) {
                if (comm[w] == comm[v] && refined[w] != refined[v])
                    nw.add(refined[w], weight);
            }
            cand_weight.clear();
            cand_id.clear();
            double best = 0.0;
            for (const std::uint32_t t : nw.touched) {
                // Candidate sub-community must itself be well connected.
                if (sub_cut[t] < sub_strength[t] * (comm_strength - sub_strength[t]) / two_m)
                    continue;
                const double gain = nw.weight[t] / m - k_v * sub_strength[t] / (two_m * m);
                if (gain < 0.0)
                    continue;
                cand_id.push_back(t);
                cand_weight.push_back(gain);
                best = std::max(best, gain);
            }
            if (cand_id.empty())
                continue;
            double total = 0.0;
            for (double& wgt : cand_weight) {
                wgt = std::exp((wgt - best) / kTheta);
                total += wgt;
            }
            const double draw = rng.uniform_real() * total;
            double acc = 0.0;
            std::uint32_t target = cand_id.back();
            for (std::size_t i = 0; i < cand_id.size(); ++i) {
                acc += cand_weight[i];
                if (draw < acc) {
                    target = cand_id[i];
                    break;
                }
            }

            const double w_v_t = nw.weight[target];
            sub_size[refined[v]] = 0;
            refined[v] = target;
            sub_size[target] += 1;
            sub_strength[target] += k_v;
            sub_cut[target] += w_within[v] - 2.0 * w_v_t;
        }
    }
    return refined;
}

// Contracts refined sub-communities into single nodes. Aggregate ids follow
// first appearance in node order. Returns the new graph and the node -> agg
// id map.
std::pair<LevelGraph, std::vector<std::uint32_t>> aggregate(
    const LevelGraph& lg, const std::vector<std::uint32_t>& refined) {
    const std::size_t n = lg.n;
    std::vector<std::uint32_t> agg_id(n, static_cast<std::uint32_t>(-1));
    std::uint32_t next = 0;
    std::vector<std::uint32_t> node_to_agg(n);
    for (std::size_t v = 0; v < n; ++v) {
        const std::uint32_t r = refined[v];
        if (agg_id[r] == static_cast<std::uint32_t>(-1))
            agg_id[r] = next++;
        node_to_agg[v] = agg_id[r];
    }

    LevelGraph out;
    out.n = next;
    out.total_weight = lg.total_weight;
    out.adj.resize(next);
    out.self_loop.assign(next, 0.0);
    out.strength.assign(next, 0.0);

    NeighbourWeights nw(next);
    std::vector<std::vector<NodeId>> members(next);
    for (std::size_t v = 0; v < n; ++v)
        members[node_to_agg[v]].push_back(static_cast<NodeId>(v));
    for (std::uint32_t a = 0; a < next; ++a) {
        nw.clear();
        double loop = 0.0;
        for (const NodeId v : members[a]) {
            loop += lg.self_loop[v];
            for (const auto& [w, weight] : lg.adj[v]) {
                const std::uint32_t b = node_to_agg[w];
                if (b == a)
                    loop += weight / 2.0;  // internal edge seen from both ends
                else
                    nw.add(b, weight);
            }
        }
        out.self_loop[a] = loop;
        std::vector<std::pair<std::uint32_t, double>> edges(nw.touched.size());
        for (std::size_t i = 0; i < nw.touched.size(); ++i)
            edges[i] = {nw.touched[i], nw.weight[nw.touched[i]]};
        std::sort(edges.begin(), edges.end());
        double s = 2.0 * loop;
        for (const auto& [b, weight] : edges)
            s += weight;
        out.adj[a] = std::move(edges);
        out.strength[a] = s;
    }
    return {std::move(out), std::move(node_to_agg)};
}

std::size_t distinct_count(const std::vector<std::uint32_t>& xs) {
    std::vector<char> seen(xs.size(), 0);
    std::size_t count = 0;
    for (const std::uint32_t x : xs) {
        if (!seen[x]) {
            seen[x] = 1;
            ++count;
        }
    }
    return count;
}

}  // namespace

Partition detect_communities(const Graph& g, std::uint64_t rng_seed,
                             std::vector<double>* quality_trace) {
    const std::size_t n = g.node_count();
    if (n == 0)
        throw std::invalid_argument("detect_communities: graph is empty");
    if (g.edge_count() == 0) {
        std::vector<std::uint32_t> singleton(n);
        std::iota(singleton.begin(), singleton.end(), 0);
        return Partition::from_assignment(std::move(singleton));
    }

    Rng rng(rng_seed);
    LevelGraph level = lift(g);
    std::vector<std::uint32_t> comm(level.n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<std::uint32_t> node_to_agg(n);
    std::iota(node_to_agg.begin(), node_to_agg.end(), 0);

    double quality = 0.0;
    constexpr int kMaxLevels = 64;
    for (int iter = 0; iter < kMaxLevels; ++iter) {
        move_nodes(level, comm, rng);

        std::vector<std::uint32_t> flat(n);
        for (std::size_t v = 0; v < n; ++v)
            flat[v] = comm[node_to_agg[v]];
        Partition snapshot = Partition::from_assignment(flat);
        quality = modularity(g, snapshot);
        if (quality_trace)
            quality_trace->push_back(quality);

        const std::size_t n_comms = distinct_count(comm);
        if (n_comms == level.n)
            break;  // every aggregate node is alone: converged

        const auto refined = refine_partition(level, comm, rng);
        if (distinct_count(refined) == level.n)
            break;  // refinement merged nothing; aggregation would not shrink

        auto [next_level, to_agg] = aggregate(level, refined);
        std::vector<std::uint32_t> next_comm(next_level.n);
        for (std::size_t v = 0; v < level.n; ++v)
            next_comm[to_agg[v]] = comm[v];
        // Compact community ids so they index into the new level's arrays.
        std::vector<std::uint32_t> remap(level.n, static_cast<std::uint32_t>(-1));
        std::uint32_t next_id = 0;
        for (std::uint32_t& c : next_comm) {
            if (remap[c] == static_cast<std::uint32_t>(-1))
                remap[c] = next_id++;
            c = remap[c];
        }
        for (std::size_t v = 0; v < n; ++v)
            node_to_agg[v] = to_agg[node_to_agg[v]];
        level = std::move(next_level);
        comm = std::move(next_comm);
    }

    std::vector<std::uint32_t> flat(n);
    for (std::size_t v = 0; v < n; ++v)
        flat[v] = comm[node_to_agg[v]];
    Partition result = Partition::from_assignment(std::move(flat));
    result.quality = quality;
    return result;
}

std::pair<Graph, Partition> filter_small_communities(const Graph& g, const Partition& p,
                                                     std::size_t min_size) {
    if (min_size < 1)
        throw std::invalid_argument("filter_small_communities: min_size must be >= 1");
    if (p.assignment.size() != g.node_count())
        throw std::invalid_argument("partition does not cover the graph");

    std::vector<std::uint32_t> comm_remap(p.community_count(), static_cast<std::uint32_t>(-1));
    std::uint32_t next = 0;
    std::vector<NodeId> keep;
    for (std::size_t c = 0; c < p.community_count(); ++c) {
        if (p.communities[c].size() >= min_size)
            comm_remap[c] = next++;
    }
    if (next == 0)
        throw std::runtime_error("scaling factor exceeds every community size");
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (comm_remap[p.assignment[v]] != static_cast<std::uint32_t>(-1))
            keep.push_back(v);
    }

    std::vector<NodeId> old_to_new;
    Graph sub = induced_subgraph(g, keep, &old_to_new);
    std::vector<std::uint32_t> assignment(keep.size());
    for (const NodeId v : keep)
        assignment[old_to_new[v]] = comm_remap[p.assignment[v]];
    Partition fp = Partition::from_assignment(std::move(assignment));
    if (sub.edge_count() > 0)
        fp.quality = modularity(sub, fp);
    return {std::move(sub), std::move(fp)};
}

}  // namespace imscale
