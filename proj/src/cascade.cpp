#include "imscale/cascade.hpp"

#include <algorithm>
#include <stdexcept>

#include "imscale/parallel.hpp"
#include "imscale/rng.hpp"

namespace imscale {

PropagationModel PropagationModel::ic(double p) {
    if (!(p >= 0.0) || !(p <= 1.0))
        throw std::invalid_argument("IC probability must lie in [0, 1]");
    return {Kind::IC, p};
}

namespace {

// Reusable per-worker buffers; simulations on the same graph share them.
struct CascadeScratch {
    std::vector<char> activated;
    std::vector<char> pending;  // added to the current round's frontier
    std::vector<NodeId> frontier;
    std::vector<NodeId> next;

    void reset(std::size_t n) {
        activated.assign(n, 0);
        pending.assign(n, 0);
        frontier.clear();
        next.clear();
    }
};

SimulationResult run_cascade(const Graph& g, std::span<const NodeId> seeds,
                             const PropagationModel& model, Rng& rng, CascadeScratch& scratch) {
    scratch.reset(g.node_count());
    auto& activated = scratch.activated;
    auto& pending = scratch.pending;
    auto& frontier = scratch.frontier;
    auto& next = scratch.next;

    std::size_t cascade_size = seeds.size();
    for (const NodeId s : seeds) {
        activated[s] = 1;
        frontier.push_back(s);
    }
    std::sort(frontier.begin(), frontier.end());

    std::uint64_t attempts = 0;
    const bool weighted = model.kind == PropagationModel::Kind::WC;
    while (!frontier.empty()) {
        next.clear();
        for (const NodeId src : frontier) {
            for (const NodeId dst : g.neighbors(src)) {
                if (activated[dst])
                    continue;
                ++attempts;
                const double p =
                    weighted ? 1.0 / static_cast<double>(g.degree(dst)) : model.p;
                if (rng.uniform_real() < p && !pending[dst]) {
                    pending[dst] = 1;
                    next.push_back(dst);
                }
            }
        }
        for (const NodeId v : next) {
            activated[v] = 1;
            pending[v] = 0;
        }
        cascade_size += next.size();
        std::sort(next.begin(), next.end());
        std::swap(frontier, next);
    }
    return {cascade_size, attempts};
}

void validate_seeds(const Graph& g, std::span<const NodeId> seeds) {
    if (seeds.empty())
        throw std::invalid_argument("seed set is empty");
    std::vector<NodeId> sorted(seeds.begin(), seeds.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!g.valid_node(sorted[i]))
            throw std::invalid_argument("seed id out of range");
        if (i > 0 && sorted[i] == sorted[i - 1])
            throw std::invalid_argument("duplicate seed id");
    }
}

}  // namespace

SimulationResult simulate(const Graph& g, std::span<const NodeId> seeds,
                          const PropagationModel& model, std::uint64_t rng_seed) {
    validate_seeds(g, seeds);
    Rng rng(rng_seed);
    CascadeScratch scratch;
    return run_cascade(g, seeds, model, rng, scratch);
}

InfluenceEstimate estimate_influence(const Graph& g, std::span<const NodeId> seeds,
                                     const PropagationModel& model, int n_sims,
                                     std::uint64_t rng_seed) {
    if (n_sims < 1)
        throw std::invalid_argument("n_sims must be >= 1");
    validate_seeds(g, seeds);

    std::vector<std::size_t> sizes(static_cast<std::size_t>(n_sims));
    std::vector<std::uint64_t> attempts(static_cast<std::size_t>(n_sims));
    parallel::for_chunks(static_cast<std::size_t>(n_sims), [&](std::size_t begin, std::size_t end) {
        CascadeScratch scratch;
        for (std::size_t i = begin; i < end; ++i) {
            Rng rng(derive_seed(rng_seed, i));
            const SimulationResult r = run_cascade(g, seeds, model, rng, scratch);
            sizes[i] = r.cascade_size;
            attempts[i] = r.activation_attempts;
        }
    });

    std::uint64_t size_sum = 0;
    std::uint64_t attempt_sum = 0;
    for (int i = 0; i < n_sims; ++i) {
        size_sum += sizes[i];
        attempt_sum += attempts[i];
    }
    return {static_cast<double>(size_sum) / static_cast<double>(n_sims), attempt_sum};
}

}  // namespace imscale
