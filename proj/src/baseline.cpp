#include "imscale/baseline.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "imscale/evaluate.hpp"
#include "imscale/parallel.hpp"
#include "imscale/rng.hpp"

namespace imscale {

namespace {

struct QueueEntry {
    double gain;
    NodeId node;
    int evaluated_at;  // greedy step of the cached gain

    // Max-heap: highest gain first, then lowest node id.
    bool operator<(const QueueEntry& other) const {
        if (gain != other.gain)
            return gain < other.gain;
        return node > other.node;
    }
};

}  // namespace

CelfResult celf_with_estimator(const Graph& g, int k_max, const GainEvaluator& estimator) {
    if (k_max < 1)
        throw std::invalid_argument("celf: k_max must be >= 1");
    const std::size_t n = g.node_count();
    if (n == 0)
        throw std::invalid_argument("celf: graph is empty");
    k_max = std::min<int>(k_max, static_cast<int>(n));

    CelfResult result;

    // Initial sweep of single-node gains; independent, evaluated in parallel
    // and pushed in node order.
    std::vector<double> initial(n);
    parallel::for_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t v = begin; v < end; ++v) {
            const NodeId node = static_cast<NodeId>(v);
            initial[v] = estimator(std::span<const NodeId>(&node, 1), 0, node);
        }
    });
    result.gain_evaluations += n;

    std::priority_queue<QueueEntry> queue;
    for (std::size_t v = 0; v < n; ++v)
        queue.push({initial[v], static_cast<NodeId>(v), 0});

    std::vector<NodeId> selected;
    std::vector<NodeId> probe;
    double current_influence = 0.0;
    for (int step = 0; step < k_max && !queue.empty(); ++step) {
        QueueEntry top = queue.top();
        queue.pop();
        while (top.evaluated_at != step) {
            probe.assign(selected.begin(), selected.end());
            probe.push_back(top.node);
            const double estimate = estimator(probe, step, top.node);
            ++result.gain_evaluations;
            top.gain = estimate - current_influence;
            top.evaluated_at = step;
            queue.push(top);
            top = queue.top();
            queue.pop();
        }
        selected.push_back(top.node);
        current_influence += std::max(top.gain, 0.0);
        result.curve.push_back({step + 1, selected, current_influence});
    }
    return result;
}

CelfResult celf(const Graph& g, const PropagationModel& model, int k_max, int n_sims,
                std::uint64_t rng_seed) {
    std::uint64_t attempts = 0;
    // The initial sweep runs in parallel, so its attempt counts go to
    // per-node slots (step 0, singleton probes); the lazy loop is sequential
    // and accumulates directly.
    std::vector<std::uint64_t> sweep_attempts(g.node_count(), 0);

    const GainEvaluator estimator = [&](std::span<const NodeId> seed_set, int step,
                                        NodeId candidate) {
        const InfluenceEstimate est = estimate_influence(
            g, seed_set, model, n_sims,
            derive_seed(rng_seed, "gain", static_cast<std::uint64_t>(step), candidate));
        if (step == 0 && seed_set.size() == 1)
            sweep_attempts[candidate] = est.total_attempts;
        else
            attempts += est.total_attempts;
        return est.mean_cascade_size;
    };

    CelfResult result = celf_with_estimator(g, k_max, estimator);
    for (const std::uint64_t a : sweep_attempts)
        attempts += a;
    result.total_attempts = attempts;
    return result;
}

Front greedy_curve_to_front(const GreedyCurve& curve, std::size_t n) {
    Front front;
    front.reserve(curve.size());
    const double dn = static_cast<double>(n);
    for (const GreedyStep& step : curve)
        front.push_back(
            {{step.influence / dn, static_cast<double>(step.seeds.size()) / dn}, step.seeds});
    return pareto_filter_front(std::move(front));
}

}  // namespace imscale
