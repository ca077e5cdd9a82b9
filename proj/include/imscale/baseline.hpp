#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "imscale/cascade.hpp"
#include "imscale/front.hpp"
#include "imscale/graph.hpp"

namespace imscale {

// One greedy step: the committed prefix of size k and its influence
// estimate. Prefixes are nested and influence is non-decreasing in k.
struct GreedyStep {
    int k = 0;
    std::vector<NodeId> seeds;
    double influence = 0.0;
};
using GreedyCurve = std::vector<GreedyStep>;

struct CelfResult {
    GreedyCurve curve;
    std::uint64_t gain_evaluations = 0;
    std::uint64_t total_attempts = 0;
};

// Estimates the influence of seed_set at greedy step `step`, where
// `candidate` is the node whose marginal gain is being probed.
using GainEvaluator =
    std::function<double(std::span<const NodeId> seed_set, int step, NodeId candidate)>;

// CELF lazy greedy on an arbitrary influence estimator: cached marginal
// gains are re-evaluated only while stale entries top the queue. Gain ties
// break on ascending node id.
CelfResult celf_with_estimator(const Graph& g, int k_max, const GainEvaluator& estimator);

// Production CELF: marginal gains via estimate_influence with a fresh
// stream per (step, node) evaluation.
CelfResult celf(const Graph& g, const PropagationModel& model, int k_max, int n_sims,
                std::uint64_t rng_seed);

// Normalises both curve coordinates by n and Pareto-filters.
Front greedy_curve_to_front(const GreedyCurve& curve, std::size_t n);

}  // namespace imscale
