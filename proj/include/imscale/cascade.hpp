#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imscale/graph.hpp"

namespace imscale {

// Discrete-time propagation models. IC activates each inactive neighbour
// once with a fixed probability; WC uses 1/deg(target) per attempt.
struct PropagationModel {
    enum class Kind { IC, WC };
    Kind kind = Kind::IC;
    double p = 0.05;  // IC only

    static PropagationModel ic(double p);
    static PropagationModel wc() { return {Kind::WC, 0.0}; }
};

struct SimulationResult {
    std::size_t cascade_size = 0;           // |A| at termination
    std::uint64_t activation_attempts = 0;  // executions of the activation step
};

// One cascade. Rounds proceed breadth-first: every node activated in the
// previous round attempts each neighbour not yet activated, in ascending
// node id order, exactly once. Within a round a target already activated by
// an earlier source is still attempted by later sources (the round's
// additions join the activated set only when the round ends).
SimulationResult simulate(const Graph& g, std::span<const NodeId> seeds,
                          const PropagationModel& model, std::uint64_t rng_seed);

struct InfluenceEstimate {
    double mean_cascade_size = 0.0;
    std::uint64_t total_attempts = 0;
};

// Monte-Carlo mean of the cascade size over n_sims runs. Simulation i uses
// the stream derived from (rng_seed, i), and per-simulation results are
// combined in index order, so the estimate is identical for any thread
// budget.
InfluenceEstimate estimate_influence(const Graph& g, std::span<const NodeId> seeds,
                                     const PropagationModel& model, int n_sims,
                                     std::uint64_t rng_seed);

}  // namespace imscale
