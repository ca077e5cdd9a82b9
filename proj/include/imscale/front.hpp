#pragma once

#include <vector>

#include "imscale/graph.hpp"

namespace imscale {

// One point in objective space: influence is maximised, seed fraction
// minimised; both are normalised by the network size.
struct Fitness {
    double influence_fraction = 0.0;
    double seed_fraction = 0.0;

    friend bool operator==(const Fitness&, const Fitness&) = default;
};

// a dominates b: at least as good in both objectives, strictly better in one.
inline bool dominates(const Fitness& a, const Fitness& b) {
    if (a.influence_fraction < b.influence_fraction || a.seed_fraction > b.seed_fraction)
        return false;
    return a.influence_fraction > b.influence_fraction || a.seed_fraction < b.seed_fraction;
}

struct FrontEntry {
    Fitness point;
    std::vector<NodeId> seeds;
};

// Mutually non-dominated points with one representative seed set each,
// sorted by ascending influence fraction.
using Front = std::vector<FrontEntry>;

}  // namespace imscale
