#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imscale/front.hpp"

namespace imscale {

// Reference corner for the 2-D hypervolume: zero influence at the seed
// budget cap. Every feasible front point dominates it.
struct RefPoint {
    double influence = 0.0;
    double seed_fraction = 0.025;
};

// Maximal non-dominated subset; duplicates collapsed; sorted by ascending
// influence fraction.
std::vector<Fitness> pareto_filter(std::vector<Fitness> points);
Front pareto_filter_front(Front front);

// Staircase hypervolume of a Pareto-filtered 2-D front against ref. Throws
// if a point lies outside the feasible box (seed fraction above the
// reference).
double hypervolume_2d(std::span<const Fitness> front, const RefPoint& ref = {});

// Ratio of two hypervolumes; hv_reference must be positive.
double hyperarea(double hv_test, double hv_reference);

struct PowerLawFit {
    double alpha = 0.0;
    std::size_t d_min = 1;
    double ks_distance = 0.0;
    std::size_t tail_size = 0;
};

// Discrete maximum-likelihood power-law fit with the Clauset-style choice of
// d_min minimising the KS distance between the empirical tail and the fitted
// model. Requires at least 10 positive degrees and at least two distinct
// values.
PowerLawFit fit_power_law(std::span<const std::size_t> degrees);

}  // namespace imscale
