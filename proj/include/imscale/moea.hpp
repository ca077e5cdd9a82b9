#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "imscale/cascade.hpp"
#include "imscale/evaluate.hpp"
#include "imscale/front.hpp"
#include "imscale/graph.hpp"
#include "imscale/rng.hpp"

namespace imscale {

// NSGA-II configuration. Defaults follow the standard parameterisation for
// this problem; k_max is derived from the network size.
struct MoeaParams {
    int population_size = 100;
    int generations = 1000;
    int elites = 2;
    double crossover_rate = 1.0;
    double mutation_rate = 0.1;
    int tournament_size = 5;
    double k_max_fraction = 0.025;
    int n_sims = 100;
    double ic_p = 0.05;
};

// Largest admissible seed set: max(1, round(k_max_fraction * n)).
int max_seed_set_size(const MoeaParams& params, std::size_t n);

// Genome: ordered, duplicate-free node list of length in [1, k_max].
struct Individual {
    std::vector<NodeId> genes;
    Fitness fitness{};
    bool evaluated = false;
};

// fitness = (mean cascade size / n, |genes| / n); attempts accumulate into
// *attempts when given.
Fitness evaluate_individual(const Graph& g, const Individual& ind, const PropagationModel& model,
                            const MoeaParams& params, std::uint64_t rng_seed,
                            std::uint64_t* attempts = nullptr);

// Filters to the half of the nodes with the highest single-node influence
// (estimated with max(10, n_sims/10) simulations each), then fills each
// individual with degree-weighted draws without replacement from that pool.
// Lengths are uniform in [1, k_max], capped at the pool size. Individuals
// are returned unevaluated.
std::vector<Individual> smart_initialize(const Graph& g, const PropagationModel& model,
                                         const MoeaParams& params, std::uint64_t rng_seed,
                                         std::uint64_t* attempts = nullptr);

// One-point crossover with independent cut points; duplicate genes keep the
// first occurrence, children are truncated to k_max, and an empty child is
// repaired with one random parent gene.
std::pair<Individual, Individual> crossover_one_point(const Individual& a, const Individual& b,
                                                      int k_max, Rng& rng);
// Deterministic core with explicit cut points (cut in [0, len]).
std::pair<Individual, Individual> crossover_one_point_at(const Individual& a, const Individual& b,
                                                         std::size_t cut_a, std::size_t cut_b,
                                                         int k_max, Rng& rng);

// With probability mutation_rate applies one applicable move, chosen
// uniformly: replace a gene with a non-member, insert a non-member (length
// permitting), or drop a gene (length > 1).
Individual mutate(Individual ind, const Graph& g, const MoeaParams& params, int k_max, Rng& rng);

// Deb's fast non-dominated sort: fronts of indices, best rank first.
std::vector<std::vector<int>> fast_non_dominated_sort(std::span<const Fitness> points);
// Crowding distances for one front (indices into points); boundary points
// get +infinity.
std::vector<double> crowding_distances(std::span<const Fitness> points, std::span<const int> front);

// Non-dominated archive over every evaluated point; one representative seed
// set per distinct fitness point (first found). Entries stay sorted by
// ascending influence.
class ParetoArchive {
public:
    // Returns true if the point entered the archive.
    bool add(const Fitness& point, std::span<const NodeId> seeds);
    const Front& entries() const { return entries_; }
    double hypervolume(const RefPoint& ref) const;

private:
    Front entries_;
};

struct GenerationStats {
    int generation;  // 0 = after initialisation
    double archive_hypervolume;
    const std::vector<Individual>& population;
    const Front& archive;
};
using GenerationObserver = std::function<void(const GenerationStats&)>;

struct NsgaResult {
    Front front;
    std::vector<double> archive_hv_trace;  // one value per generation incl. init
    std::uint64_t total_attempts = 0;      // includes initialisation
    std::uint64_t init_attempts = 0;
    int k_max = 1;
    double hv_ref_seed_fraction = 0.025;
};

// Full NSGA-II run: smart initialisation, tournament selection, one-point
// crossover, mutation, (mu+lambda) replacement by rank and crowding with the
// two per-objective best individuals preserved. Child evaluation i in
// generation t uses the stream derived from (rng_seed, t, i), so runs are
// reproducible for any thread budget.
NsgaResult nsga2_run(const Graph& g, const PropagationModel& model, const MoeaParams& params,
                     std::uint64_t rng_seed, const GenerationObserver& observer = {});

}  // namespace imscale
