#include "imscale/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "imscale/parallel.hpp"

namespace imscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

bool contains(std::span<const NodeId> genes, NodeId v) {
    return std::find(genes.begin(), genes.end(), v) != genes.end();
}

NodeId draw_non_member(const Graph& g, std::span<const NodeId> genes, Rng& rng) {
    // Rejection sampling; genomes cover at most a few percent of the nodes.
    while (true) {
        const NodeId v = static_cast<NodeId>(rng.uniform_int(g.node_count()));
        if (!contains(genes, v))
            return v;
    }
}

void dedup_keep_first(std::vector<NodeId>& genes) {
    std::vector<NodeId> out;
    out.reserve(genes.size());
    for (const NodeId v : genes) {
        if (!contains(out, v))
            out.push_back(v);
    }
    genes = std::move(out);
}

}  // namespace

int max_seed_set_size(const MoeaParams& params, std::size_t n) {
    return static_cast<int>(
        std::max<std::size_t>(1, round_half_up(params.k_max_fraction * static_cast<double>(n))));
}

Fitness evaluate_individual(const Graph& g, const Individual& ind, const PropagationModel& model,
                            const MoeaParams& params, std::uint64_t rng_seed,
                            std::uint64_t* attempts) {
    const InfluenceEstimate est =
        estimate_influence(g, ind.genes, model, params.n_sims, rng_seed);
    if (attempts)
        *attempts += est.total_attempts;
    const double n = static_cast<double>(g.node_count());
    return {est.mean_cascade_size / n, static_cast<double>(ind.genes.size()) / n};
}

std::vector<Individual> smart_initialize(const Graph& g, const PropagationModel& model,
                                         const MoeaParams& params, std::uint64_t rng_seed,
                                         std::uint64_t* attempts) {
    const std::size_t n = g.node_count();
    if (n == 0)
        throw std::invalid_argument("smart_initialize: graph is empty");
    const int k_max = max_seed_set_size(params, n);
    const int budget = std::max(10, params.n_sims / 10);

    // Single-node influence sweep.
    std::vector<double> influence(n);
    std::vector<std::uint64_t> node_attempts(n);
    parallel::for_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t v = begin; v < end; ++v) {
            const NodeId node = static_cast<NodeId>(v);
            const InfluenceEstimate est = estimate_influence(
                g, std::span<const NodeId>(&node, 1), model, budget,
                derive_seed(rng_seed, "node-influence", v));
            influence[v] = est.mean_cascade_size;
            node_attempts[v] = est.total_attempts;
        }
    });
    if (attempts) {
        for (const std::uint64_t a : node_attempts)
            *attempts += a;
    }

    // Keep the most influential half.
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&influence](NodeId a, NodeId b) {
        if (influence[a] != influence[b])
            return influence[a] > influence[b];
        return a < b;
    });
    const std::size_t pool_size = (n + 1) / 2;
    std::vector<NodeId> pool(order.begin(), order.begin() + pool_size);

    Rng rng(derive_seed(rng_seed, "assemble"));
    std::vector<Individual> population(static_cast<std::size_t>(params.population_size));
    std::vector<NodeId> candidates;
    std::vector<double> weights;
    for (auto& ind : population) {
        const std::size_t len = static_cast<std::size_t>(rng.uniform_int_inclusive(
            1, std::min<std::uint64_t>(static_cast<std::uint64_t>(k_max), pool.size())));
        candidates.assign(pool.begin(), pool.end());
        weights.resize(candidates.size());
        double total = 0.0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            weights[i] = static_cast<double>(g.degree(candidates[i]));
            total += weights[i];
        }
        ind.genes.reserve(len);
        for (std::size_t drawn = 0; drawn < len; ++drawn) {
            std::size_t pick;
            if (total <= 0.0) {
                pick = static_cast<std::size_t>(rng.uniform_int(candidates.size()));
            } else {
                const double target = rng.uniform_real() * total;
                double acc = 0.0;
                pick = candidates.size() - 1;
                for (std::size_t i = 0; i < candidates.size(); ++i) {
                    acc += weights[i];
                    if (target < acc) {
                        pick = i;
                        break;
                    }
                }
            }
            ind.genes.push_back(candidates[pick]);
            total -= weights[pick];
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
            weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(pick));
        }
    }
    return population;
}

std::pair<Individual, Individual> crossover_one_point_at(const Individual& a, const Individual& b,
                                                         std::size_t cut_a, std::size_t cut_b,
                                                         int k_max, Rng& rng) {
    Individual child1, child2;
    child1.genes.assign(a.genes.begin(), a.genes.begin() + static_cast<std::ptrdiff_t>(cut_a));
    child1.genes.insert(child1.genes.end(), b.genes.begin() + static_cast<std::ptrdiff_t>(cut_b),
                        b.genes.end());
    child2.genes.assign(b.genes.begin(), b.genes.begin() + static_cast<std::ptrdiff_t>(cut_b));
    child2.genes.insert(child2.genes.end(), a.genes.begin() + static_cast<std::ptrdiff_t>(cut_a),
                        a.genes.end());
    for (Individual* child : {&child1, &child2}) {
        dedup_keep_first(child->genes);
        if (child->genes.size() > static_cast<std::size_t>(k_max))
            child->genes.resize(static_cast<std::size_t>(k_max));
        if (child->genes.empty()) {
            // Repair with one random gene from a parent.
            const std::size_t total = a.genes.size() + b.genes.size();
            const std::size_t pick = static_cast<std::size_t>(rng.uniform_int(total));
            child->genes.push_back(pick < a.genes.size() ? a.genes[pick]
                                                         : b.genes[pick - a.genes.size()]);
        }
    }
    return {std::move(child1), std::move(child2)};
}

std::pair<Individual, Individual> crossover_one_point(const Individual& a, const Individual& b,
                                                      int k_max, Rng& rng) {
    const std::size_t cut_a = static_cast<std::size_t>(rng.uniform_int(a.genes.size() + 1));
    const std::size_t cut_b = static_cast<std::size_t>(rng.uniform_int(b.genes.size() + 1));
    return crossover_one_point_at(a, b, cut_a, cut_b, k_max, rng);
}

Individual mutate(Individual ind, const Graph& g, const MoeaParams& params, int k_max, Rng& rng) {
    if (rng.uniform_real() >= params.mutation_rate)
        return ind;
    const std::size_t len = ind.genes.size();
    const bool can_replace = len < g.node_count();
    const bool can_insert = len < static_cast<std::size_t>(k_max) && len < g.node_count();
    const bool can_remove = len > 1;

    enum class Move { Replace, Insert, Remove };
    std::vector<Move> applicable;
    if (can_replace)
        applicable.push_back(Move::Replace);
    if (can_insert)
        applicable.push_back(Move::Insert);
    if (can_remove)
        applicable.push_back(Move::Remove);
    if (applicable.empty())
        return ind;

    switch (applicable[static_cast<std::size_t>(rng.uniform_int(applicable.size()))]) {
        case Move::Replace: {
            const std::size_t idx = static_cast<std::size_t>(rng.uniform_int(len));
            ind.genes[idx] = draw_non_member(g, ind.genes, rng);
            break;
        }
        case Move::Insert:
            ind.genes.push_back(draw_non_member(g, ind.genes, rng));
            break;
        case Move::Remove: {
            const std::size_t idx = static_cast<std::size_t>(rng.uniform_int(len));
            ind.genes.erase(ind.genes.begin() + static_cast<std::ptrdiff_t>(idx));
            break;
        }
    }
    ind.evaluated = false;
    return ind;
}

std::vector<std::vector<int>> fast_non_dominated_sort(std::span<const Fitness> points) {
    const int n = static_cast<int>(points.size());
    std::vector<std::vector<int>> dominated(n);
    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<int>> fronts(1);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q)
                continue;
            if (dominates(points[p], points[q]))
                dominated[p].push_back(q);
            else if (dominates(points[q], points[p]))
                ++domination_count[p];
        }
        if (domination_count[p] == 0)
            fronts[0].push_back(p);
    }
    std::size_t i = 0;
    while (i < fronts.size() && !fronts[i].empty()) {
        std::vector<int> next;
        for (const int p : fronts[i]) {
            for (const int q : dominated[p]) {
                if (--domination_count[q] == 0)
                    next.push_back(q);
            }
        }
        ++i;
        if (!next.empty()) {
            std::sort(next.begin(), next.end());
            fronts.push_back(std::move(next));
        }
    }
    if (fronts.size() == 1 && fronts[0].empty())
        fronts.clear();
    return fronts;
}

std::vector<double> crowding_distances(std::span<const Fitness> points,
                                       std::span<const int> front) {
    const std::size_t size = front.size();
    std::vector<double> distance(size, 0.0);
    if (size <= 2) {
        std::fill(distance.begin(), distance.end(), kInf);
        return distance;
    }
    std::vector<std::size_t> order(size);
    for (const int objective : {0, 1}) {
        std::iota(order.begin(), order.end(), 0);
        const auto value = [&](std::size_t i) {
            const Fitness& f = points[static_cast<std::size_t>(front[i])];
            return objective == 0 ? f.influence_fraction : f.seed_fraction;
        };
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (value(a) != value(b))
                return value(a) < value(b);
            return front[a] < front[b];
        });
        distance[order.front()] = kInf;
        distance[order.back()] = kInf;
        const double span_width = value(order.back()) - value(order.front());
        if (span_width <= 0.0)
            continue;
        for (std::size_t i = 1; i + 1 < size; ++i) {
            if (distance[order[i]] != kInf)
                distance[order[i]] += (value(order[i + 1]) - value(order[i - 1])) / span_width;
        }
    }
    return distance;
}

bool ParetoArchive::add(const Fitness& point, std::span<const NodeId> seeds) {
    for (const FrontEntry& e : entries_) {
        if (e.point == point || dominates(e.point, point))
            return false;
    }
    std::erase_if(entries_, [&point](const FrontEntry& e) { return dominates(point, e.point); });
    FrontEntry entry{point, {seeds.begin(), seeds.end()}};
    const auto at = std::upper_bound(entries_.begin(), entries_.end(), entry,
                                     [](const FrontEntry& a, const FrontEntry& b) {
                                         return a.point.influence_fraction <
                                                b.point.influence_fraction;
                                     });
    entries_.insert(at, std::move(entry));
    return true;
}

double ParetoArchive::hypervolume(const RefPoint& ref) const {
    std::vector<Fitness> points;
    points.reserve(entries_.size());
    for (const FrontEntry& e : entries_)
        points.push_back(e.point);
    return hypervolume_2d(points, ref);
}

namespace {

struct RankedPopulation {
    std::vector<int> rank;        // per individual
    std::vector<double> crowding;  // per individual
};

RankedPopulation rank_population(const std::vector<Individual>& pop) {
    std::vector<Fitness> points(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i)
        points[i] = pop[i].fitness;
    const auto fronts = fast_non_dominated_sort(points);
    RankedPopulation out;
    out.rank.assign(pop.size(), 0);
    out.crowding.assign(pop.size(), 0.0);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        const auto dist = crowding_distances(points, fronts[r]);
        for (std::size_t i = 0; i < fronts[r].size(); ++i) {
            out.rank[static_cast<std::size_t>(fronts[r][i])] = static_cast<int>(r);
            out.crowding[static_cast<std::size_t>(fronts[r][i])] = dist[i];
        }
    }
    return out;
}

// rank asc, crowding desc, index asc.
bool better_by_rank(const RankedPopulation& rp, int a, int b) {
    if (rp.rank[a] != rp.rank[b])
        return rp.rank[a] < rp.rank[b];
    if (rp.crowding[a] != rp.crowding[b])
        return rp.crowding[a] > rp.crowding[b];
    return a < b;
}

int tournament_pick(const std::vector<Individual>& pop, const RankedPopulation& rp,
                    int tournament_size, Rng& rng) {
    int best = static_cast<int>(rng.uniform_int(pop.size()));
    for (int i = 1; i < tournament_size; ++i) {
        const int challenger = static_cast<int>(rng.uniform_int(pop.size()));
        if (better_by_rank(rp, challenger, best))
            best = challenger;
    }
    return best;
}

// (mu+lambda) replacement by rank then crowding; the best-influence and
// lowest-seed-fraction individuals survive unconditionally (elites).
std::vector<Individual> environmental_selection(std::vector<Individual> combined,
                                                int population_size, int elites) {
    const std::size_t n = combined.size();
    const RankedPopulation rp = rank_population(combined);

    std::vector<char> chosen(n, 0);
    std::vector<int> selected;
    selected.reserve(static_cast<std::size_t>(population_size));

    if (elites >= 1) {
        int best = 0;
        for (int i = 1; i < static_cast<int>(n); ++i) {
            const Fitness& a = combined[static_cast<std::size_t>(i)].fitness;
            const Fitness& b = combined[static_cast<std::size_t>(best)].fitness;
            if (a.influence_fraction > b.influence_fraction ||
                (a.influence_fraction == b.influence_fraction &&
                 a.seed_fraction < b.seed_fraction))
                best = i;
        }
        chosen[best] = 1;
        selected.push_back(best);
    }
    if (elites >= 2 && selected.size() < static_cast<std::size_t>(population_size)) {
        int best = -1;
        for (int i = 0; i < static_cast<int>(n); ++i) {
            if (chosen[i])
                continue;
            if (best < 0) {
                best = i;
                continue;
            }
            const Fitness& a = combined[static_cast<std::size_t>(i)].fitness;
            const Fitness& b = combined[static_cast<std::size_t>(best)].fitness;
            if (a.seed_fraction < b.seed_fraction ||
                (a.seed_fraction == b.seed_fraction &&
                 a.influence_fraction > b.influence_fraction))
                best = i;
        }
        if (best >= 0) {
            chosen[best] = 1;
            selected.push_back(best);
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&rp](int a, int b) { return better_by_rank(rp, a, b); });
    for (const int i : order) {
        if (selected.size() >= static_cast<std::size_t>(population_size))
            break;
        if (!chosen[i]) {
            chosen[i] = 1;
            selected.push_back(i);
        }
    }

    std::vector<Individual> next;
    next.reserve(selected.size());
    for (const int i : selected)
        next.push_back(std::move(combined[static_cast<std::size_t>(i)]));
    return next;
}

}  // namespace

NsgaResult nsga2_run(const Graph& g, const PropagationModel& model, const MoeaParams& params,
                     std::uint64_t rng_seed, const GenerationObserver& observer) {
    if (params.population_size < 2)
        throw std::invalid_argument("population_size must be >= 2");
    const std::size_t n = g.node_count();
    const int k_max = max_seed_set_size(params, n);

    NsgaResult result;
    result.k_max = k_max;
    result.hv_ref_seed_fraction =
        std::max(params.k_max_fraction, static_cast<double>(k_max) / static_cast<double>(n));
    const RefPoint hv_ref{0.0, result.hv_ref_seed_fraction};

    std::uint64_t attempts = 0;
    std::vector<Individual> pop =
        smart_initialize(g, model, params, derive_seed(rng_seed, "init"), &attempts);
    result.init_attempts = attempts;

    ParetoArchive archive;
    const auto evaluate_all = [&](std::vector<Individual>& group, int generation) {
        std::vector<std::uint64_t> slot_attempts(group.size(), 0);
        parallel::for_chunks(group.size(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                group[i].fitness = evaluate_individual(
                    g, group[i], model, params,
                    derive_seed(rng_seed, "eval", static_cast<std::uint64_t>(generation), i),
                    &slot_attempts[i]);
                group[i].evaluated = true;
            }
        });
        for (const std::uint64_t a : slot_attempts)
            attempts += a;
        for (const Individual& ind : group)
            archive.add(ind.fitness, ind.genes);
    };

    evaluate_all(pop, 0);
    result.archive_hv_trace.push_back(archive.hypervolume(hv_ref));
    if (observer)
        observer({0, result.archive_hv_trace.back(), pop, archive.entries()});

    Rng breed_rng(derive_seed(rng_seed, "breed"));
    for (int gen = 1; gen <= params.generations; ++gen) {
        const RankedPopulation rp = rank_population(pop);
        std::vector<Individual> children;
        children.reserve(static_cast<std::size_t>(params.population_size));
        while (children.size() < static_cast<std::size_t>(params.population_size)) {
            const Individual& pa =
                pop[static_cast<std::size_t>(tournament_pick(pop, rp, params.tournament_size, breed_rng))];
            const Individual& pb =
                pop[static_cast<std::size_t>(tournament_pick(pop, rp, params.tournament_size, breed_rng))];
            Individual c1, c2;
            if (breed_rng.uniform_real() < params.crossover_rate) {
                std::tie(c1, c2) = crossover_one_point(pa, pb, k_max, breed_rng);
            } else {
                c1.genes = pa.genes;
                c2.genes = pb.genes;
            }
            c1 = mutate(std::move(c1), g, params, k_max, breed_rng);
            children.push_back(std::move(c1));
            if (children.size() < static_cast<std::size_t>(params.population_size)) {
                c2 = mutate(std::move(c2), g, params, k_max, breed_rng);
                children.push_back(std::move(c2));
            }
        }
        evaluate_all(children, gen);

        std::vector<Individual> combined = std::move(pop);
        combined.insert(combined.end(), std::make_move_iterator(children.begin()),
                        std::make_move_iterator(children.end()));
        pop = environmental_selection(std::move(combined), params.population_size, params.elites);

        result.archive_hv_trace.push_back(archive.hypervolume(hv_ref));
        if (observer)
            observer({gen, result.archive_hv_trace.back(), pop, archive.entries()});
    }

    result.front = archive.entries();
    result.total_attempts = attempts;
    return result;
}

}  // namespace imscale
