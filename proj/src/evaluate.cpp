#include "imscale/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace imscale {

namespace {

// Ascending influence; on a proper front seed fraction ascends with it.
bool point_less(const Fitness& a, const Fitness& b) {
    if (a.influence_fraction != b.influence_fraction)
        return a.influence_fraction < b.influence_fraction;
    return a.seed_fraction < b.seed_fraction;
}

// Sweep order for the maxima scan: descending influence, ascending seed
// fraction. A point survives iff its seed fraction is strictly below every
// one kept so far.
bool sweep_less(const Fitness& a, const Fitness& b) {
    if (a.influence_fraction != b.influence_fraction)
        return a.influence_fraction > b.influence_fraction;
    return a.seed_fraction < b.seed_fraction;
}

}  // namespace

std::vector<Fitness> pareto_filter(std::vector<Fitness> points) {
    std::sort(points.begin(), points.end(), sweep_less);
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::vector<Fitness> kept;
    double best_seed = std::numeric_limits<double>::infinity();
    for (const Fitness& p : points) {
        if (p.seed_fraction < best_seed) {
            kept.push_back(p);
            best_seed = p.seed_fraction;
        }
    }
    std::reverse(kept.begin(), kept.end());
    return kept;
}

Front pareto_filter_front(Front front) {
    // Stable sort so that among entries with identical fitness the earliest
    // keeps its seed set as the representative.
    std::stable_sort(front.begin(), front.end(), [](const FrontEntry& a, const FrontEntry& b) {
        return sweep_less(a.point, b.point);
    });
    Front kept;
    double best_seed = std::numeric_limits<double>::infinity();
    for (auto& entry : front) {
        if (!kept.empty() && kept.back().point == entry.point)
            continue;
        if (entry.point.seed_fraction < best_seed) {
            best_seed = entry.point.seed_fraction;
            kept.push_back(std::move(entry));
        }
    }
    std::reverse(kept.begin(), kept.end());
    return kept;
}

double hypervolume_2d(std::span<const Fitness> front, const RefPoint& ref) {
    std::vector<Fitness> pts(front.begin(), front.end());
    std::sort(pts.begin(), pts.end(), point_less);
    double hv = 0.0;
    double prev_x = ref.influence;
    for (const Fitness& p : pts) {
        if (p.seed_fraction > ref.seed_fraction)
            throw std::invalid_argument("hypervolume_2d: point outside the reference box");
        if (p.influence_fraction > prev_x) {
            hv += (p.influence_fraction - prev_x) * (ref.seed_fraction - p.seed_fraction);
            prev_x = p.influence_fraction;
        }
    }
    return hv;
}

double hyperarea(double hv_test, double hv_reference) {
    if (!(hv_reference > 0.0))
        throw std::invalid_argument("hyperarea: reference hypervolume must be positive");
    return hv_test / hv_reference;
}

PowerLawFit fit_power_law(std::span<const std::size_t> degrees) {
    std::vector<std::size_t> tail;
    tail.reserve(degrees.size());
    for (const std::size_t d : degrees) {
        if (d >= 1)
            tail.push_back(d);
    }
    if (tail.size() < 10)
        throw std::invalid_argument("fit_power_law: need at least 10 positive degrees");
    std::sort(tail.begin(), tail.end());
    if (tail.front() == tail.back())
        throw std::invalid_argument("fit_power_law: degenerate degree sequence");

    std::vector<std::size_t> distinct(tail);
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    constexpr std::size_t kMinTail = 10;
    PowerLawFit best;
    bool found = false;
    for (const std::size_t d_min : distinct) {
        const auto lo = std::lower_bound(tail.begin(), tail.end(), d_min);
        const std::size_t n_tail = static_cast<std::size_t>(tail.end() - lo);
        if (n_tail < kMinTail)
            break;  // tails only shrink from here
        const double shift = static_cast<double>(d_min) - 0.5;
        double log_sum = 0.0;
        for (auto it = lo; it != tail.end(); ++it)
            log_sum += std::log(static_cast<double>(*it) / shift);
        if (log_sum <= 0.0)
            continue;
        const double alpha = 1.0 + static_cast<double>(n_tail) / log_sum;

        // KS distance between the empirical tail survival function and the
        // fitted model's (continuous approximation with the -0.5 offset).
        double ks = 0.0;
        std::size_t seen = 0;
        for (auto it = lo; it != tail.end();) {
            const std::size_t d = *it;
            auto next = std::upper_bound(it, tail.end(), d);
            const double emp = 1.0 - static_cast<double>(seen) / static_cast<double>(n_tail);
            const double model =
                std::pow((static_cast<double>(d) - 0.5) / shift, 1.0 - alpha);
            ks = std::max(ks, std::abs(emp - model));
            seen += static_cast<std::size_t>(next - it);
            it = next;
        }
        if (!found || ks < best.ks_distance) {
            best = {alpha, d_min, ks, n_tail};
            found = true;
        }
    }
    if (!found)
        throw std::invalid_argument("fit_power_law: no viable cutoff with a 10-sample tail");
    return best;
}

}  // namespace imscale
