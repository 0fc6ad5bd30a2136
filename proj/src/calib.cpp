#include "linscale/calib.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "linscale/errors.hpp"

namespace linscale {

double round_half_away(double v, int decimals) {
    const double k = std::pow(10.0, decimals);
    // Exact decimal halves may land a hair below .5 in binary.
    const double scaled = v * k;
    const double r = std::round(scaled + std::copysign(1e-9, scaled));
    return r / k + 0.0;
}

std::vector<PairSlope> pairwise_slopes(const std::vector<MarkerReading>& readings, std::vector<PairSlope>* coincident) {
    std::size_t with_values = 0;
    for (const auto& r : readings) with_values += r.value.has_value();
    if (with_values < 2)
        throw Error(Stage::calibration, "InsufficientReadings", "need at least two readings with values");

    std::vector<PairSlope> out;
    for (std::size_t i = 0; i < readings.size(); ++i) {
        if (!readings[i].value) continue;
        for (std::size_t j = i + 1; j < readings.size(); ++j) {
            if (!readings[j].value) continue;
            const double dp = readings[j].position - readings[i].position;
            if (dp == 0.0) {
                if (coincident) coincident->push_back({i, j, 0.0, 0.0, 0.0});
                continue;
            }
            const double s = (*readings[j].value - *readings[i].value) / dp;
            out.push_back({i, j, round_half_away(s, 4), s, std::fabs(dp)});
        }
    }
    return out;
}

namespace {

std::size_t distinct_markers(const std::vector<PairSlope>& pairs) {
    std::set<std::size_t> m;
    for (const auto& p : pairs) {
        m.insert(p.i);
        m.insert(p.j);
    }
    return m.size();
}

}  // namespace

Consensus consensus_slope(const std::vector<PairSlope>& slopes, double rel_tol) {
    if (slopes.empty()) throw Error(Stage::calibration, "InsufficientReadings", "no slopes to vote on");

    std::vector<PairSlope> sorted = slopes;
    std::stable_sort(sorted.begin(), sorted.end(), [](const PairSlope& a, const PairSlope& b) {
        if (a.slope != b.slope) return a.slope < b.slope;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    std::vector<std::vector<PairSlope>> pools;
    for (const auto& p : sorted) {
        if (!pools.empty()) {
            const double prev = pools.back().back().slope;
            const double gap = p.slope - prev;
            const double lim = rel_tol * std::max(std::fabs(prev), std::fabs(p.slope));
            if (gap <= lim) {
                pools.back().push_back(p);
                continue;
            }
        }
        pools.push_back({p});
    }

    std::size_t best = 0;
    for (const auto& pool : pools) best = std::max(best, pool.size());
    if (slopes.size() >= 3 && best < 2)
        throw Error(Stage::calibration, "NoConsensus", "every pairwise slope is different");

    std::vector<const std::vector<PairSlope>*> top;
    for (const auto& pool : pools)
        if (pool.size() == best) top.push_back(&pool);
    if (top.size() > 1) {
        std::size_t most = 0;
        for (auto* pool : top) most = std::max(most, distinct_markers(*pool));
        std::erase_if(top, [&](auto* pool) { return distinct_markers(*pool) != most; });
        if (top.size() > 1)
            throw Error(Stage::calibration, "AmbiguousConsensus", "tied slope modes cover the same number of markers");
    }

    Consensus c;
    c.agreeing = *top.front();
    c.low_confidence = slopes.size() == 1;
    if (rel_tol > 0.0) {
        const auto widest = std::max_element(c.agreeing.begin(), c.agreeing.end(),
                                             [](const PairSlope& a, const PairSlope& b) { return a.span < b.span; });
        c.slope = widest->exact;
    } else {
        c.slope = c.agreeing.front().slope;
    }
    if (c.slope == 0.0) throw Error(Stage::calibration, "ZeroSlope", "consensus slope is zero");
    return c;
}

std::vector<std::size_t> agreeing_readings(const Consensus& consensus) {
    // Largest connected set of readings under the agreeing pairs.
    std::map<std::size_t, std::size_t> parent;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& p : consensus.agreeing) {
        parent.try_emplace(p.i, p.i);
        parent.try_emplace(p.j, p.j);
    }
    for (const auto& p : consensus.agreeing) {
        const std::size_t a = find(p.i), b = find(p.j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<std::size_t, std::vector<std::size_t>> sets;
    for (auto& [k, v] : parent) sets[find(k)].push_back(k);

    const std::vector<std::size_t>* best = nullptr;
    for (const auto& [root, members] : sets) {
        if (!best || members.size() > best->size() ||
            (members.size() == best->size() && members.back() > best->back()))
            best = &members;
    }
    return best ? *best : std::vector<std::size_t>{};
}

LinearRelation fit_relation(const std::vector<MarkerReading>& readings, const Consensus& consensus) {
    const auto idx = agreeing_readings(consensus);
    const MarkerReading* anchor = nullptr;
    for (std::size_t i : idx) {
        if (i >= readings.size() || !readings[i].value) continue;
        if (!anchor || readings[i].position > anchor->position) anchor = &readings[i];
    }
    if (!anchor) throw Error(Stage::calibration, "NoAgreeingReading", "no reading agrees with the slope mode");
    return {consensus.slope, *anchor->value - consensus.slope * anchor->position};
}

double snap(double value, double grain) {
    if (!(grain > 0.0)) return value;
    return std::round(value / grain) * grain + 0.0;
}

std::vector<MarkerReading> correct_and_complete(const std::vector<double>& positions, const LinearRelation& rel,
                                                double grain) {
    std::vector<MarkerReading> out;
    out.reserve(positions.size());
    for (double p : positions) out.push_back({p, snap(rel(p), grain)});
    return out;
}

double default_grain(const std::vector<MarkerReading>& readings, const Consensus& consensus) {
    auto idx = agreeing_readings(consensus);
    std::erase_if(idx, [&](std::size_t i) { return i >= readings.size() || !readings[i].value; });
    const bool integral = std::all_of(idx.begin(), idx.end(), [&](std::size_t i) {
        return *readings[i].value == std::floor(*readings[i].value);
    });
    if (integral || idx.size() < 2) return 1.0;

    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return readings[a].position < readings[b].position;
    });
    std::vector<double> steps;
    for (std::size_t k = 1; k < idx.size(); ++k)
        steps.push_back(std::fabs(*readings[idx[k]].value - *readings[idx[k - 1]].value));
    std::sort(steps.begin(), steps.end());
    const std::size_t n = steps.size();
    const double med = n % 2 ? steps[n / 2] : (steps[n / 2 - 1] + steps[n / 2]) / 2.0;
    if (!(med > 0.0)) return 1.0;
    return std::pow(10.0, std::floor(std::log10(med) + 1e-12));
}

Calibration calibrate(const std::vector<MarkerReading>& readings, double rel_tol) {
    Calibration cal;
    cal.slopes = pairwise_slopes(readings);
    cal.consensus = consensus_slope(cal.slopes, rel_tol);
    cal.relation = fit_relation(readings, cal.consensus);
    cal.grain = default_grain(readings, cal.consensus);
    std::vector<double> positions;
    for (const auto& r : readings) positions.push_back(r.position);
    cal.corrected = correct_and_complete(positions, cal.relation, cal.grain);
    return cal;
}

}  // namespace linscale
