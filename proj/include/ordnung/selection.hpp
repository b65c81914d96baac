#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ordnung/bv.hpp"
#include "ordnung/errors.hpp"
#include "ordnung/order.hpp"

namespace ordnung {

struct TraceStep {
    std::size_t point = 0;
    std::size_t bin = 0;
    std::vector<std::size_t> survivors;
};

// Survivors of an epsilon-refinement: any two selected members differ by at
// most epsilon at every sample point.
struct SelectionResult {
    std::vector<std::size_t> selected;
    double epsilon = 0.0;
    std::vector<std::size_t> sample_points;
    std::vector<TraceStep> trace;
};

namespace detail {

inline std::size_t bin_count(double lo, double hi, double eps) {
    const double width = hi - lo;
    if (width <= 0.0) return 1;
    const double b = std::ceil(width / eps);
    return b < 1.0 ? 1 : static_cast<std::size_t>(b);
}

inline std::size_t bin_of(double v, double lo, double hi, std::size_t bins) {
    if (bins <= 1 || hi <= lo) return 0;
    const double w = (hi - lo) / static_cast<double>(bins);
    auto b = static_cast<std::size_t>(std::floor((v - lo) / w));
    return b >= bins ? bins - 1 : b;
}

// One pigeonhole step: bin survivor values at a point, keep the most
// populated bin, ties to the lowest bin index.
template <typename ValueAt>
void bin_select(std::vector<std::size_t>& survivors, std::size_t point, double lo, double hi,
                double eps, ValueAt&& value_at, std::vector<TraceStep>& trace) {
    const std::size_t bins = bin_count(lo, hi, eps);
    std::vector<std::size_t> population(bins, 0);
    for (auto m : survivors) ++population[bin_of(value_at(m, point), lo, hi, bins)];
    std::size_t chosen = 0;
    for (std::size_t b = 1; b < bins; ++b)
        if (population[b] > population[chosen]) chosen = b;
    std::vector<std::size_t> kept;
    kept.reserve(population[chosen]);
    for (auto m : survivors)
        if (bin_of(value_at(m, point), lo, hi, bins) == chosen) kept.push_back(m);
    survivors = std::move(kept);
    trace.push_back({point, chosen, survivors});
}

inline std::vector<std::size_t> default_samples(const Chain& chain,
                                                const std::vector<std::size_t>& samples) {
    if (!samples.empty()) {
        for (auto p : samples)
            require(p < chain.size, errc::index_out_of_range, "sample point out of range");
        return samples;
    }
    std::vector<std::size_t> all(chain.size);
    for (std::size_t i = 0; i < chain.size; ++i) all[i] = i;
    return all;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// select_monotone

inline SelectionResult select_monotone(const FunctionFamily& family, double epsilon,
                                       std::vector<std::size_t> sample_points = {}) {
    require(!family.members.empty(), errc::empty_family, "selection from an empty family");
    require(epsilon > 0.0, errc::tolerance_non_positive, "epsilon must be positive");
    for (std::size_t m = 0; m < family.size(); ++m)
        if (auto i = first_decrease(family[m]))
            fail(errc::not_monotone, "member " + std::to_string(m) + " decreases between points " +
                                         std::to_string(*i) + " and " + std::to_string(*i + 1));

    SelectionResult res;
    res.epsilon = epsilon;
    res.sample_points = detail::default_samples(family.chain, sample_points);
    res.selected = detail::all_indices(family.size());
    for (auto p : res.sample_points)
        detail::bin_select(
            res.selected, p, family.lo, family.hi, epsilon,
            [&](std::size_t m, std::size_t x) { return family[m](x); }, res.trace);
    return res;
}

// ---------------------------------------------------------------------------
// select_bv

// Reduction to the monotone case: Jordan-split every member as u - v and
// refine on the u parts with half the budget, then on the v parts with the
// other half. |f - f'| <= |u - u'| + |v - v'| carries the guarantee back.
inline SelectionResult select_bv(const FunctionFamily& family, double r, double epsilon,
                                 std::vector<std::size_t> sample_points = {}) {
    require(!family.members.empty(), errc::empty_family, "selection from an empty family");
    require(epsilon > 0.0, errc::tolerance_non_positive, "epsilon must be positive");
    for (std::size_t m = 0; m < family.size(); ++m)
        require(is_bv_r(family[m], r), errc::not_bv_r,
                "member " + std::to_string(m) + " has variation above r");

    const std::size_t count = family.size();
    std::vector<std::vector<double>> us(count), vs(count);
    double ulo = 0.0, uhi = 0.0, vlo = 0.0, vhi = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
        auto [u, v] = jordan_decompose(family[m]);
        if (m == 0) {
            ulo = u.lo, uhi = u.hi, vlo = v.lo, vhi = v.hi;
        } else {
            ulo = std::min(ulo, u.lo), uhi = std::max(uhi, u.hi);
            vlo = std::min(vlo, v.lo), vhi = std::max(vhi, v.hi);
        }
        us[m] = std::move(u.values);
        vs[m] = std::move(v.values);
    }

    SelectionResult res;
    res.epsilon = epsilon;
    res.sample_points = detail::default_samples(family.chain, sample_points);
    res.selected = detail::all_indices(count);
    const double half = epsilon / 2.0;
    for (auto p : res.sample_points)
        detail::bin_select(
            res.selected, p, ulo, uhi, half,
            [&](std::size_t m, std::size_t x) { return us[m][x]; }, res.trace);
    for (auto p : res.sample_points)
        detail::bin_select(
            res.selected, p, vlo, vhi, half,
            [&](std::size_t m, std::size_t x) { return vs[m][x]; }, res.trace);
    return res;
}

// ---------------------------------------------------------------------------
// select_poset_valued

// Members are increasing maps into a shared poset, stored as target indices.
// Composition with the indicator separators of the target turns each member
// into a bundle of increasing 0/1 functions; refining on every separator
// with epsilon < 1 leaves members that agree exactly at the sample points.
inline SelectionResult select_poset_valued(const Chain& chain, const FinitePoset& target,
                                           const std::vector<std::vector<std::size_t>>& members,
                                           double epsilon,
                                           std::vector<std::size_t> sample_points = {}) {
    require(!members.empty(), errc::empty_family, "selection from an empty family");
    require(epsilon > 0.0, errc::tolerance_non_positive, "epsilon must be positive");
    for (std::size_t m = 0; m < members.size(); ++m) {
        require(members[m].size() == chain.size, errc::size_mismatch,
                "member " + std::to_string(m) + " does not cover the chain");
        for (auto y : members[m])
            require(y < target.size(), errc::index_out_of_range, "member value not in target");
        for (std::size_t i = 0; i + 1 < chain.size; ++i)
            require(target.leq(members[m][i], members[m][i + 1]), errc::not_increasing,
                    "member " + std::to_string(m) + " is not increasing between points " +
                        std::to_string(i) + " and " + std::to_string(i + 1));
    }

    const FunctionFamily separators = separating_family(target);
    SelectionResult res;
    res.epsilon = epsilon;
    res.sample_points = detail::default_samples(chain, sample_points);
    res.selected = detail::all_indices(members.size());
    for (std::size_t s = 0; s < separators.size(); ++s)
        for (auto p : res.sample_points)
            detail::bin_select(
                res.selected, p, 0.0, 1.0, epsilon,
                [&](std::size_t m, std::size_t x) { return separators[s](members[m][x]); },
                res.trace);
    return res;
}

// ---------------------------------------------------------------------------
// select_metric_valued

// Members share a compact target. Composing with the rescaled distance
// separators gives real functions of variation at most r / diam; refining
// each with budget epsilon / diam bounds the target distance at the samples,
// because the separator family reconstructs distance exactly.
inline SelectionResult select_metric_valued(const std::vector<MetricChainFunction>& members,
                                            double r, double epsilon,
                                            std::vector<std::size_t> sample_points = {}) {
    require(!members.empty(), errc::empty_family, "selection from an empty family");
    require(epsilon > 0.0, errc::tolerance_non_positive, "epsilon must be positive");
    const Chain& chain = members.front().chain;
    const FiniteMetricSpace& target = members.front().target;
    for (std::size_t m = 0; m < members.size(); ++m) {
        require(members[m].target == target && members[m].chain == chain, errc::target_mismatch,
                "member " + std::to_string(m) + " lives on a different chain or target");
        require(is_bv_r(members[m], r), errc::not_bv_r,
                "member " + std::to_string(m) + " has variation above r");
    }

    SelectionResult res;
    res.epsilon = epsilon;
    res.sample_points = detail::default_samples(chain, sample_points);
    res.selected = detail::all_indices(members.size());

    const double diam = target.diameter();
    if (diam <= 0.0) return res; // single-point target: nothing to refine

    const FunctionFamily separators = lipschitz_separators(target);
    const double budget = epsilon / diam;
    for (std::size_t s = 0; s < separators.size(); ++s) {
        // Jordan split of the composed functions, half budget each part.
        const std::size_t count = members.size();
        std::vector<std::vector<double>> us(count), vs(count);
        double ulo = 0.0, uhi = 0.0, vlo = 0.0, vhi = 0.0;
        for (std::size_t m = 0; m < count; ++m) {
            std::vector<double> composed(chain.size);
            for (std::size_t x = 0; x < chain.size; ++x)
                composed[x] = separators[s](members[m].values[x]);
            ChainFunction g(chain, std::move(composed), 0.0, 1.0);
            auto [u, v] = jordan_decompose(g);
            if (m == 0) {
                ulo = u.lo, uhi = u.hi, vlo = v.lo, vhi = v.hi;
            } else {
                ulo = std::min(ulo, u.lo), uhi = std::max(uhi, u.hi);
                vlo = std::min(vlo, v.lo), vhi = std::max(vhi, v.hi);
            }
            us[m] = std::move(u.values);
            vs[m] = std::move(v.values);
        }
        for (auto p : res.sample_points)
            detail::bin_select(
                res.selected, p, ulo, uhi, budget / 2.0,
                [&](std::size_t m, std::size_t x) { return us[m][x]; }, res.trace);
        for (auto p : res.sample_points)
            detail::bin_select(
                res.selected, p, vlo, vhi, budget / 2.0,
                [&](std::size_t m, std::size_t x) { return vs[m][x]; }, res.trace);
    }
    return res;
}

// ---------------------------------------------------------------------------
// diagonal_select_stream

// Lazily evaluated sequence of functions on an enumerated point list. The
// evaluator must be deterministic in (member, point).
struct FunctionStream {
    std::function<double(std::size_t member, std::size_t point)> eval;
    double lo = 0.0;
    double hi = 1.0;
};

struct StreamSelection {
    std::vector<std::vector<std::size_t>> stages; // stages[m] = surviving indices of stage m
    std::vector<std::size_t> diagonal;            // diagonal[m] = stages[m][m]
    std::size_t draws = 0;                        // stream indices evaluated
};

// Constructive diagonal argument at finite depth. Stage m refines the
// previous stage by bin-selection with tolerance schedule[m] at points
// 0..m, so stage-m survivors are pairwise within schedule[m] at all of the
// first m+1 points, and the diagonal inherits that from its m-th entry on.
// Fresh stream indices are appended to the base pool and the whole cascade
// is recomputed, which keeps the stages nested.
inline StreamSelection diagonal_select_stream(const FunctionStream& stream,
                                              const std::vector<double>& schedule,
                                              std::size_t depth, std::size_t draw_budget) {
    require(depth >= 1, errc::bad_size, "depth must be at least one stage");
    require(schedule.size() >= depth, errc::bad_size, "schedule shorter than the depth");
    for (std::size_t m = 0; m < depth; ++m) {
        require(schedule[m] > 0.0, errc::precondition, "tolerances must be positive");
        if (m + 1 < depth)
            require(schedule[m + 1] < schedule[m], errc::precondition,
                    "tolerances must strictly decrease");
    }
    require(draw_budget >= 1, errc::bad_size, "draw budget must be positive");

    // Cache of evaluated (member, point) pairs.
    std::vector<std::vector<double>> cache; // cache[member][point], points 0..depth-1
    auto value_at = [&](std::size_t member, std::size_t point) {
        if (member >= cache.size()) cache.resize(member + 1);
        auto& row = cache[member];
        if (row.empty()) row.assign(depth, std::numeric_limits<double>::quiet_NaN());
        if (std::isnan(row[point])) row[point] = stream.eval(member, point);
        return row[point];
    };

    std::size_t pool = std::min(draw_budget, depth + 1);
    while (true) {
        StreamSelection sel;
        sel.stages.clear();
        std::vector<std::size_t> current(pool);
        for (std::size_t i = 0; i < pool; ++i) current[i] = i;
        bool ok = true;
        std::vector<TraceStep> trace;
        for (std::size_t m = 0; m < depth && ok; ++m) {
            for (std::size_t p = 0; p <= m; ++p)
                detail::bin_select(current, p, stream.lo, stream.hi, schedule[m], value_at,
                                   trace);
            if (current.size() < m + 2 && m + 1 < depth) ok = false; // room for the next diagonal
            if (current.size() < m + 1) ok = false;
            sel.stages.push_back(current);
        }
        if (ok) {
            sel.diagonal.resize(depth);
            for (std::size_t m = 0; m < depth; ++m) sel.diagonal[m] = sel.stages[m][m];
            sel.draws = pool;
            return sel;
        }
        if (pool >= draw_budget)
            fail(errc::budget_exhausted,
                 "stage " + std::to_string(sel.stages.size()) + " of " + std::to_string(depth) +
                     " reached with draw budget " + std::to_string(draw_budget));
        ++pool;
    }
}

} // namespace ordnung
