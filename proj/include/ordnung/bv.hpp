#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordnung/errors.hpp"
#include "ordnung/order.hpp"

namespace ordnung {

// Bounded real-valued function on a chain, with a declared range [lo, hi].
struct ChainFunction {
    Chain chain;
    std::vector<double> values; // one per chain point
    double lo = 0.0;
    double hi = 1.0;

    ChainFunction(Chain c, std::vector<double> v, double range_lo, double range_hi)
        : chain(std::move(c)), values(std::move(v)), lo(range_lo), hi(range_hi) {
        require(lo <= hi, errc::schema_error, "range must satisfy c <= d");
        require(values.size() == chain.size, errc::schema_error,
                "function needs one value per chain point");
        for (double x : values)
            require(lo <= x && x <= hi, errc::schema_error, "value outside declared range");
    }

    std::size_t size() const { return values.size(); }
    double operator()(std::size_t i) const { return values[i]; }
};

// Ordered list of functions on one chain, bounded by a common range.
struct FunctionFamily {
    Chain chain;
    std::vector<ChainFunction> members;
    double lo = 0.0;
    double hi = 1.0;

    FunctionFamily(Chain c, std::vector<ChainFunction> m, double range_lo, double range_hi)
        : chain(std::move(c)), members(std::move(m)), lo(range_lo), hi(range_hi) {
        require(lo <= hi, errc::schema_error, "range must satisfy c <= d");
        for (const auto& f : members) {
            require(f.chain == chain, errc::schema_error, "family members must share the chain");
            for (double x : f.values)
                require(lo <= x && x <= hi, errc::schema_error,
                        "member value outside the family range");
        }
    }

    static FunctionFamily from_rows(Chain c, const std::vector<std::vector<double>>& rows,
                                    double range_lo, double range_hi) {
        std::vector<ChainFunction> m;
        m.reserve(rows.size());
        for (const auto& row : rows) m.emplace_back(c, row, range_lo, range_hi);
        return FunctionFamily(std::move(c), std::move(m), range_lo, range_hi);
    }

    std::size_t size() const { return members.size(); }
    const ChainFunction& operator[](std::size_t i) const { return members[i]; }
};

// Function from a chain into a finite metric space, stored as point indices.
struct MetricChainFunction {
    Chain chain;
    FiniteMetricSpace target;
    std::vector<std::size_t> values;

    MetricChainFunction(Chain c, FiniteMetricSpace t, std::vector<std::size_t> v)
        : chain(std::move(c)), target(std::move(t)), values(std::move(v)) {
        require(values.size() == chain.size, errc::schema_error,
                "function needs one value per chain point");
        for (auto p : values)
            require(p < target.size(), errc::schema_error, "value is not a target point");
    }
};

// ---------------------------------------------------------------------------
// variation

// Sum of consecutive jumps. On a finite chain this equals the supremum over
// all subchains: dropping a point can only merge two jumps into one, and
// |a+b| <= |a|+|b|.
inline double variation(const ChainFunction& f) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) total += std::abs(f(i + 1) - f(i));
    return total;
}

// Variation of f restricted to points with index <= cutoff.
inline double restricted_variation(const ChainFunction& f, std::size_t cutoff) {
    require(cutoff < f.size(), errc::index_out_of_range, "cutoff index out of range");
    double total = 0.0;
    for (std::size_t i = 0; i < cutoff; ++i) total += std::abs(f(i + 1) - f(i));
    return total;
}

inline double metric_variation(const MetricChainFunction& f) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < f.values.size(); ++i)
        total += f.target.dist(f.values[i + 1], f.values[i]);
    return total;
}

// ---------------------------------------------------------------------------
// jordan_decompose

// Splits f into increasing u, v with u - v = f: u is the running variation,
// v its gap to f. Ranges of the parts are their actual min/max.
inline std::pair<ChainFunction, ChainFunction> jordan_decompose(const ChainFunction& f) {
    const std::size_t n = f.size();
    std::vector<double> u(n, 0.0), v(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) u[i] = u[i - 1] + std::abs(f(i) - f(i - 1));
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i] - f(i);
    auto bounds = [](const std::vector<double>& w) {
        double lo = w[0], hi = w[0];
        for (double x : w) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return std::pair{lo, hi};
    };
    auto [ulo, uhi] = bounds(u);
    auto [vlo, vhi] = bounds(v);
    return {ChainFunction(f.chain, std::move(u), ulo, uhi),
            ChainFunction(f.chain, std::move(v), vlo, vhi)};
}

// ---------------------------------------------------------------------------
// is_bv_r

inline bool is_bv_r(const ChainFunction& f, double r) {
    require(r >= 0.0, errc::negative_radius, "variation radius must be non-negative");
    return variation(f) <= r;
}

inline bool is_bv_r(const MetricChainFunction& f, double r) {
    require(r >= 0.0, errc::negative_radius, "variation radius must be non-negative");
    return metric_variation(f) <= r;
}

// ---------------------------------------------------------------------------
// monotonicity helpers

inline bool is_increasing(const ChainFunction& f) {
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        if (f(i) > f(i + 1)) return false;
    return true;
}

// First adjacent violation, or none.
inline std::optional<std::size_t> first_decrease(const ChainFunction& f) {
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        if (f(i) > f(i + 1)) return i;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// lipschitz_separators

// For each target point y the map x -> d(y, x) / diameter. The family is
// 1-Lipschitz after rescaling, lands in [0,1], and separates target points.
// A zero-diameter space (a single point) yields constant zero.
inline FunctionFamily lipschitz_separators(const FiniteMetricSpace& m) {
    const std::size_t n = m.size();
    const double diam = m.diameter();
    Chain ground(n);
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    if (diam > 0.0)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t x = 0; x < n; ++x) rows[y][x] = m.dist(y, x) / diam;
    return FunctionFamily::from_rows(std::move(ground), rows, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// separating_family

// Indicators of principal up-sets {y : x <= y}. Each is increasing for the
// poset and the family separates points: for x != y antisymmetry puts one of
// them outside the other's up-set.
inline FunctionFamily separating_family(const FinitePoset& p) {
    const std::size_t n = p.size();
    Chain ground(n);
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) rows[x][y] = p.leq(x, y) ? 1.0 : 0.0;
    return FunctionFamily::from_rows(std::move(ground), rows, 0.0, 1.0);
}

} // namespace ordnung
