#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ordnung/bv.hpp"
#include "ordnung/errors.hpp"
#include "ordnung/order.hpp"

namespace ordnung {

using Seed = std::uint64_t;

namespace detail {

// splitmix64. Self-contained so that seeded corpora are bit-identical across
// standard libraries and platforms.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(Seed seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw from {0, .., n-1}.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % n;
    }
};

inline constexpr int kValueBits = 20;
inline constexpr std::uint64_t kValueScale = std::uint64_t{1} << kValueBits;

// Dyadic draw from [0, 1]: k / 2^20. Keeping generated values on a dyadic
// grid makes variation sums and Jordan reconstruction exact in doubles.
inline double dyadic_unit(SplitMix64& rng) {
    return static_cast<double>(rng.below(kValueScale + 1)) /
           static_cast<double>(kValueScale);
}

} // namespace detail

// ---------------------------------------------------------------------------
// gen_rademacher

// Sign of sin(2^n pi x) at the uniform midpoints x_j = (2j+1) / (2 grid),
// evaluated in integer arithmetic: with t = 2^n x, the sign is + when
// t mod 2 lies in (0,1) and - when it lies in (1,2). Midpoints of an
// adequate power-of-two grid never land on a zero; on other grids a zero is
// resolved as the sign just above it.
inline FunctionFamily gen_rademacher(std::size_t n_max, std::size_t grid) {
    require(n_max >= 1, errc::bad_size, "need at least one function");
    require(n_max <= 40, errc::too_large, "sign cells below 2^-40 are not resolvable");
    require(grid >= 1, errc::grid_too_coarse, "empty grid");
    Chain chain(grid);
    std::vector<std::vector<double>> rows(n_max, std::vector<double>(grid, 0.0));
    for (std::size_t n = 1; n <= n_max; ++n) {
        const std::uint64_t two_g = 2 * static_cast<std::uint64_t>(grid);
        for (std::size_t j = 0; j < grid; ++j) {
            const std::uint64_t num = (std::uint64_t{1} << (n - 1)) * (2 * j + 1);
            const std::uint64_t r = num % two_g;
            rows[n - 1][j] = (r < static_cast<std::uint64_t>(grid)) ? 1.0 : -1.0;
        }
    }
    const auto& finest = rows[n_max - 1];
    const bool has_plus = std::find(finest.begin(), finest.end(), 1.0) != finest.end();
    const bool has_minus = std::find(finest.begin(), finest.end(), -1.0) != finest.end();
    require(has_plus && has_minus, errc::grid_too_coarse,
            "grid does not sample both sign cells of the finest function");
    return FunctionFamily::from_rows(std::move(chain), rows, -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// gen_cantor_projections

// Chain enumerates {0,1}^k lexicographically; member m is the m-th
// coordinate projection.
inline FunctionFamily gen_cantor_projections(std::size_t k) {
    require(k >= 1, errc::bad_size, "need at least one coordinate");
    require(k <= 20, errc::too_large, "cube would have more than 2^20 points");
    const std::size_t points = std::size_t{1} << k;
    Chain chain(points);
    std::vector<std::vector<double>> rows(k, std::vector<double>(points, 0.0));
    for (std::size_t m = 0; m < k; ++m)
        for (std::size_t p = 0; p < points; ++p)
            rows[m][p] = static_cast<double>((p >> (k - 1 - m)) & 1u);
    return FunctionFamily::from_rows(std::move(chain), rows, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// gen_helly_powers

// t -> t^n for n = 1..n_max on a fixed grid in [0,1]. Powers are accumulated
// by repeated multiplication, which is monotone in t even after rounding.
inline FunctionFamily gen_helly_powers(std::size_t n_max, const std::vector<double>& grid) {
    require(n_max >= 1, errc::bad_size, "need at least one power");
    require(!grid.empty(), errc::precondition, "empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(grid[i] >= 0.0 && grid[i] <= 1.0, errc::precondition, "grid must lie in [0,1]");
        if (i + 1 < grid.size())
            require(grid[i] < grid[i + 1], errc::precondition, "grid must be strictly increasing");
    }
    Chain chain(grid.size());
    std::vector<std::vector<double>> rows(n_max, grid);
    for (std::size_t n = 1; n < n_max; ++n)
        for (std::size_t j = 0; j < grid.size(); ++j) rows[n][j] = rows[n - 1][j] * grid[j];
    return FunctionFamily::from_rows(std::move(chain), rows, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// gen_random_monotone

// Sorted dyadic draws from [0,1]. With pin_endpoints the members are
// strictly increasing bijective samples fixing 0 and 1, the shape of a
// sampled self-homeomorphism of the interval.
inline FunctionFamily gen_random_monotone(std::size_t count, std::size_t chain_size, Seed seed,
                                          bool pin_endpoints = false) {
    require(chain_size >= 1, errc::bad_size, "chain must have at least one point");
    require(!pin_endpoints || chain_size >= 2, errc::bad_size,
            "pinning endpoints needs two points");
    detail::SplitMix64 rng(seed);
    Chain chain(chain_size);
    std::vector<std::vector<double>> rows(count, std::vector<double>(chain_size, 0.0));
    for (auto& row : rows) {
        if (!pin_endpoints) {
            for (auto& v : row) v = detail::dyadic_unit(rng);
            std::sort(row.begin(), row.end());
            continue;
        }
        for (int attempt = 0; attempt < 1000; ++attempt) {
            row.front() = 0.0;
            row.back() = 1.0;
            for (std::size_t i = 1; i + 1 < chain_size; ++i) row[i] = detail::dyadic_unit(rng);
            std::sort(row.begin(), row.end());
            if (std::adjacent_find(row.begin(), row.end()) == row.end()) break;
        }
        require(std::adjacent_find(row.begin(), row.end()) == row.end(), errc::grid_too_coarse,
                "could not draw strictly increasing samples on the dyadic grid");
    }
    return FunctionFamily::from_rows(std::move(chain), rows, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// gen_random_bv

// Signed lattice walks: the total jump budget is a dyadic draw from [0, r],
// split integrally over the steps, so the variation of every member is the
// drawn budget exactly and never exceeds r.
inline FunctionFamily gen_random_bv(std::size_t count, std::size_t chain_size, double r,
                                    Seed seed) {
    require(chain_size >= 1, errc::bad_size, "chain must have at least one point");
    require(r > 0.0, errc::precondition, "variation budget must be positive");
    detail::SplitMix64 rng(seed);
    Chain chain(chain_size);
    const double scale = static_cast<double>(detail::kValueScale);
    const auto budget_max = static_cast<std::uint64_t>(r * scale);
    std::vector<std::vector<double>> rows(count, std::vector<double>(chain_size, 0.0));
    for (auto& row : rows) {
        if (chain_size == 1) continue;
        const std::uint64_t total = rng.below(budget_max + 1);
        // Split `total` into chain_size - 1 parts via sorted cut points.
        std::vector<std::uint64_t> cuts(chain_size - 2);
        for (auto& c : cuts) c = rng.below(total + 1);
        std::sort(cuts.begin(), cuts.end());
        std::vector<std::int64_t> walk(chain_size, 0);
        std::uint64_t prev = 0;
        for (std::size_t i = 0; i + 1 < chain_size; ++i) {
            const std::uint64_t next_cut = (i < cuts.size()) ? cuts[i] : total;
            const auto step = static_cast<std::int64_t>(next_cut - prev);
            prev = next_cut;
            const std::int64_t sign = (rng.next() & 1u) ? 1 : -1;
            walk[i + 1] = walk[i] + sign * step;
        }
        const std::int64_t low = *std::min_element(walk.begin(), walk.end());
        for (std::size_t i = 0; i < chain_size; ++i)
            row[i] = static_cast<double>(walk[i] - low) / scale;
    }
    return FunctionFamily::from_rows(std::move(chain), rows, 0.0, r);
}

// ---------------------------------------------------------------------------
// gen_random_topology

// Random subsets saturated under pairwise union and intersection. The hint
// is a soft floor on the number of opens; saturation may overshoot it.
inline FiniteTopology gen_random_topology(std::size_t ground_size, std::size_t open_count_hint,
                                          Seed seed) {
    require(ground_size >= 1, errc::bad_size, "ground must have at least one point");
    require(ground_size <= 15, errc::ground_too_large, "random topologies capped at 15 points");
    const std::uint64_t all = mask::full(ground_size);
    const std::size_t limit = std::size_t{1} << ground_size;
    if (open_count_hint >= limit) {
        std::vector<std::uint64_t> opens(limit);
        for (std::size_t m = 0; m < limit; ++m) opens[m] = m;
        return FiniteTopology(ground_size, std::move(opens));
    }
    detail::SplitMix64 rng(seed);
    std::set<std::uint64_t> opens{0, all};
    std::size_t attempts = 0;
    while (opens.size() < open_count_hint && attempts < 8 * open_count_hint + 16) {
        ++attempts;
        opens.insert(rng.next() & all);
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<std::uint64_t> cur(opens.begin(), opens.end());
            for (std::size_t i = 0; i < cur.size() && !grew; ++i)
                for (std::size_t j = i + 1; j < cur.size() && !grew; ++j) {
                    if (opens.insert(cur[i] | cur[j]).second) grew = true;
                    if (opens.insert(cur[i] & cur[j]).second) grew = true;
                }
        }
    }
    return FiniteTopology(ground_size,
                          std::vector<std::uint64_t>(opens.begin(), opens.end()));
}

} // namespace ordnung
