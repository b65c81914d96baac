#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordnung/bv.hpp"
#include "ordnung/detail/simplex.hpp"
#include "ordnung/errors.hpp"

namespace ordnung {

namespace detail {

// Point sets over chains of arbitrary length.
struct Bits {
    std::vector<std::uint64_t> w;

    explicit Bits(std::size_t n, bool ones = false)
        : w((n + 63) / 64, ones ? ~std::uint64_t{0} : 0) {
        if (ones && n % 64 != 0) w.back() = (std::uint64_t{1} << (n % 64)) - 1;
    }

    void set(std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }

    void and_assign(const Bits& o) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] &= o.w[i];
    }

    bool any() const {
        for (auto x : w)
            if (x) return true;
        return false;
    }

    std::size_t first() const {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i]) return i * 64 + static_cast<std::size_t>(__builtin_ctzll(w[i]));
        return w.size() * 64;
    }
};

} // namespace detail

// Certificate that a subfamily realizes every full below/above sign pattern
// at thresholds a < b. Pattern ids enumerate assignments of the certified
// indices: bit (k-1-j) of the id is set when indices[j] is constrained above
// b, clear when below a. Ascending ids are lexicographic with "below" first.
struct IndependenceWitness {
    std::vector<std::size_t> indices;
    double a = 0.0;
    double b = 1.0;
    std::vector<std::size_t> pattern_points; // one chain point per pattern id
};

inline bool pattern_above(std::uint64_t pattern, std::size_t j, std::size_t k) {
    return (pattern >> (k - 1 - j)) & 1u;
}

struct IndependenceOutcome {
    std::optional<IndependenceWitness> witness;
    std::uint64_t first_empty_pattern = 0; // meaningful only on refusal

    bool independent() const { return witness.has_value(); }
};

// Re-checks a witness against raw values with the strict inequalities.
inline bool witness_valid(const IndependenceWitness& w, const FunctionFamily& family) {
    const std::size_t k = w.indices.size();
    if (k == 0 || !(w.a < w.b)) return false;
    if (w.pattern_points.size() != (std::uint64_t{1} << k)) return false;
    std::vector<std::size_t> sorted(w.indices);
    std::sort(sorted.begin(), sorted.end());
    if (std::unique(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (auto i : w.indices)
        if (i >= family.size()) return false;
    for (std::uint64_t pid = 0; pid < w.pattern_points.size(); ++pid) {
        const std::size_t x = w.pattern_points[pid];
        if (x >= family.chain.size) return false;
        for (std::size_t j = 0; j < k; ++j) {
            const double v = family[w.indices[j]](x);
            if (pattern_above(pid, j, k) ? !(v > w.b) : !(v < w.a)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// independence_at

// Checks the 2^k full patterns only: a partial pattern's region contains the
// region of every full pattern extending it, so full patterns suffice.
inline IndependenceOutcome independence_at(const FunctionFamily& family,
                                           const std::vector<std::size_t>& indices, double a,
                                           double b) {
    require(a < b, errc::bad_thresholds, "independence thresholds need a < b");
    require(!indices.empty(), errc::bad_indices, "need at least one index");
    require(indices.size() <= 20, errc::bad_indices,
            "pattern enumeration is 2^k; capped at 20 indices");
    {
        std::vector<std::size_t> sorted(indices);
        std::sort(sorted.begin(), sorted.end());
        require(std::unique(sorted.begin(), sorted.end()) == sorted.end(), errc::bad_indices,
                "indices must be distinct");
    }
    for (auto i : indices)
        require(i < family.size(), errc::bad_indices, "member index out of range");

    const std::size_t k = indices.size();
    const std::size_t n = family.chain.size;
    std::vector<detail::Bits> below(k, detail::Bits(n)), above(k, detail::Bits(n));
    for (std::size_t j = 0; j < k; ++j) {
        const auto& f = family[indices[j]];
        for (std::size_t x = 0; x < n; ++x) {
            if (f(x) < a) below[j].set(x);
            if (f(x) > b) above[j].set(x);
        }
    }

    IndependenceWitness w;
    w.indices = indices;
    w.a = a;
    w.b = b;
    w.pattern_points.resize(std::size_t{1} << k);
    for (std::uint64_t pid = 0; pid < (std::uint64_t{1} << k); ++pid) {
        detail::Bits region(n, true);
        for (std::size_t j = 0; j < k; ++j) {
            region.and_assign(pattern_above(pid, j, k) ? above[j] : below[j]);
            if (!region.any()) break;
        }
        if (!region.any()) return {std::nullopt, pid};
        w.pattern_points[pid] = region.first();
    }
    return {std::move(w), 0};
}

// ---------------------------------------------------------------------------
// independence_search

namespace detail {

// Whether some pattern region is empty only changes when a threshold crosses
// a member value, so two probes per gap of the pooled values (plus sentinels
// outside the extremes) exhaust all threshold behaviours. Two probes, not
// one: a and b may land in the same gap.
inline std::vector<double> threshold_candidates(const FunctionFamily& family) {
    std::vector<double> vals;
    for (const auto& f : family.members) vals.insert(vals.end(), f.values.begin(), f.values.end());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<double> cand;
    if (vals.empty()) return cand;
    cand.push_back(vals.front() - 1.0);
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        const double w = vals[i + 1] - vals[i];
        cand.push_back(vals[i] + 0.25 * w);
        cand.push_back(vals[i] + 0.75 * w);
    }
    cand.push_back(vals.back() + 1.0);
    return cand;
}

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t pos = k; pos-- > 0;) {
        if (idx[pos] + (k - pos) < n) {
            ++idx[pos];
            for (std::size_t q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
            return true;
        }
    }
    return false;
}

} // namespace detail

// First witness over k-subsets (lexicographic) and candidate thresholds
// (increasing a, then b). A miss certifies that no k-subfamily is
// independent at any real thresholds.
inline std::optional<IndependenceWitness> independence_search(const FunctionFamily& family,
                                                              std::size_t k) {
    require(k >= 1 && k <= family.size(), errc::bad_size,
            "subfamily size must be between 1 and the family size");
    require(k <= 20, errc::bad_size, "pattern enumeration is 2^k; capped at 20");

    const std::size_t n = family.chain.size;
    const std::size_t count = family.size();
    const auto cand = detail::threshold_candidates(family);
    const std::size_t c = cand.size();

    // Region bitmaps per member and candidate threshold.
    std::vector<std::vector<detail::Bits>> below(count), above(count);
    std::vector<std::vector<std::uint8_t>> below_any(count), above_any(count);
    for (std::size_t m = 0; m < count; ++m) {
        below[m].assign(c, detail::Bits(n));
        above[m].assign(c, detail::Bits(n));
        below_any[m].assign(c, 0);
        above_any[m].assign(c, 0);
        for (std::size_t t = 0; t < c; ++t) {
            for (std::size_t x = 0; x < n; ++x) {
                const double v = family[m](x);
                if (v < cand[t]) below[m][t].set(x);
                if (v > cand[t]) above[m][t].set(x);
            }
            below_any[m][t] = below[m][t].any();
            above_any[m][t] = above[m][t].any();
        }
    }

    std::vector<std::size_t> idx(k);
    for (std::size_t j = 0; j < k; ++j) idx[j] = j;
    do {
        // Pattern regions only shrink as b grows past a, so for each a the
        // smallest candidate b > a decides: a failure there persists for
        // every larger b. This collapses the threshold scan to one b per a
        // and still yields the first (a, then b) witness of the full scan.
        for (std::size_t ai = 0; ai + 1 < c; ++ai) {
            const std::size_t bi = ai + 1;
            bool plausible = true;
            for (std::size_t j = 0; j < k && plausible; ++j)
                plausible = below_any[idx[j]][ai] && above_any[idx[j]][bi];
            if (!plausible) continue;

            bool all_realized = true;
            IndependenceWitness w;
            w.indices = idx;
            w.a = cand[ai];
            w.b = cand[bi];
            w.pattern_points.resize(std::size_t{1} << k);
            for (std::uint64_t pid = 0; pid < (std::uint64_t{1} << k) && all_realized; ++pid) {
                detail::Bits region(n, true);
                for (std::size_t j = 0; j < k; ++j) {
                    region.and_assign(pattern_above(pid, j, k) ? above[idx[j]][bi]
                                                               : below[idx[j]][ai]);
                    if (!region.any()) break;
                }
                if (!region.any())
                    all_realized = false;
                else
                    w.pattern_points[pid] = region.first();
            }
            if (all_realized) return w;
        }
    } while (detail::next_combination(idx, count));
    return std::nullopt;
}

// Largest certified subfamily size. Independence at k+1 restricts to any k
// of its indices, so the first failing k stops the scan.
inline std::pair<std::size_t, std::optional<IndependenceWitness>> max_independent_size(
    const FunctionFamily& family) {
    std::optional<IndependenceWitness> best;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= family.size(); ++k) {
        auto w = independence_search(family, k);
        if (!w) break;
        best_k = k;
        best = std::move(w);
    }
    return {best_k, std::move(best)};
}

// ---------------------------------------------------------------------------
// l1_constant

// Best a with a * sum|c_i| <= sup_x |sum c_i f_i(x)| for all coefficients.
struct L1Certificate {
    double constant = 0.0;
    std::vector<double> coefficients; // absolute sum 1, achieving the minimax
    double tolerance = 0.0;
};

// Minimizes the sup-norm of coefficient combinations over the l1 sphere.
// On each sign orthant the objective is a maximum of linear functions of the
// magnitudes over the probability simplex, solved exactly as a small LP; the
// best orthant wins. Orthants come in +/- pairs with equal objective, so the
// first coefficient's sign is pinned.
inline L1Certificate l1_constant(const FunctionFamily& family, double tolerance) {
    require(!family.members.empty(), errc::empty_family, "l1 constant of an empty family");
    require(tolerance > 0.0, errc::tolerance_non_positive, "tolerance must be positive");
    const std::size_t k = family.size();
    const std::size_t n = family.chain.size;
    require(k <= 24, errc::too_large, "orthant enumeration is 2^(k-1); capped at 24 members");

    L1Certificate best;
    best.tolerance = tolerance;
    bool have = false;
    std::vector<double> sign(k, 1.0);
    for (std::uint64_t orthant = 0; orthant < (std::uint64_t{1} << (k - 1)); ++orthant) {
        for (std::size_t j = 1; j < k; ++j) sign[j] = ((orthant >> (j - 1)) & 1u) ? -1.0 : 1.0;
        std::vector<std::vector<double>> rows(2 * n, std::vector<double>(k));
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t j = 0; j < k; ++j) {
                const double v = sign[j] * family[j](x);
                rows[2 * x][j] = v;
                rows[2 * x + 1][j] = -v;
            }
        }
        auto sol = detail::minimize_max_over_simplex(rows);
        if (!have || sol.value < best.constant) {
            have = true;
            best.constant = sol.value;
            best.coefficients.resize(k);
            for (std::size_t j = 0; j < k; ++j) best.coefficients[j] = sign[j] * sol.point[j];
        }
    }
    if (best.constant < 0.0) best.constant = 0.0; // objective is a max of |.|
    return best;
}

// ---------------------------------------------------------------------------
// dlp_violation

// Two-constants submatrix: values near alpha on and above the diagonal of
// the selected rows/columns, near beta strictly below it, with the constants
// at least delta apart.
struct DlpWitness {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    double alpha = 0.0;
    double beta = 0.0;
};

inline bool dlp_witness_valid(const std::vector<std::vector<double>>& values, const DlpWitness& w,
                              double delta, double tail_tolerance) {
    if (std::abs(w.alpha - w.beta) < delta) return false;
    const std::size_t k = w.rows.size();
    if (w.cols.size() != k) return false;
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = 0; q < k; ++q) {
            const double v = values[w.rows[p]][w.cols[q]];
            const double c = (p <= q) ? w.alpha : w.beta;
            if (std::abs(v - c) > tail_tolerance) return false;
        }
    return true;
}

inline std::optional<DlpWitness> dlp_violation(const std::vector<std::vector<double>>& values,
                                               double delta, double tail_tolerance,
                                               std::size_t k) {
    const std::size_t nrows = values.size();
    require(nrows >= 1, errc::bad_size, "empty matrix");
    const std::size_t ncols = values[0].size();
    for (const auto& row : values)
        require(row.size() == ncols, errc::bad_size, "ragged matrix");
    require(k >= 1 && k <= std::min(nrows, ncols), errc::bad_size,
            "k must be between 1 and min(rows, cols)");
    require(delta > 0.0, errc::precondition, "delta must be positive");
    require(tail_tolerance >= 0.0, errc::precondition, "tail tolerance must be non-negative");

    std::vector<std::size_t> ri(k), ci(k);
    for (std::size_t j = 0; j < k; ++j) ri[j] = j;
    do {
        for (std::size_t j = 0; j < k; ++j) ci[j] = j;
        do {
            double ulo = 0.0, uhi = 0.0, llo = 0.0, lhi = 0.0;
            bool ufirst = true, lfirst = true;
            for (std::size_t p = 0; p < k; ++p) {
                for (std::size_t q = 0; q < k; ++q) {
                    const double v = values[ri[p]][ci[q]];
                    if (p <= q) {
                        ulo = ufirst ? v : std::min(ulo, v);
                        uhi = ufirst ? v : std::max(uhi, v);
                        ufirst = false;
                    } else {
                        llo = lfirst ? v : std::min(llo, v);
                        lhi = lfirst ? v : std::max(lhi, v);
                        lfirst = false;
                    }
                }
            }
            // Both constants must be pinned by observations. Constants sit at
            // the edges of their feasible windows, nudged by ulps so the
            // |value - constant| <= tail_tolerance checks hold exactly on
            // doubles.
            if (!ufirst && !lfirst) {
                auto low_edge = [&](double mx, double mn) -> std::optional<double> {
                    double c = mx - tail_tolerance;
                    for (int i = 0; i < 8 && mx - c > tail_tolerance; ++i)
                        c = std::nextafter(c, mx);
                    if (mx - c > tail_tolerance || c - mn > tail_tolerance) return std::nullopt;
                    return c;
                };
                auto high_edge = [&](double mx, double mn) -> std::optional<double> {
                    double c = mn + tail_tolerance;
                    for (int i = 0; i < 8 && c - mn > tail_tolerance; ++i)
                        c = std::nextafter(c, mn);
                    if (c - mn > tail_tolerance || mx - c > tail_tolerance) return std::nullopt;
                    return c;
                };
                const auto alpha_low = low_edge(uhi, ulo);
                const auto alpha_high = high_edge(uhi, ulo);
                const auto beta_low = low_edge(lhi, llo);
                const auto beta_high = high_edge(lhi, llo);
                DlpWitness w;
                w.rows = ri;
                w.cols = ci;
                if (alpha_low && beta_high && *beta_high - *alpha_low >= delta) {
                    w.alpha = *alpha_low;
                    w.beta = *beta_high;
                    return w;
                }
                if (alpha_high && beta_low && *alpha_high - *beta_low >= delta) {
                    w.alpha = *alpha_high;
                    w.beta = *beta_low;
                    return w;
                }
            }
        } while (detail::next_combination(ci, ncols));
    } while (detail::next_combination(ri, nrows));
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// independence_implies_l1

struct L1BoundCheck {
    double bound = 0.0; // (b - a) / 2
    L1Certificate certificate;
    bool certified = false;
};

// The witnessed subfamily's l1 constant is at least (b-a)/2: splitting any
// coefficient vector by sign and evaluating at the witness points of the
// matching pattern and its swap yields two combination values more than
// (b-a) * sum|c_i| apart, so one of them has modulus above the bound.
inline L1BoundCheck independence_implies_l1(const IndependenceWitness& witness,
                                            const FunctionFamily& family,
                                            double tolerance = 1e-6) {
    require(witness_valid(witness, family), errc::invalid_witness,
            "witness does not validate against the family");
    std::vector<ChainFunction> sub;
    sub.reserve(witness.indices.size());
    for (auto i : witness.indices) sub.push_back(family[i]);
    FunctionFamily subfamily(family.chain, std::move(sub), family.lo, family.hi);

    L1BoundCheck out;
    out.bound = (witness.b - witness.a) / 2.0;
    out.certificate = l1_constant(subfamily, tolerance);
    out.certified = out.certificate.constant >= out.bound - tolerance;
    return out;
}

} // namespace ordnung
